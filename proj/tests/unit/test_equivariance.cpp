#include <gtest/gtest.h>

#include <random>

#include "deeplq/equivariance.hpp"
#include "oracles.hpp"

using namespace deeplq;
using namespace deeplq::testing;

namespace {

PolynomialCoefficients random_coefficients(std::mt19937_64& rng, int degree) {
  std::normal_distribution<double> normal;
  PolynomialCoefficients c;
  for (int h = 0; h <= degree; ++h) {
    c.a.push_back(normal(rng));
    c.b.push_back(normal(rng));
    c.q.push_back(normal(rng));
    c.r.push_back(normal(rng));
  }
  return c;
}

Mat random_normal_matrix(std::mt19937_64& rng, int n) {
  // Orthogonal conjugate of a real block-diagonal with rotation blocks.
  Eigen::HouseholderQR<Mat> qr(random_matrix(rng, n, n));
  const Mat U = qr.householderQ();
  Mat D = Mat::Zero(n, n);
  std::normal_distribution<double> normal;
  int i = 0;
  for (; i + 1 < n; i += 2) {
    const double a = normal(rng), b = normal(rng);
    D(i, i) = a;
    D(i + 1, i + 1) = a;
    D(i, i + 1) = b;
    D(i + 1, i) = -b;
  }
  if (i < n) D(i, i) = normal(rng);
  return U * D * U.transpose();
}

Mat permutation_matrix(const std::vector<int>& p) {
  const int n = static_cast<int>(p.size());
  Mat P = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) P(i, p[i]) = 1.0;
  return P;
}

}  // namespace

TEST(Equivariance, PolynomialSystemsAreEquivariant) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 4, dx = 1 + trial % 2, du = 1 + (trial / 2) % 2;
    const Mat F = random_matrix(rng, n, n, 0.5);
    const auto T = Transformation::make(F, dx, du);
    const auto sys = make_polynomial_system(T, random_coefficients(rng, 3));
    const auto v = check_equivariant(T, sys);
    EXPECT_TRUE(v.passed) << v.dynamics_A << " " << v.dynamics_B << " " << v.cost;
  }
}

TEST(Equivariance, GenericSystemIsNotEquivariant) {
  std::mt19937_64 rng(2);
  const auto T = Transformation::make(random_matrix(rng, 3, 3), 1, 1);
  LqSystem sys;
  sys.n = 3;
  sys.A = random_matrix(rng, 3, 3);
  sys.B = Mat(Mat::Identity(3, 3));
  sys.Q = Mat(Mat::Identity(3, 3));
  sys.R = Mat(Mat::Identity(3, 3));
  EXPECT_FALSE(check_equivariant(T, sys).passed);
}

TEST(Equivariance, NormalDecompositionOfTheCost) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 5, dx = 1 + trial % 2, du = 1 + (trial / 3) % 2;
    const auto T = Transformation::make(random_normal_matrix(rng, n), dx, du);
    ASSERT_TRUE(T.is_normal());
    std::normal_distribution<double> normal;
    const double q = 0.5 + std::abs(normal(rng)), r = 0.5 + std::abs(normal(rng));
    const Mat Q = q * Mat::Identity(n * dx, n * dx);
    const Mat R = r * Mat::Identity(n * du, n * du);
    const auto d = normal_decomposition_check(T, Q, R, random_matrix(rng, n * dx, 1), random_matrix(rng, n * du, 1));
    EXPECT_LE(d.residual, 1e-9) << d.lhs << " vs " << d.rhs;
  }
}

TEST(Equivariance, NonNormalTransformationIsRefused) {
  Mat F(2, 2);
  F << 1, 1, 0, 1;
  const auto T = Transformation::make(F, 1, 1);
  EXPECT_FALSE(T.is_normal());
  EXPECT_THROW(normal_decomposition_check(T, Mat::Identity(2, 2), Mat::Identity(2, 2), Vec::Ones(2), Vec::Ones(2)),
               DomainError);
}

TEST(Equivariance, SymmetricStructuredMatchesPolynomialAndTeamModel) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 5;
    const Mat G = random_matrix(rng, n, n, 0.5);
    const Mat F = 0.5 * (G + G.transpose());
    const auto c = random_coefficients(rng, 3);
    const auto structured = make_symmetric_structured(F, c);
    const auto joint = structured.joint();
    const auto poly = make_polynomial_system(Transformation::make(F, 1, 1), c);
    const double scale = 1.0 + poly.A.at(0).norm();
    EXPECT_LE((joint.A.at(0) - poly.A.at(0)).norm(), 1e-9 * scale);
    EXPECT_LE((joint.B.at(0) - poly.B.at(0)).norm(), 1e-9 * (1.0 + poly.B.at(0).norm()));
    EXPECT_LE((joint.Q.at(0) - poly.Q.at(0)).norm(), 1e-9 * (1.0 + poly.Q.at(0).norm()));
    EXPECT_TRUE(check_equivariant(Transformation::make(F, 1, 1), joint).passed);

    // The feature factors are orthonormal and the team model flattens to the
    // same joint dynamics.
    const Mat gram = structured.alpha.transpose() * structured.alpha / n;
    EXPECT_LE((gram - Mat::Identity(n, n)).norm(), 1e-9);
    const auto team = structured.to_team_model();
    const auto cs = assemble_centralized(team, 0.0);
    EXPECT_LE((cs.A - joint.A.at(0)).norm(), 1e-9 * scale);
    EXPECT_LE((cs.B - joint.B.at(0)).norm(), 1e-9 * (1.0 + poly.B.at(0).norm()));
    EXPECT_LE((n * cs.Q - joint.Q.at(0)).norm(), 1e-9 * (1.0 + poly.Q.at(0).norm()));
  }
}

TEST(Equivariance, PermutationStructuredPassesEveryPermutation) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  for (int n = 1; n <= 5; ++n) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto sys = make_permutation_structured(normal(rng), normal(rng), normal(rng), normal(rng), 1.0,
                                                   normal(rng), 1.0, normal(rng), n);
      const auto v = check_all_permutations(sys);
      EXPECT_TRUE(v.passed) << "n=" << n;
      // Independent enumeration agrees on a random sample.
      const auto perms = heap_permutations(n);
      std::uniform_int_distribution<std::size_t> pick(0, perms.size() - 1);
      const auto p = perms[pick(rng)];
      EXPECT_TRUE(check_equivariant(Transformation::make(permutation_matrix(p), 1, 1), sys, 0.0, 1e-10).passed);
    }
  }
}

TEST(Equivariance, BrokenPermutationSymmetryIsCaught) {
  auto sys = make_permutation_structured(0.5, 0.1, 1.0, 0.0, 1.0, 0.2, 1.0, 0.0, 4);
  Mat A = sys.A.at(0);
  A(0, 1) += 0.3;
  sys.A = A;
  EXPECT_FALSE(check_all_permutations(sys).passed);
}

TEST(Equivariance, HeapEnumerationIsComplete) {
  EXPECT_EQ(heap_permutations(5).size(), 120u);
  auto perms = heap_permutations(4);
  std::sort(perms.begin(), perms.end());
  EXPECT_EQ(std::unique(perms.begin(), perms.end()), perms.end());
}

TEST(Equivariance, SizeMismatchIsInputError) {
  const auto T = Transformation::make(Mat::Identity(3, 3), 1, 1);
  const auto sys = make_permutation_structured(1, 0, 1, 0, 1, 0, 1, 0, 2);
  EXPECT_THROW(check_equivariant(T, sys), InputError);
}
