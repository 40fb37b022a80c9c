#include "deeplq/equivariance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <unsupported/Eigen/KroneckerProduct>

namespace deeplq {

Transformation Transformation::make(const Mat& F, int dx, int du) {
  if (F.rows() != F.cols() || F.rows() < 1) throw InputError("transformation must be a nonempty square matrix");
  if (dx < 1 || du < 1) throw InputError("transformation lift dimensions must be positive");
  Transformation T;
  T.F = F;
  T.dx = dx;
  T.du = du;
  T.Fx = Eigen::kroneckerProduct(F, Mat::Identity(dx, dx));
  T.Fu = Eigen::kroneckerProduct(F, Mat::Identity(du, du));
  return T;
}

bool Transformation::is_normal(double tol) const {
  const double scale = std::max(1.0, F.squaredNorm());
  return (F.transpose() * F - F * F.transpose()).norm() <= tol * scale;
}

namespace {

void check_dims(const Transformation& F, const LqSystem& sys, double t) {
  const int nx = sys.n * sys.dx;
  const int nu = sys.n * sys.du;
  if (F.n() != sys.n || F.dx != sys.dx || F.du != sys.du) throw InputError("transformation and system sizes differ");
  if (sys.A.at(t).rows() != nx || sys.A.at(t).cols() != nx || sys.B.at(t).rows() != nx ||
      sys.B.at(t).cols() != nu || sys.Q.at(t).rows() != nx || sys.Q.at(t).cols() != nx ||
      sys.R.at(t).rows() != nu || sys.R.at(t).cols() != nu) {
    throw InputError("LQ system matrices have inconsistent sizes");
  }
}

Mat rectangular_identity(int rows, int cols) {
  Mat E = Mat::Zero(rows, cols);
  for (int d = 0; d < std::min(rows, cols); ++d) E(d, d) = 1.0;
  return E;
}

Mat poly(const Mat& base, const std::vector<double>& c, const Mat& identity) {
  Mat out = Mat::Zero(identity.rows(), identity.cols());
  Mat power = identity;
  for (std::size_t h = 0; h < c.size(); ++h) {
    if (h > 0) power = base * power;
    out += c[h] * power;
  }
  return out;
}

}  // namespace

EquivarianceVerdict check_equivariant(const Transformation& F, const LqSystem& sys, double t, double tol,
                                      std::uint64_t seed, int basis_size) {
  check_dims(F, sys, t);
  const Mat& A = sys.A.at(t);
  const Mat& B = sys.B.at(t);
  const Mat& Q = sys.Q.at(t);
  const Mat& R = sys.R.at(t);
  EquivarianceVerdict v;
  v.dynamics_A = (F.Fx * A - A * F.Fx).norm() / (1.0 + A.norm());
  v.dynamics_B = (F.Fx * B - B * F.Fu).norm() / (1.0 + B.norm());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const Mat FxtFx = F.Fx.transpose() * F.Fx;
  const Mat FutFu = F.Fu.transpose() * F.Fu;
  for (int b = 0; b < basis_size; ++b) {
    Vec x(A.rows()), u(B.cols());
    for (auto& e : x) e = normal(rng);
    for (auto& e : u) e = normal(rng);
    // tr(Fx'Fx Q x x') = x' Fx'Fx Q x.
    const double lhs = x.dot(FxtFx * Q * x) + u.dot(FutFu * R * u);
    const Vec fx = F.Fx * x;
    const Vec fu = F.Fu * u;
    const double rhs = fx.dot(Q * fx) + fu.dot(R * fu);
    const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
    v.cost = std::max(v.cost, std::abs(lhs - rhs) / scale);
  }
  v.passed = v.dynamics_A <= tol && v.dynamics_B <= tol && v.cost <= tol;
  return v;
}

LqSystem make_polynomial_system(const Transformation& F, const PolynomialCoefficients& c) {
  LqSystem sys;
  sys.n = F.n();
  sys.dx = F.dx;
  sys.du = F.du;
  const int n = F.n();
  const Mat In = Mat::Identity(n, n);
  sys.A = poly(F.Fx, c.a, Mat::Identity(n * F.dx, n * F.dx));
  sys.Q = poly(F.Fx, c.q, Mat::Identity(n * F.dx, n * F.dx));
  sys.R = poly(F.Fu, c.r, Mat::Identity(n * F.du, n * F.du));
  Mat B = Mat::Zero(n * F.dx, n * F.du);
  const Mat E = rectangular_identity(F.dx, F.du);
  Mat power = In;
  for (std::size_t h = 0; h < c.b.size(); ++h) {
    if (h > 0) power = F.F * power;
    B += c.b[h] * Mat(Eigen::kroneckerProduct(power, E));
  }
  sys.B = B;
  return sys;
}

SpectralData normal_spectrum(const Mat& F, double tol) {
  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(F.cast<std::complex<double>>());
  const Eigen::MatrixXcd& T = schur.matrixT();
  Eigen::MatrixXcd off = T;
  off.diagonal().setZero();
  if (off.norm() > tol * std::max(1.0, F.norm())) throw DomainError("transformation is not normal");
  return {T.diagonal(), schur.matrixU()};
}

NormalDecomposition normal_decomposition_check(const Transformation& F, const Mat& Q, const Mat& R, const Vec& x,
                                               const Vec& u) {
  const int n = F.n();
  if (Q.rows() != n * F.dx || R.rows() != n * F.du || x.size() != n * F.dx || u.size() != n * F.du) {
    throw InputError("normal_decomposition_check: dimension mismatch");
  }
  const SpectralData sp = normal_spectrum(F.F);
  NormalDecomposition out;
  const Vec fx = F.Fx * x;
  const Vec fu = F.Fu * u;
  out.lhs = fx.dot(Q * fx) + fu.dot(R * fu);
  const Eigen::VectorXcd xc = x.cast<std::complex<double>>();
  const Eigen::VectorXcd uc = u.cast<std::complex<double>>();
  for (int j = 0; j < n; ++j) {
    const Eigen::VectorXcd v = sp.vectors.col(j);
    const Eigen::MatrixXcd proj = v * v.adjoint();
    const Eigen::VectorXcd px = Eigen::kroneckerProduct(proj, Eigen::MatrixXcd::Identity(F.dx, F.dx)) * xc;
    const Eigen::VectorXcd pu = Eigen::kroneckerProduct(proj, Eigen::MatrixXcd::Identity(F.du, F.du)) * uc;
    const double w = std::norm(sp.values(j));
    const double qx = (px.adjoint() * Q.cast<std::complex<double>>() * px)(0, 0).real();
    const double ru = (pu.adjoint() * R.cast<std::complex<double>>() * pu)(0, 0).real();
    out.rhs += w * (qx + ru);
  }
  out.residual = std::abs(out.lhs - out.rhs) / (1.0 + std::abs(out.lhs));
  return out;
}

SymmetricStructured make_symmetric_structured(const Mat& F, const PolynomialCoefficients& c) {
  if (F.rows() != F.cols()) throw InputError("F must be square");
  if ((F - F.transpose()).norm() > 1e-12 * std::max(1.0, F.norm())) throw InputError("F must be symmetric");
  const int n = static_cast<int>(F.rows());
  Eigen::SelfAdjointEigenSolver<Mat> es(F);
  SymmetricStructured out;
  out.eigenvalues = es.eigenvalues().reverse();
  const Mat V = es.eigenvectors().rowwise().reverse();
  out.alpha = std::sqrt(static_cast<double>(n)) * V;
  auto head = [](const std::vector<double>& v) { return v.empty() ? 0.0 : v[0]; };
  auto feature = [&](const std::vector<double>& v) {
    Vec out_f = Vec::Zero(n);
    for (int j = 0; j < n; ++j) {
      double p = 1.0;
      for (std::size_t h = 1; h < v.size(); ++h) {
        p *= out.eigenvalues(j);
        out_f(j) += v[h] * p;
      }
    }
    return out_f;
  };
  out.a = head(c.a);
  out.b = head(c.b);
  out.q = head(c.q);
  out.r = head(c.r);
  out.abar = feature(c.a);
  out.bbar = feature(c.b);
  out.qbar = feature(c.q);
  out.rbar = feature(c.r);
  return out;
}

LqSystem SymmetricStructured::joint() const {
  const int n = static_cast<int>(alpha.rows());
  const Mat I = Mat::Identity(n, n);
  // (1/n) alpha_j alpha_j' = v_j v_j'.
  auto lift = [&](double base, const Vec& per_feature) {
    Mat m = base * I;
    for (int j = 0; j < n; ++j) m += per_feature(j) * alpha.col(j) * alpha.col(j).transpose() / n;
    return m;
  };
  LqSystem sys;
  sys.n = n;
  sys.A = lift(a, abar);
  sys.B = lift(b, bbar);
  sys.Q = lift(q, qbar);
  sys.R = lift(r, rbar);
  return sys;
}

TeamModel SymmetricStructured::to_team_model() const {
  const int n = static_cast<int>(alpha.rows());
  TeamModel m;
  m.horizon = 1.0;
  SubPopulation sub;
  sub.n = n;
  sub.f = n;
  sub.A = TimeVarying::scalar(a);
  sub.B = TimeVarying::scalar(b);
  sub.C = TimeVarying::scalar(1.0);
  sub.Q = TimeVarying::scalar(q);
  sub.R = TimeVarying::scalar(r);
  for (int j = 0; j < n; ++j) {
    Mat ab = Mat::Zero(1, n);
    ab(0, j) = abar(j);
    sub.Abar.emplace_back(ab);
    Mat bb = Mat::Zero(1, n);
    bb(0, j) = bbar(j);
    sub.Bbar.emplace_back(bb);
  }
  sub.Qbar = Mat(qbar.asDiagonal());
  sub.Rbar = Mat(rbar.asDiagonal());
  sub.mu = 1.0;
  sub.alpha = alpha;
  sub.init.mean.assign(static_cast<std::size_t>(n), Vec::Zero(1));
  m.subs.push_back(std::move(sub));
  return m;
}

LqSystem make_permutation_structured(double a, double abar, double b, double bbar, double q, double qbar, double r,
                                     double rbar, int n) {
  if (n < 1) throw InputError("n must be positive");
  const Mat I = Mat::Identity(n, n);
  const Mat ones = Mat::Ones(n, n);
  LqSystem sys;
  sys.n = n;
  sys.A = Mat(a * I + abar * ones);
  sys.B = Mat(b * I + bbar * ones);
  sys.Q = Mat(q * I + qbar * ones);
  sys.R = Mat(r * I + rbar * ones);
  return sys;
}

EquivarianceVerdict check_all_permutations(const LqSystem& sys, double tol) {
  if (sys.n > 8) throw InputError("exhaustive permutation check is limited to n <= 8");
  std::vector<int> perm(static_cast<std::size_t>(sys.n));
  std::iota(perm.begin(), perm.end(), 0);
  EquivarianceVerdict worst;
  worst.passed = true;
  do {
    Mat P = Mat::Zero(sys.n, sys.n);
    for (int i = 0; i < sys.n; ++i) P(i, perm[i]) = 1.0;
    const auto v = check_equivariant(Transformation::make(P, sys.dx, sys.du), sys, 0.0, tol);
    worst.dynamics_A = std::max(worst.dynamics_A, v.dynamics_A);
    worst.dynamics_B = std::max(worst.dynamics_B, v.dynamics_B);
    worst.cost = std::max(worst.cost, v.cost);
    worst.passed = worst.passed && v.passed;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return worst;
}

}  // namespace deeplq
