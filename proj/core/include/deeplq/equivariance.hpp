#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "deeplq/model.hpp"

namespace deeplq {

/// Linear transformation F of n agents with its Kronecker lifts.
struct Transformation {
  Mat F;
  int dx = 1;
  int du = 1;
  Mat Fx;  ///< F kron I_dx
  Mat Fu;  ///< F kron I_du

  static Transformation make(const Mat& F, int dx, int du);
  int n() const { return static_cast<int>(F.rows()); }
  bool is_normal(double tol = 1e-10) const;
};

/// Joint LQ system of n agents (joint sizes n dx and n du).
struct LqSystem {
  int n = 1, dx = 1, du = 1;
  TimeVarying A, B, Q, R;
};

struct EquivarianceVerdict {
  double dynamics_A = 0.0;  ///< ||Fx A - A Fx|| / (1 + ||A||)
  double dynamics_B = 0.0;  ///< ||Fx B - B Fu|| / (1 + ||B||)
  double cost = 0.0;        ///< worst relative cost-identity gap on the random basis
  bool passed = false;
};

/// Commutation residuals plus the cost identity on `basis_size` seeded random
/// (x, u) pairs; passes when every residual is <= tol.
EquivarianceVerdict check_equivariant(const Transformation& F, const LqSystem& sys, double t = 0.0,
                                      double tol = 1e-9, std::uint64_t seed = 7, int basis_size = 8);

/// Coefficients of the polynomial system sum_h c(h) F^h for each matrix.
struct PolynomialCoefficients {
  std::vector<double> a, b, q, r;
};

/// A = sum_h a(h) Fx^h; B = sum_h b(h) (F^h kron I_{dx x du}) with a
/// rectangular identity when dx != du.
LqSystem make_polynomial_system(const Transformation& F, const PolynomialCoefficients& c);

struct NormalDecomposition {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;  ///< |lhs - rhs| / (1 + |lhs|)
};

/// Compares ||Fx x||_Q^2 + ||Fu u||_R^2 with the eigenvector expansion
/// sum_j |lambda_j|^2 (||Proj(x, v_j)||_Q^2 + ||Proj(u, v_j)||_R^2).
/// Throws DomainError for non-normal F.
NormalDecomposition normal_decomposition_check(const Transformation& F, const Mat& Q, const Mat& R, const Vec& x,
                                               const Vec& u);

/// Orthonormal eigenvectors and eigenvalues of a normal matrix.
struct SpectralData {
  Eigen::VectorXcd values;
  Eigen::MatrixXcd vectors;
};
SpectralData normal_spectrum(const Mat& F, double tol = 1e-10);

/// Scalar agents whose couplings follow the spectrum of a symmetric F.
struct SymmetricStructured {
  double a = 0.0, b = 0.0, q = 0.0, r = 0.0;
  Vec abar, bbar, qbar, rbar;  ///< per feature
  Vec eigenvalues;             ///< descending
  Mat alpha;                   ///< n x n, alpha^{i,j} = sqrt(n) v_j(i)

  LqSystem joint() const;
  /// One sub-population with f = n features, mu = 1, lambda = 0, horizon 1.
  TeamModel to_team_model() const;
};

SymmetricStructured make_symmetric_structured(const Mat& F, const PolynomialCoefficients& c);

/// A = a I + abar 1 1' (etc.) on n scalar agents.
LqSystem make_permutation_structured(double a, double abar, double b, double bbar, double q, double qbar, double r,
                                     double rbar, int n);

/// Worst verdict over every permutation matrix of size n (n <= 8).
EquivarianceVerdict check_all_permutations(const LqSystem& sys, double tol = 1e-10);

}  // namespace deeplq
