#pragma once

#include <vector>

#include "deeplq/model.hpp"
#include "deeplq/riccati_integrator.hpp"

namespace deeplq {

struct DeepRiccatiOptions {
  /// Uniform steps over [0, T]; model breakpoints are inserted on top.
  int steps = 2000;
  double blowup = 1e12;
  AssemblyOptions assembly;
};

TimeGrid make_grid(const TeamModel& model, int steps);

/// Local and global Riccati paths with the gains derived from them.
struct DeepRiccatiSolution {
  TimeGrid grid;
  double lambda = 0.0;
  AssemblyOptions assembly;

  std::vector<std::vector<Mat>> P;      ///< [s][k], d_x x d_x
  std::vector<std::vector<Mat>> P_mid;  ///< [s][k] interval midpoints
  std::vector<Mat> Pbar;                ///< [k], D_x x D_x
  std::vector<Mat> Pbar_mid;

  std::vector<std::vector<Mat>> theta;  ///< [s][k] = -R^-1 B' P
  std::vector<Mat> theta_bar;           ///< [k] = -Rbar^-1 Bbar' Pbar, D_u x D_x

  int index_at(double t) const { return grid.index_at(t); }
};

/// Integrates the S local flows and the global flow backward from T.
/// Throws DomainError on finite escape or a singular Rbar.
DeepRiccatiSolution solve_deep_riccati(const TeamModel& model, const DeepRiccatiOptions& options = {});

/// Weakly coupled models: coupling only inside each agent's own
/// sub-population and feature. Returns Pbar^j(s) paths [s][j][k].
struct WeaklyCoupledSolution {
  TimeGrid grid;
  std::vector<std::vector<std::vector<Mat>>> P;
  /// blockdiag(mu(s) blockdiag_j Pbar^j(s)) at grid point k.
  Mat assembled(int k) const;
  std::vector<double> mu;
  std::vector<int> dx;
};

/// Structural test; when it fails `why` names the offending block.
bool is_weakly_coupled(const TeamModel& model, std::string* why = nullptr, double tol = 0.0);
WeaklyCoupledSolution solve_weakly_coupled(const TeamModel& model,
                                           const DeepRiccatiOptions& options = {});

/// Tracking corrections xi, bold-xi and the drifts rho, bold-rho.
/// Agents with identical relative tracking signals share one class.
struct CorrectionTerms {
  bool zero = true;  ///< true when every tracking signal vanishes
  std::vector<std::vector<int>> agent_class;  ///< [s][i]
  /// [s][class] -> path of d_x-vectors on the grid (and midpoints).
  std::vector<std::vector<std::vector<Vec>>> xi, xi_mid, rho;
  std::vector<Vec> xi_bar, xi_bar_mid, rho_bar;  ///< [k]

  const Vec& xi_of(int s, int i, int k) const { return xi[s][agent_class[s][i]][k]; }
  const Vec& rho_of(int s, int i, int k) const { return rho[s][agent_class[s][i]][k]; }
};

CorrectionTerms solve_correction_terms(const TeamModel& model, const DeepRiccatiSolution& riccati);

/// Relative tracking Delta r^i(t) and the stacked deep tracking signal.
std::vector<Vec> relative_tracking(const TeamModel& model, int s, double t, bool use_beta);
Vec deep_tracking(const TeamModel& model, double t);

/// Log-constants of the exponential ansatz and the analytic optimal cost.
struct ValueConstants {
  std::vector<std::vector<double>> log_eta;  ///< [s][k]
  std::vector<double> log_eta_bar;           ///< [k]
  std::vector<std::vector<std::vector<double>>> h;  ///< [s][class][k]
  std::vector<double> h_bar;                        ///< [k]
  /// Optimal risk-sensitive cost from the model's deterministic initial state.
  double value = 0.0;
};

/// Refuses lambda = 0 and random initial states.
ValueConstants compute_value_constants(const TeamModel& model, const DeepRiccatiSolution& riccati,
                                       const CorrectionTerms& corrections);

/// Stationary solutions of a time-invariant model.
struct AlgebraicOptions {
  double step = 0.01;
  double tol = 1e-10;
  long max_steps = 1000000;
  AssemblyOptions assembly;
};

struct AlgebraicSolution {
  std::vector<Mat> P;  ///< [s]
  Mat Pbar;
  std::vector<Mat> theta;
  Mat theta_bar;
  long steps = 0;
  /// Abar + Bbar blockdiag(diag_f(theta(s))) is Hurwitz.
  bool hurwitz = false;
  double spectral_abscissa = 0.0;
  std::vector<std::string> warnings;
};

AlgebraicSolution solve_algebraic(const TeamModel& model, const AlgebraicOptions& options = {});

}  // namespace deeplq
