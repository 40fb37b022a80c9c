#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "deeplq/types.hpp"

namespace deeplq {

/// Distribution of the initial agent states of one sub-population.
struct InitialState {
  enum class Kind { Deterministic, Gaussian };
  Kind kind = Kind::Deterministic;
  /// One mean per agent (d_x each).
  std::vector<Vec> mean;
  /// Shared per-agent covariance (d_x x d_x); ignored when deterministic.
  Mat cov;
};

/// One sub-population of exchangeable-up-to-weights agents.
///
/// Coupling blocks act on the stacked deep state of the whole team, so their
/// column counts are fixed by the other sub-populations as well.
struct SubPopulation {
  int n = 1;   ///< agent count
  int f = 1;   ///< feature count
  int dx = 1;  ///< local state dimension
  int du = 1;  ///< local action dimension

  TimeVarying A, B, C, Q, R;
  std::vector<TimeVarying> Abar;  ///< f entries, dx x D_x
  std::vector<TimeVarying> Bbar;  ///< f entries, dx x D_u
  TimeVarying Qbar;               ///< D_x x D_x
  TimeVarying Rbar;               ///< D_u x D_u

  double mu = 1.0;  ///< macroscopic influence factor
  Mat alpha;        ///< n x f influence factors

  /// Per-agent tracking signals (dx x 1). Empty means r = 0 for all agents.
  std::vector<TimeVarying> tracking;
  /// Optimization factors; empty means all ones.
  Vec beta;

  InitialState init;
};

/// Complete team problem.
struct TeamModel {
  std::vector<SubPopulation> subs;
  double risk_factor = 0.0;  ///< lambda; 0 is risk neutral
  double horizon = 1.0;
  /// Sub-populations whose deep states are observed under PDSS (0-based).
  std::vector<int> shared_set;

  int num_subs() const { return static_cast<int>(subs.size()); }
  bool is_shared(int s) const;
  /// Union of all matrix breakpoints inside [0, horizon], plus 0.
  std::vector<double> breakpoints() const;
  bool is_time_invariant() const;
};

/// Offsets of the stacked vectors. Order: sub-populations ascending, then
/// features (deep vectors) or agents (joint vectors) ascending.
class Layout {
 public:
  explicit Layout(const TeamModel& model);

  int num_subs() const { return static_cast<int>(deep_x_.size()); }
  int deep_x_dim() const { return total_deep_x_; }
  int deep_u_dim() const { return total_deep_u_; }
  int joint_x_dim() const { return total_joint_x_; }
  int joint_u_dim() const { return total_joint_u_; }
  int total_agents() const { return total_agents_; }
  int dx(int s) const { return dx_[s]; }
  int du(int s) const { return du_[s]; }

  /// Start of sub-population s inside the stacked deep state.
  int deep_x(int s) const { return deep_x_[s]; }
  int deep_u(int s) const { return deep_u_[s]; }
  /// Start of feature j of sub-population s inside the stacked deep state.
  int deep_x(int s, int j) const { return deep_x_[s] + j * dx_[s]; }
  int deep_u(int s, int j) const { return deep_u_[s] + j * du_[s]; }
  /// Start of agent i of sub-population s inside the joint state.
  int joint_x(int s, int i) const { return joint_x_[s] + i * dx_[s]; }
  int joint_u(int s, int i) const { return joint_u_[s] + i * du_[s]; }
  int agent_index(int s, int i) const { return agent_[s] + i; }

 private:
  std::vector<int> dx_, du_, deep_x_, deep_u_, joint_x_, joint_u_, agent_;
  int total_deep_x_ = 0, total_deep_u_ = 0, total_joint_x_ = 0, total_joint_u_ = 0;
  int total_agents_ = 0;
};

// ---------------------------------------------------------------------------
// Validation

struct ValidationOptions {
  double tol_orth = 1e-9;
  /// Orthonormality failures become warnings (for models ingested from files).
  bool orth_warn_only = false;
};

struct ValidationCheck {
  std::string name;
  bool passed = true;
  /// Hard checks decide ValidationReport::ok(); soft ones are warnings.
  bool hard = true;
  /// Diagnostic (minimum eigenvalue, residual, ...).
  double value = 0.0;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;

  bool ok() const;
  std::vector<const ValidationCheck*> failures() const;
  std::vector<const ValidationCheck*> warnings() const;
};

/// Never throws; every check lands in the report.
ValidationReport validate_model(const TeamModel& model, const ValidationOptions& options = {});

/// Throws DomainError naming the first failed hard check.
void require_valid(const TeamModel& model, const ValidationOptions& options = {});

// ---------------------------------------------------------------------------
// Population-level (deep) matrices

struct PopulationMatrices {
  Mat A;      ///< D_x x D_x
  Mat B;      ///< D_x x D_u
  Mat Q;      ///< D_x x D_x, includes the mu-weighted couplings
  Mat R;      ///< D_u x D_u
  Mat Sigma;  ///< D_x x D_x, blockdiag((1/n) diag_f(C C^T))
  Mat C;      ///< D_x x D_x, blockdiag(diag_f(C))
  /// blockdiag(mu(s) diag_f(Q(s))), the tracking weight of the deep problem.
  Mat Q_track;
};

struct AssemblyOptions {
  /// Weight the deep-state cost couplings by the mean optimization factor.
  bool use_beta = false;
  /// Per sub-population: treat n(s) as infinite (drops the 1/n noise term).
  std::vector<bool> infinite_population;
};

PopulationMatrices assemble_population_matrices(const TeamModel& model, double t,
                                                const AssemblyOptions& options = {});

/// Row block f(s) d_x^s x D_x of a stacked deep matrix.
Mat sub_rows(const TeamModel& model, const Mat& m, int s);

// ---------------------------------------------------------------------------
// Centralized (joint) system used by the brute-force oracle

struct CentralizedSystem {
  Mat A, B, Q, R, Sigma;
  /// Maps joint state / action to the stacked deep state / action.
  Mat deep_x_map, deep_u_map;
};

struct CentralizedOptions {
  int max_joint_dim = 64;
  bool use_beta = false;
};

CentralizedSystem assemble_centralized(const TeamModel& model, double t,
                                       const CentralizedOptions& options = {});

/// Linear and constant cost terms from tracking: cost = X'QX + 2 q'X + c.
struct CentralizedTracking {
  Vec q;
  double c = 0.0;
};
CentralizedTracking centralized_tracking(const TeamModel& model, double t, bool use_beta = false);

// ---------------------------------------------------------------------------
// Deep states and gauge transformation

/// x̄^j = (1/n) sum_i alpha^{i,j} x^i for every feature j; returns f*dx stacked.
Vec deep_state(const std::vector<Vec>& states, const Mat& alpha);

/// Deep state of every sub-population stacked, from a joint state vector.
Vec deep_state_joint(const TeamModel& model, const Layout& layout, const Vec& joint_x);
Vec deep_action_joint(const TeamModel& model, const Layout& layout, const Vec& joint_u);

struct GaugeDecomposition {
  std::vector<Vec> delta;  ///< Δx^i per agent
  Vec deep;                ///< stacked x̄^j
};

/// Δx^i = x^i - sum_j w^{i,j} x̄^j with x̄ built from alpha. The mixing weights
/// default to alpha; pass alpha / beta for the optimization-factor gauge.
GaugeDecomposition gauge_decompose(const std::vector<Vec>& states, const Mat& alpha);
GaugeDecomposition gauge_decompose(const std::vector<Vec>& states, const Mat& alpha,
                                   const Mat& mixing);

/// alpha, or alpha^{i,j} / beta^i when use_beta.
Mat mixing_weights(const SubPopulation& sub, bool use_beta);

/// Tracking at time t: r^i per agent (zero if absent).
std::vector<Vec> tracking_at(const SubPopulation& sub, double t);

/// Mean of the optimization factors (1 when unset).
double mean_beta(const SubPopulation& sub);

}  // namespace deeplq
