#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "deeplq/model.hpp"
#include "deeplq/strategies.hpp"

namespace deeplq {

struct SimulationOptions {
  double dt = 0.01;
  /// Keep full paths; off for Monte Carlo where only the cost matters.
  bool record = true;
  /// Weight the team cost by the optimization factors.
  bool use_beta = false;
};

/// Sampled closed-loop path on t_k = k dt, k = 0..K. Actions are also
/// evaluated at t_K for the trapezoidal cost.
struct Trajectory {
  std::vector<double> t;
  std::vector<Vec> x, u;            ///< joint vectors, K + 1 entries
  std::vector<Vec> deep_x, deep_u;  ///< stacked deep state / action, K + 1 entries
  std::vector<Vec> noise;           ///< joint increments C sqrt(dt) zeta, K entries
  std::vector<Vec> estimate;        ///< PDSS estimator, K + 1 entries when present
  Vec agent_cost;                   ///< J^i per agent (global agent index)
  double weighted_cost = 0.0;       ///< sum_s (mu/n) sum_i [beta^i] J^i
};

/// Euler-Maruyama closed loop. The strategy is reset with the initial state.
/// Replicate m draws from its own stream, so two strategies run with the
/// same (seed, m) see identical initial states and noise.
Trajectory simulate(const TeamModel& model, Strategy& strategy, const SimulationOptions& options,
                    std::uint64_t seed, std::uint64_t replicate = 0);

struct CostBreakdown {
  Vec per_agent;
  double weighted = 0.0;
};

/// Recomputes the costs from a recorded trajectory.
CostBreakdown evaluate_cost(const Trajectory& trajectory, const TeamModel& model, bool use_beta = false);

/// Weighted team costs of M replicates, run in parallel on clones of `prototype`.
std::vector<double> sample_costs(const TeamModel& model, const Strategy& prototype, int replicates,
                                 const SimulationOptions& options, std::uint64_t seed);

struct CostEstimate {
  int replicates = 0;
  double lambda = 0.0;
  double mean = 0.0;
  double mean_stderr = 0.0;
  double variance = 0.0;
  /// (1/lambda) log mean exp(lambda J); equals `mean` at lambda = 0.
  double risk_sensitive = 0.0;
  double risk_sensitive_stderr = 0.0;
};

/// Log-sum-exp estimate with a delta-method standard error.
CostEstimate summarize_costs(const std::vector<double>& costs, double lambda);

CostEstimate estimate_risk_sensitive_cost(const TeamModel& model, const Strategy& prototype, int replicates,
                                          const SimulationOptions& options, std::uint64_t seed);

/// Agent rows `t,s,i,x0..,u0..` (1-based s and i).
void write_agent_csv(std::ostream& os, const Trajectory& trajectory, const TeamModel& model);
/// Deep-state rows `t,s,j,xbar0..`.
void write_deep_csv(std::ostream& os, const Trajectory& trajectory, const TeamModel& model);

}  // namespace deeplq
