#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "deeplq/simulator.hpp"

namespace deeplq {

struct ExperimentOptions {
  int replicates = 1000;
  double dt = 0.01;
  std::uint64_t seed = 0;
  int riccati_steps = 2000;
};

/// Copy of `model` with sub-population s resized to n agents. Needs a
/// single uniform feature (alpha = 1) and identical per-agent data.
TeamModel resize_population(const TeamModel& model, int s, int n);

struct PorRow {
  int n = 0;
  bool computed = false;
  std::string note;
  CostEstimate estimate;  ///< under the lambda-optimal strategy
  double por = 0.0;       ///< risk-sensitive estimate minus the mean, same samples
  double por_stderr = 0.0;
};

/// Price of robustness J~(lambda) - E[J] of the lambda-optimal strategy for
/// each population size. Sub-populations with n > 1 (or the first one when
/// all have n = 1) are resized. Rows failing the risk condition are flagged.
std::vector<PorRow> price_of_robustness(const TeamModel& model, double lambda, const std::vector<int>& n_sweep,
                                        const ExperimentOptions& options);

struct PoiRow {
  int n = 0;
  StrategyKind filter = StrategyKind::PdssFinite;
  bool computed = false;
  std::string note;
  CostEstimate optimal;
  CostEstimate filtered;
  double poi = 0.0;  ///< J~(filter) - J~(DSS) on common random numbers
  double poi_stderr = 0.0;
};

/// Price of information; resizes every sub-population outside the shared set.
std::vector<PoiRow> price_of_information(const TeamModel& model, const std::vector<StrategyKind>& filters,
                                         const std::vector<int>& n_sweep, const ExperimentOptions& options);

/// Paired estimate f = rs(a) - rs(b) (or mean(a) - rs(b) via `a_mean`) with a
/// joint delta-method standard error.
struct PairedDifference {
  double value = 0.0;
  double stderr_ = 0.0;
};
PairedDifference risk_sensitive_difference(const std::vector<double>& a, const std::vector<double>& b,
                                           double lambda);
/// rs(J) - mean(J) on one sample with its delta-method standard error.
PairedDifference robustness_gap(const std::vector<double>& costs, double lambda);

std::string to_json(const CostEstimate& e);
std::string por_report_json(const std::vector<PorRow>& rows, double lambda, const ExperimentOptions& options);
std::string poi_report_json(const std::vector<PoiRow>& rows, double lambda, const ExperimentOptions& options);

}  // namespace deeplq
