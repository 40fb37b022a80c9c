#pragma once

#include <vector>

#include "deeplq/model.hpp"
#include "deeplq/riccati_integrator.hpp"
#include "deeplq/strategies.hpp"

namespace deeplq {

struct CentralizedOracleOptions {
  int steps = 2000;
  int max_joint_dim = 64;
  bool use_beta = false;
  double blowup = 1e12;
};

/// Classical risk-sensitive LQ solution of the flattened joint system:
/// value X'P X + 2 g'X + c, law u = K X + k.
struct CentralizedSolution {
  TimeGrid grid;
  std::vector<Mat> P;
  std::vector<Vec> g;
  std::vector<double> c;
  std::vector<Mat> K;
  std::vector<Vec> k;

  double value(const Vec& joint_x0) const;
};

CentralizedSolution centralized_oracle_gains(const TeamModel& model, const CentralizedOracleOptions& options = {});

struct OracleComparison {
  double max_rel_gain = 0.0;    ///< max_k ||K_dss - K||_F / ||K||_F
  double max_rel_offset = 0.0;  ///< same for the affine part (absolute when K offset is 0)
};

OracleComparison compare_with_oracle(const TeamModel& model, const GainSchedule& gains,
                                     const CentralizedSolution& oracle);

/// Joint vector of the initial-state means.
Vec joint_initial_mean(const TeamModel& model);

/// Strategy applying the centralized law.
std::unique_ptr<Strategy> make_oracle_strategy(std::shared_ptr<const CentralizedSolution> solution);

}  // namespace deeplq
