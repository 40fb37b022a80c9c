#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "deeplq/model.hpp"

namespace deeplq {

/// Supplier (one agent) feeding n2 distributors; variants a-d set the
/// distributor influence factors.
///
/// a: one distributor at 4.45, b: two at 3.14, c: half at 1.41, d: all at 1;
/// every other distributor sits at 0.1. With `exact_normalization` the
/// factors are scaled so that (1/n2) sum alpha^2 = 1.
TeamModel builtin_supply_chain(char variant = 'a', int n2 = 20, std::uint64_t seed = 0,
                               bool exact_normalization = true);

/// Raw (unscaled) distributor influence factors of a variant.
std::vector<double> supply_chain_raw_alpha(char variant, int n2);

/// Supplier alone: A = 0.4, B = 0.8, C = 0.6, Q = R = 1, mu = 0.5, lambda = 1,
/// x0 = 1, T = 2.
TeamModel builtin_supplier_only();

/// n identical scalar agents, A = B = C = Q = R = 1, mean-field alpha = 1.
TeamModel builtin_por_scalar(int n = 4, double lambda = 0.5);

/// n scalar agents coupled through the deep state, nothing shared, Gaussian
/// initial states; used for the filter experiments.
TeamModel builtin_poi_coupled(int n = 5, double lambda = 0.5);

/// Two sub-populations with one and two agents, coupled dynamics and costs.
TeamModel builtin_three_agent();

struct ScenarioOptions {
  char variant = 'a';
  int n2 = 20;
  std::uint64_t seed = 0;
};

/// Names accepted by builtin_scenario.
std::vector<std::string> builtin_scenario_names();

/// Throws InputError for an unknown name.
TeamModel builtin_scenario(const std::string& name, const ScenarioOptions& options = {});

}  // namespace deeplq
