#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "deeplq/centralized_oracle.hpp"
#include "deeplq/simulator.hpp"
#include "deeplq/strategies.hpp"
#include "oracles.hpp"

using namespace deeplq;
using namespace deeplq::testing;

namespace {

SimulationOptions with_dt(double dt) {
  SimulationOptions o;
  o.dt = dt;
  return o;
}

std::unique_ptr<Strategy> dss_for(const TeamModel& m, int steps = 200) {
  StrategyOptions so;
  so.riccati_steps = steps;
  return make_strategy(StrategyKind::Dss, m, so);
}

/// Hand-built scalar trajectory x = t^2, u = t on a uniform grid.
Trajectory polynomial_path(double T, int K) {
  Trajectory tr;
  for (int k = 0; k <= K; ++k) {
    const double t = T * k / K;
    tr.t.push_back(t);
    tr.x.push_back(Vec::Constant(1, t * t));
    tr.u.push_back(Vec::Constant(1, t));
  }
  return tr;
}

}  // namespace

TEST(Simulator, ZeroStrategyFromRestStaysAtRest) {
  const auto m = scalar_team(3, 0.7, 1.0, 0.0, 1.0, 1.0, 0.0, 1.0);
  auto zero = make_strategy(StrategyKind::Zero, m);
  const auto tr = simulate(m, *zero, with_dt(0.01), 1);
  ASSERT_EQ(tr.x.size(), 101u);
  for (std::size_t k = 0; k < tr.x.size(); ++k) {
    EXPECT_EQ(tr.x[k].norm(), 0.0);
    EXPECT_EQ(tr.u[k].norm(), 0.0);
  }
  EXPECT_EQ(tr.weighted_cost, 0.0);
  EXPECT_EQ(evaluate_cost(tr, m).weighted, 0.0);
}

TEST(Simulator, ExponentialGrowthConvergesAtFirstOrder) {
  auto error = [](double dt) {
    const auto m = scalar_team(1, 1.0, 0.0, 0.0, 1.0, 1.0, 0.0, 1.0, 1.0);
    auto zero = make_strategy(StrategyKind::Zero, m);
    const auto tr = simulate(m, *zero, with_dt(dt), 1);
    for (std::size_t k = 0; k < tr.x.size(); k += 10) {
      EXPECT_NEAR(tr.x[k](0), std::exp(tr.t[k]), 2.0 * dt * std::exp(tr.t[k]));
    }
    return std::abs(tr.x.back()(0) - std::exp(1.0));
  };
  const double e1 = error(0.01), e2 = error(0.005);
  EXPECT_NEAR(e1 / e2, 2.0, 0.2);
}

TEST(Simulator, MatchesJointSystemUnderSharedNoise) {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 10; ++trial) {
    RandomModelOptions gen;
    gen.lambda = 0.05;
    const auto m = random_model(rng, gen);
    auto dss = dss_for(m, 100);
    const auto tr = simulate(m, *dss, with_dt(0.01), 3, trial);
    const auto cs = assemble_centralized(m, 0.0);
    for (std::size_t k = 0; k + 1 < tr.x.size(); ++k) {
      const Vec next = tr.x[k] + 0.01 * (cs.A * tr.x[k] + cs.B * tr.u[k]) + tr.noise[k];
      EXPECT_LE((next - tr.x[k + 1]).cwiseAbs().maxCoeff(), 1e-12 * (1.0 + tr.x[k + 1].norm()));
      const Vec naive = tr.x[k] + 0.01 * naive_joint_drift(m, tr.t[k], tr.x[k], tr.u[k]) + tr.noise[k];
      EXPECT_LE((naive - tr.x[k + 1]).cwiseAbs().maxCoeff(), 1e-12 * (1.0 + tr.x[k + 1].norm()));
    }
  }
}

TEST(Simulator, StoredDeepStatesAndCostsAreConsistent) {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 10; ++trial) {
    RandomModelOptions gen;
    gen.lambda = 0.05;
    gen.beta = trial % 2 == 1;
    auto m = random_model(rng, gen);
    m.shared_set.clear();
    const Layout lay(m);
    auto strategy = make_strategy(trial % 3 == 0 ? StrategyKind::PdssFinite : StrategyKind::Dss, m, {100});
    SimulationOptions so = with_dt(0.02);
    so.use_beta = gen.beta;
    const auto tr = simulate(m, *strategy, so, 4, trial);
    for (std::size_t k = 0; k < tr.x.size(); ++k) {
      EXPECT_LE((tr.deep_x[k] - deep_state_joint(m, lay, tr.x[k])).norm(), 1e-12 * (1.0 + tr.deep_x[k].norm()));
      EXPECT_LE((tr.deep_u[k] - deep_action_joint(m, lay, tr.u[k])).norm(), 1e-12 * (1.0 + tr.deep_u[k].norm()));
    }
    const auto cost = evaluate_cost(tr, m, gen.beta);
    EXPECT_LE((cost.per_agent - tr.agent_cost).norm(), 1e-12 * (1.0 + cost.per_agent.norm()));
    EXPECT_NEAR(cost.weighted, tr.weighted_cost, 1e-12 * (1.0 + std::abs(cost.weighted)));
  }
}

TEST(Simulator, NoiseIncrementsHaveTheModelCovariance) {
  const double c = 0.7, dt = 0.01;
  auto m = scalar_team(4, -0.5, 1.0, c, 1.0, 1.0, 0.0, 50.0);
  auto zero = make_strategy(StrategyKind::Zero, m);
  const auto tr = simulate(m, *zero, with_dt(dt), 8);
  double ss = 0.0;
  long N = 0;
  for (const auto& w : tr.noise) {
    for (int i = 0; i < 4; ++i) {
      ss += w(i) * w(i) / dt;
      ++N;
    }
  }
  const double var = ss / N;
  EXPECT_NEAR(var, c * c, 5.0 * c * c * std::sqrt(2.0 / N));
}

TEST(Simulator, ReproducibleAndCommonRandomNumbers) {
  auto m = scalar_team(3, 0.2, 1.0, 0.5, 1.0, 1.0, 0.1, 1.0, 1.0);
  m.subs[0].init.kind = InitialState::Kind::Gaussian;
  m.subs[0].init.cov = Mat::Identity(1, 1);
  auto dss = dss_for(m);
  auto zero = make_strategy(StrategyKind::Zero, m);
  const auto a = simulate(m, *dss, with_dt(0.01), 42, 7);
  const auto b = simulate(m, *dss, with_dt(0.01), 42, 7);
  const auto c = simulate(m, *zero, with_dt(0.01), 42, 7);
  const auto d = simulate(m, *dss, with_dt(0.01), 42, 8);
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.weighted_cost, b.weighted_cost);
  EXPECT_EQ(a.x[0], c.x[0]);
  EXPECT_EQ(a.noise, c.noise);
  EXPECT_NE(a.x[0], d.x[0]);
}

TEST(Simulator, RejectsBadStepAndAbortsOnOverflow) {
  const auto m = scalar_team(1, 0.0, 1.0, 0.1, 1.0, 1.0, 0.0, 1.0, 1.0);
  auto zero = make_strategy(StrategyKind::Zero, m);
  EXPECT_THROW(simulate(m, *zero, with_dt(0.3), 1), InputError);
  EXPECT_THROW(simulate(m, *zero, with_dt(0.0), 1), InputError);
  const auto wild = scalar_team(1, 1e6, 1.0, 0.1, 1.0, 1.0, 0.0, 1.0, 1.0);
  auto z2 = make_strategy(StrategyKind::Zero, wild);
  EXPECT_THROW(simulate(wild, *z2, with_dt(0.01), 1), DomainError);
}

TEST(Cost, ConstantStateExample) {
  // Running part int_0^2 1 dt = 2 plus the terminal weight Q(T) x_T^2 = 1.
  const auto m = scalar_team(1, 0.0, 1.0, 0.0, 1.0, 1.0, 0.0, 2.0, 1.0);
  Trajectory tr;
  for (int k = 0; k <= 200; ++k) {
    tr.t.push_back(0.01 * k);
    tr.x.push_back(Vec::Ones(1));
    tr.u.push_back(Vec::Zero(1));
  }
  const auto c = evaluate_cost(tr, m);
  EXPECT_NEAR(c.per_agent(0), 3.0, 1e-12);
  EXPECT_NEAR(c.weighted, 3.0, 1e-12);
}

TEST(Cost, TrapezoidalRuleIsSecondOrder) {
  // x = t^2, u = t, Q = R = 1: int (t^4 + t^2) dt + x_T^2.
  const double T = 1.3;
  const auto m = scalar_team(1, 0.0, 1.0, 0.0, 1.0, 1.0, 0.0, T);
  const double exact = std::pow(T, 5) / 5.0 + std::pow(T, 3) / 3.0 + std::pow(T, 4);
  const double e1 = std::abs(evaluate_cost(polynomial_path(T, 50), m).weighted - exact);
  const double e2 = std::abs(evaluate_cost(polynomial_path(T, 100), m).weighted - exact);
  const double e3 = std::abs(evaluate_cost(polynomial_path(T, 200), m).weighted - exact);
  EXPECT_NEAR(e1 / e2, 4.0, 0.5);
  EXPECT_NEAR(e2 / e3, 4.0, 0.5);
}

TEST(Cost, TrackingAndCouplingTermsByHand) {
  // Two agents, x = (1, 3), u = 0, r = (1, 1), Qbar = 2, alpha = 1:
  // agent costs: Q (x - r)^2 + Qbar xbar^2 with xbar = 2.
  auto m = scalar_team(2, 0.0, 1.0, 0.0, 1.0, 1.0, 0.0, 1.0);
  m.subs[0].Qbar = TimeVarying::scalar(2.0);
  m.subs[0].mu = 0.5;
  m.subs[0].tracking.assign(2, TimeVarying::scalar(1.0));
  Trajectory tr;
  for (int k = 0; k <= 10; ++k) {
    tr.t.push_back(0.1 * k);
    Vec x(2);
    x << 1.0, 3.0;
    tr.x.push_back(x);
    tr.u.push_back(Vec::Zero(2));
  }
  const auto c = evaluate_cost(tr, m);
  // Running over [0, 1] plus the same integrand once more at T.
  EXPECT_NEAR(c.per_agent(0), 2.0 * (0.0 + 8.0), 1e-12);
  EXPECT_NEAR(c.per_agent(1), 2.0 * (4.0 + 8.0), 1e-12);
  EXPECT_NEAR(c.weighted, 0.5 / 2.0 * (16.0 + 24.0), 1e-12);
}

TEST(Estimator, DeterministicCostsGiveEqualEstimates) {
  auto m = scalar_team(2, 0.3, 1.0, 0.0, 1.0, 1.0, 0.5, 1.0, 1.0);
  auto dss = dss_for(m);
  const auto e = estimate_risk_sensitive_cost(m, *dss, 100, with_dt(0.01), 3);
  EXPECT_EQ(e.risk_sensitive, e.mean);
  EXPECT_EQ(e.variance, 0.0);
  EXPECT_EQ(e.replicates, 100);
}

TEST(Estimator, SmallRiskFactorExpansion) {
  auto m = scalar_team(2, 0.3, 1.0, 0.8, 1.0, 1.0, 0.0, 1.0, 1.0);
  auto dss = dss_for(m);
  const auto costs = sample_costs(m, *dss, 10000, with_dt(0.01), 5);
  const double lambda = 1e-3;
  const auto e0 = summarize_costs(costs, 0.0);
  const auto e1 = summarize_costs(costs, lambda);
  const double shift = e1.risk_sensitive - e0.mean;
  EXPECT_NEAR(shift, 0.5 * lambda * e0.variance, 0.1 * 0.5 * lambda * e0.variance);
  // Larger factors move further from the mean.
  EXPECT_GT(summarize_costs(costs, 1e-2).risk_sensitive, e1.risk_sensitive);
  EXPECT_GT(summarize_costs(costs, 1e-1).risk_sensitive, summarize_costs(costs, 1e-2).risk_sensitive);
}

TEST(Estimator, StandardErrorScalesWithReplicates) {
  auto m = scalar_team(2, 0.3, 1.0, 0.8, 1.0, 1.0, 0.2, 1.0, 1.0);
  auto dss = dss_for(m);
  std::vector<double> se;
  for (int M : {100, 1000, 10000}) {
    const auto e = estimate_risk_sensitive_cost(m, *dss, M, with_dt(0.02), 11);
    EXPECT_GT(e.risk_sensitive_stderr, 0.0);
    se.push_back(e.risk_sensitive_stderr);
  }
  for (int i = 0; i < 2; ++i) {
    const double ratio = se[i] / se[i + 1];
    EXPECT_GT(ratio, std::sqrt(10.0) / 1.5);
    EXPECT_LT(ratio, std::sqrt(10.0) * 1.5);
  }
}

TEST(Estimator, LogSumExpIsStable) {
  std::vector<double> costs = {1e4, 1e4 + 1.0, 1e4 + 2.0};
  const auto e = summarize_costs(costs, 1.0);
  const double expect = 1e4 + std::log((1.0 + std::exp(1.0) + std::exp(2.0)) / 3.0);
  EXPECT_NEAR(e.risk_sensitive, expect, 1e-9);
  EXPECT_GT(e.risk_sensitive_stderr, 0.0);
  EXPECT_THROW(summarize_costs({1.0}, 0.5), InputError);
  EXPECT_THROW(summarize_costs({1.0, NAN}, 0.5), DomainError);
}

TEST(Csv, AgentAndDeepRows) {
  auto m = scalar_team(2, 0.0, 1.0, 0.0, 1.0, 1.0, 0.0, 0.02, 1.0);
  auto zero = make_strategy(StrategyKind::Zero, m);
  const auto tr = simulate(m, *zero, with_dt(0.01), 1);
  std::ostringstream agents, deep;
  write_agent_csv(agents, tr, m);
  write_deep_csv(deep, tr, m);
  std::istringstream a(agents.str());
  std::string line;
  std::getline(a, line);
  EXPECT_EQ(line, "t,s,i,x0,u0");
  std::getline(a, line);
  EXPECT_EQ(line, "0,1,1,1,0");
  int rows = 1;
  while (std::getline(a, line)) ++rows;
  EXPECT_EQ(rows, 3 * 2);
  std::istringstream d(deep.str());
  std::getline(d, line);
  EXPECT_EQ(line, "t,s,j,xbar0");
  std::getline(d, line);
  EXPECT_EQ(line, "0,1,1,1");
}
