#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "deeplq/centralized_oracle.hpp"
#include "deeplq/network_export.hpp"
#include "deeplq/simulator.hpp"
#include "deeplq/strategies.hpp"
#include "oracles.hpp"

using namespace deeplq;
using namespace deeplq::testing;

namespace {

DeepRiccatiOptions steps(int k) {
  DeepRiccatiOptions o;
  o.steps = k;
  return o;
}

std::vector<Vec> agents_of(const TeamModel& m, const Layout& lay, int s, const Vec& X) {
  std::vector<Vec> out;
  for (int i = 0; i < m.subs[s].n; ++i) out.push_back(X.segment(lay.joint_x(s, i), m.subs[s].dx));
  return out;
}

Vec random_vec(std::mt19937_64& rng, int n) { return random_matrix(rng, n, 1); }

/// Two-agent model with optimization factors (2, 2/3) and a single feature
/// satisfying the beta-normalization.
TeamModel beta_model() {
  auto m = scalar_team(2, 0.3, 1.0, 0.2, 1.0, 0.5, 0.0, 1.0);
  m.subs[0].beta = Vec(2);
  m.subs[0].beta << 2.0, 2.0 / 3.0;
  m.subs[0].alpha(0, 0) = std::sqrt(2.0);
  m.subs[0].alpha(1, 0) = std::sqrt(2.0 / 3.0);
  m.subs[0].Qbar = TimeVarying::scalar(0.4);
  m.subs[0].Rbar = TimeVarying::scalar(0.1);
  m.subs[0].tracking = {TimeVarying::scalar(0.5), TimeVarying::scalar(-0.2)};
  m.subs[0].init.mean = {Vec::Constant(1, 1.0), Vec::Constant(1, -0.5)};
  return m;
}

}  // namespace

TEST(Dss, ZeroCouplingIsLocalFeedback) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    RandomModelOptions gen;
    gen.coupled = false;
    gen.tracking = false;
    gen.lambda = trial % 2 ? 0.1 : 0.0;
    const auto m = random_model(rng, gen);
    const auto g = make_gain_schedule(m, steps(200));
    const Layout lay(m);
    const Vec xbar = random_vec(rng, lay.deep_x_dim());
    for (int s = 0; s < m.num_subs(); ++s) {
      for (int i = 0; i < m.subs[s].n; ++i) {
        const Vec x = random_vec(rng, m.subs[s].dx);
        for (double t : {0.0, 0.37, 0.99}) {
          const Vec u = dss_action(m, *g, s, i, t, x, xbar);
          const Vec expect = g->riccati.theta[s][g->riccati.index_at(t)] * x;
          EXPECT_LE((u - expect).norm(), 1e-8 * (1.0 + expect.norm() + xbar.norm()));
        }
      }
    }
  }
}

TEST(Dss, AgentOnItsGaugeManifold) {
  std::mt19937_64 rng(32);
  RandomModelOptions gen;
  gen.tracking = false;
  gen.lambda = 0.1;
  const auto m = random_model(rng, gen);
  const auto g = make_gain_schedule(m, steps(200));
  const Layout lay(m);
  const Vec xbar = random_vec(rng, lay.deep_x_dim());
  const int k = 40;
  const double t = g->riccati.grid.t[k];
  for (int s = 0; s < m.num_subs(); ++s) {
    const auto& sub = m.subs[s];
    for (int i = 0; i < sub.n; ++i) {
      Vec x = Vec::Zero(sub.dx);
      Vec expect = Vec::Zero(sub.du);
      for (int j = 0; j < sub.f; ++j) {
        x += sub.alpha(i, j) * xbar.segment(lay.deep_x(s, j), sub.dx);
        expect += sub.alpha(i, j) * g->theta_bar_rows(lay, s, j, k) * xbar;
      }
      EXPECT_LE((dss_action(m, *g, s, i, t, x, xbar) - expect).norm(), 1e-12 * (1.0 + expect.norm()));
    }
  }
}

TEST(Dss, SingleAgentIsTheClassicalLaw) {
  auto m = scalar_team(1, 0.5, 1.0, 0.4, 2.0, 1.0, 0.3, 1.5, 0.7);
  m.subs[0].tracking = {TimeVarying::scalar(0.25)};
  const auto g = make_gain_schedule(m, steps(400));
  const auto oracle = centralized_oracle_gains(m, {400});
  for (int k = 0; k < 400; k += 25) {
    const double t = g->riccati.grid.t[k];
    const Vec x = Vec::Constant(1, 0.3 + 0.01 * k);
    const Vec u = dss_action(m, *g, 0, 0, t, x, x);
    const Vec classical = g->riccati.theta_bar[k] * x + g->corrections.rho_bar[k];
    EXPECT_LE((u - classical).norm(), 1e-12);
    const Vec central = oracle.K[k] * x + oracle.k[k];
    EXPECT_LE((u - central).norm(), 1e-8);
  }
}

TEST(Dss, MatchesCentralizedOracle) {
  std::mt19937_64 rng(33);
  for (double lambda : {0.0, 0.1}) {
    for (int trial = 0; trial < 20; ++trial) {
      RandomModelOptions gen;
      gen.lambda = lambda;
      gen.max_agents = 4;
      const auto m = random_model(rng, gen);
      ASSERT_LE(Layout(m).joint_x_dim(), 16);
      const auto g = make_gain_schedule(m, steps(300));
      const auto oracle = centralized_oracle_gains(m, {300});
      const auto cmp = compare_with_oracle(m, *g, oracle);
      const double tol = lambda == 0.0 ? 1e-8 : 1e-6;
      EXPECT_LE(cmp.max_rel_gain, tol) << "lambda " << lambda << " trial " << trial;
      EXPECT_LE(cmp.max_rel_offset, tol) << "lambda " << lambda << " trial " << trial;
    }
  }
}

TEST(Dss, JointActionsMatchPerAgentLaw) {
  std::mt19937_64 rng(34);
  RandomModelOptions gen;
  gen.lambda = 0.05;
  const auto m = random_model(rng, gen);
  const auto g = make_gain_schedule(m, steps(100));
  const Layout lay(m);
  const Vec X = random_vec(rng, lay.joint_x_dim());
  const Vec deep = deep_state_joint(m, lay, X);
  Vec U;
  dss_joint_actions(m, lay, *g, 30, X, deep, U);
  const Vec K = composed_dss_gain(m, *g, 30) * X + composed_dss_offset(m, *g, 30);
  EXPECT_LE((U - K).norm(), 1e-12 * (1.0 + U.norm()));
  for (int s = 0; s < m.num_subs(); ++s) {
    for (int i = 0; i < m.subs[s].n; ++i) {
      const Vec u = dss_action(m, *g, s, i, g->riccati.grid.t[30], X.segment(lay.joint_x(s, i), m.subs[s].dx), deep);
      EXPECT_LE((U.segment(lay.joint_u(s, i), m.subs[s].du) - u).norm(), 1e-12 * (1.0 + u.norm()));
    }
  }
}

TEST(Dss, DependsOnOthersOnlyThroughDeepState) {
  std::mt19937_64 rng(35);
  auto m = scalar_team(6, 0.2, 1.0, 0.3, 1.0, 1.0, 0.1, 1.0);
  m.subs[0].f = 2;
  m.subs[0].alpha = random_alpha(rng, 6, 2);
  m.subs[0].Abar = {TimeVarying::zeros(1, 2), TimeVarying::zeros(1, 2)};
  m.subs[0].Bbar = {TimeVarying::zeros(1, 2), TimeVarying::zeros(1, 2)};
  m.subs[0].Abar[0] = Mat(random_matrix(rng, 1, 2, 0.3));
  m.subs[0].Qbar = Mat(random_psd(rng, 2, 0.5));
  m.subs[0].Rbar = TimeVarying::zeros(2, 2);
  for (int i = 0; i < 6; ++i) m.subs[0].tracking.push_back(TimeVarying::scalar(0.1 * i));
  ASSERT_TRUE(validate_model(m).ok());
  const auto g = make_gain_schedule(m, steps(100));
  const Layout lay(m);
  const Vec X = random_vec(rng, 6);
  Vec U0;
  dss_joint_actions(m, lay, *g, 10, X, deep_state_joint(m, lay, X), U0);
  for (int i = 0; i < 6; ++i) {
    // Perturbation of the other agents orthogonal to both feature columns.
    Mat cols(5, 2);
    for (int r = 0, o = 0; o < 6; ++o) {
      if (o == i) continue;
      cols.row(r++) = m.subs[0].alpha.row(o);
    }
    const Mat Qf = Eigen::HouseholderQR<Mat>(cols).householderQ();
    const Vec null_dir = Qf.rightCols(3) * random_vec(rng, 3);
    Vec Xp = X;
    for (int r = 0, o = 0; o < 6; ++o) {
      if (o == i) continue;
      Xp(o) += null_dir(r++);
    }
    const Vec deep_p = deep_state_joint(m, lay, Xp);
    EXPECT_LE((deep_p - deep_state_joint(m, lay, X)).norm(), 1e-12);
    Vec U1;
    dss_joint_actions(m, lay, *g, 10, Xp, deep_p, U1);
    EXPECT_NEAR(U1(i), U0(i), 1e-12);
  }
}

TEST(DssBeta, UnitFactorsDegenerateToDss) {
  auto m = scalar_team(2, 0.3, 1.0, 0.2, 1.0, 0.5, 0.0, 1.0);
  m.subs[0].beta = Vec::Ones(2);
  m.subs[0].tracking = {TimeVarying::scalar(0.5), TimeVarying::scalar(-0.2)};
  auto opts = steps(200);
  opts.assembly.use_beta = true;
  const auto gb = make_gain_schedule(m, opts);
  const auto g = make_gain_schedule(m, steps(200));
  const Vec xbar = Vec::Constant(1, 0.4);
  for (int i = 0; i < 2; ++i) {
    for (double t : {0.0, 0.5}) {
      const Vec x = Vec::Constant(1, 0.1 + i);
      EXPECT_LE((dss_action_with_beta(m, *gb, 0, i, t, x, xbar) - dss_action(m, *g, 0, i, t, x, xbar)).norm(),
                1e-14);
    }
  }
}

TEST(DssBeta, MatchesWeightedCentralizedOracle) {
  const auto m = beta_model();
  auto opts = steps(400);
  opts.assembly.use_beta = true;
  const auto g = make_gain_schedule(m, opts);
  CentralizedOracleOptions co;
  co.steps = 400;
  co.use_beta = true;
  const auto cmp = compare_with_oracle(m, *g, centralized_oracle_gains(m, co));
  EXPECT_LE(cmp.max_rel_gain, 1e-8);
  EXPECT_LE(cmp.max_rel_offset, 1e-8);
}

TEST(DssBeta, RefusesRiskSensitiveOrCoupledModels) {
  auto m = beta_model();
  auto opts = steps(50);
  opts.assembly.use_beta = true;
  const auto g = make_gain_schedule(m, opts);
  auto risky = m;
  risky.risk_factor = 0.1;
  EXPECT_THROW(dss_action_with_beta(risky, *g, 0, 0, 0.0, Vec::Zero(1), Vec::Zero(1)), DomainError);
  auto coupled = m;
  coupled.subs[0].Abar = {TimeVarying::scalar(0.5)};
  EXPECT_THROW(dss_action_with_beta(coupled, *g, 0, 0, 0.0, Vec::Zero(1), Vec::Zero(1)), DomainError);
  EXPECT_THROW(make_strategy(StrategyKind::DssBeta, risky), DomainError);
  const auto plain = make_gain_schedule(m, steps(50));
  EXPECT_THROW(dss_action_with_beta(m, *plain, 0, 0, 0.0, Vec::Zero(1), Vec::Zero(1)), InputError);
}

TEST(WeaklyCoupledLaw, ReducedFormulaEqualsGeneralLaw) {
  std::mt19937_64 rng(36);
  for (int trial = 0; trial < 10; ++trial) {
    RandomModelOptions gen;
    gen.weakly_coupled = true;
    gen.lambda = 0.1;
    const auto m = random_model(rng, gen);
    const auto g = make_gain_schedule(m, steps(100));
    const Layout lay(m);
    const Vec xbar = random_vec(rng, lay.deep_x_dim());
    for (int s = 0; s < m.num_subs(); ++s) {
      const auto& sub = m.subs[s];
      const Vec own = xbar.segment(lay.deep_x(s), sub.f * sub.dx);
      for (int i = 0; i < sub.n; ++i) {
        const Vec x = random_vec(rng, sub.dx);
        const Vec a = weakly_coupled_action(m, *g, s, i, 0.3, x, own);
        const Vec b = dss_action(m, *g, s, i, 0.3, x, xbar);
        EXPECT_LE((a - b).norm(), 1e-12 * (1.0 + b.norm()));
      }
    }
  }
  std::mt19937_64 rng2(37);
  RandomModelOptions gen;
  gen.max_subs = 1;
  gen.max_features = 1;
  auto m = random_model(rng2, gen);
  const auto& sub = m.subs[0];
  m.subs[0].Abar = {Mat(Mat::Identity(sub.dx, sub.dx))};
  m.subs[0].Qbar = Mat(Mat::Identity(sub.dx, sub.dx));
  m.subs[0].n = 3;
  m.subs[0].alpha = Mat::Ones(3, 1);
  m.subs[0].tracking.clear();
  m.subs[0].init.mean.assign(3, Vec::Zero(sub.dx));
  ASSERT_TRUE(is_weakly_coupled(m));
  auto two = m;
  two.subs.push_back(m.subs[0]);
  const int dx = sub.dx, du = sub.du;
  for (int s = 0; s < 2; ++s) {
    Mat ab = Mat::Zero(dx, 2 * dx);
    ab.middleCols(s * dx, dx).setIdentity();
    two.subs[s].Abar = {ab};
    two.subs[s].Bbar = {TimeVarying::zeros(dx, 2 * du)};
    Mat qb = Mat::Zero(2 * dx, 2 * dx);
    qb.block(s * dx, s * dx, dx, dx).setIdentity();
    two.subs[s].Qbar = qb;
    two.subs[s].Rbar = TimeVarying::zeros(2 * du, 2 * du);
  }
  ASSERT_TRUE(is_weakly_coupled(two));
  Mat cross = Mat::Zero(dx, 2 * dx);
  cross.setOnes();
  two.subs[0].Abar = {cross};
  const auto g = make_gain_schedule(two, steps(20));
  EXPECT_THROW(weakly_coupled_action(two, *g, 0, 0, 0.0, Vec::Zero(dx), Vec::Zero(dx)), DomainError);
}

TEST(Pdss, FullSharingReproducesDssBitForBit) {
  std::mt19937_64 rng(38);
  RandomModelOptions gen;
  gen.lambda = 0.1;
  auto m = random_model(rng, gen);
  for (auto& sub : m.subs) {
    sub.init.kind = InitialState::Kind::Gaussian;
    sub.init.cov = Mat::Identity(sub.dx, sub.dx) * 0.3;
  }
  ASSERT_EQ(static_cast<int>(m.shared_set.size()), m.num_subs());
  const auto g = make_gain_schedule(m, steps(100));
  auto dss = make_dss_strategy(m, g);
  auto pdss = make_pdss_strategy(m, g, StrategyKind::PdssFinite);
  SimulationOptions so;
  so.dt = 0.01;
  const auto a = simulate(m, *dss, so, 5, 3);
  const auto b = simulate(m, *pdss, so, 5, 3);
  ASSERT_EQ(a.x.size(), b.x.size());
  for (std::size_t k = 0; k < a.x.size(); ++k) {
    EXPECT_EQ(a.x[k], b.x[k]);
    EXPECT_EQ(a.u[k], b.u[k]);
  }
  EXPECT_EQ(a.weighted_cost, b.weighted_cost);
}

TEST(Pdss, NoiseFreeEstimatorIsExact) {
  std::mt19937_64 rng(39);
  for (auto kind : {StrategyKind::PdssFinite, StrategyKind::PdssInfinite}) {
    RandomModelOptions gen;
    gen.lambda = 0.0;
    auto m = random_model(rng, gen);
    for (auto& sub : m.subs) {
      sub.C = TimeVarying::zeros(sub.dx, sub.dx);
      sub.init.mean.assign(static_cast<std::size_t>(sub.n), random_vec(rng, sub.dx));
    }
    m.shared_set.clear();
    auto opts = steps(100);
    if (kind == StrategyKind::PdssInfinite) opts.assembly = infinite_population_assembly(m);
    const auto g = make_gain_schedule(m, opts);
    auto pdss = make_pdss_strategy(m, g, kind);
    auto dss = make_dss_strategy(m, g);
    SimulationOptions so;
    so.dt = 0.01;
    const auto a = simulate(m, *pdss, so, 1);
    const auto b = simulate(m, *dss, so, 1);
    for (std::size_t k = 0; k < a.x.size(); ++k) {
      EXPECT_LE((a.estimate[k] - a.deep_x[k]).norm(), 1e-10 * (1.0 + a.deep_x[k].norm()));
      EXPECT_LE((a.u[k] - b.u[k]).norm(), 1e-9 * (1.0 + b.u[k].norm()));
    }
  }
}

TEST(Pdss, UnobservedEstimatorsStartAtTheMean) {
  auto m = scalar_team(3, 0.0, 1.0, 0.5, 1.0, 1.0, 0.0, 1.0, 2.0);
  m.subs[0].init.kind = InitialState::Kind::Gaussian;
  m.subs[0].init.cov = Mat::Identity(1, 1);
  const auto g = make_gain_schedule(m, steps(50));
  auto pdss = make_pdss_strategy(m, g, StrategyKind::PdssFinite);
  SimulationOptions so;
  so.dt = 0.02;
  const auto tr = simulate(m, *pdss, so, 2);
  EXPECT_DOUBLE_EQ(tr.estimate[0](0), 2.0);
  EXPECT_NE(tr.deep_x[0](0), 2.0);
}

TEST(Pdss, EstimationErrorShrinksWithPopulation) {
  auto mse = [](int n) {
    auto m = scalar_team(n, 0.0, 1.0, 1.0, 1.0, 1.0, 0.0, 1.0, 1.0);
    m.subs[0].init.kind = InitialState::Kind::Gaussian;
    m.subs[0].init.cov = Mat::Identity(1, 1);
    const auto g = make_gain_schedule(m, steps(100));
    auto proto = make_pdss_strategy(m, g, StrategyKind::PdssFinite);
    SimulationOptions so;
    so.dt = 0.01;
    double acc = 0.0;
    const int M = 200;
    for (int r = 0; r < M; ++r) {
      auto s = proto->clone();
      const auto tr = simulate(m, *s, so, 9, r);
      acc += (tr.estimate.back() - tr.deep_x.back()).squaredNorm();
    }
    return acc / M;
  };
  const double e2 = mse(2), e50 = mse(50);
  EXPECT_LT(e50, e2 / 5.0) << e2 << " vs " << e50;
}

TEST(Pdss, InfiniteFilterGainsAtRiskNeutrality) {
  std::mt19937_64 rng(40);
  RandomModelOptions gen;
  auto m = random_model(rng, gen);
  m.shared_set = {0};
  const auto fin = make_gain_schedule(m, steps(100));
  auto opts = steps(100);
  opts.assembly = infinite_population_assembly(m);
  const auto inf = make_gain_schedule(m, opts);
  for (std::size_t k = 0; k < fin->riccati.grid.t.size(); ++k) {
    EXPECT_EQ(fin->riccati.theta_bar[k], inf->riccati.theta_bar[k]);
    for (int s = 0; s < m.num_subs(); ++s) EXPECT_EQ(fin->riccati.theta[s][k], inf->riccati.theta[s][k]);
  }
}

TEST(Pdss, InfiniteLimitOfLargePopulation) {
  const int n = 1000000;
  auto m = scalar_team(n, 0.3, 1.0, 1.0, 1.0, 1.0, 0.5, 1.0);
  const auto fin = solve_deep_riccati(m, steps(200));
  auto opts = steps(200);
  opts.assembly = infinite_population_assembly(m);
  const auto inf = solve_deep_riccati(m, opts);
  for (std::size_t k = 0; k < fin.grid.t.size(); k += 10) {
    EXPECT_LE((fin.theta_bar[k] - inf.theta_bar[k]).norm(), 1e-6);
    EXPECT_LE((fin.theta[0][k] - inf.theta[0][k]).norm(), 1e-6);
  }
  // At n = 1 the risk term is visible.
  auto small = scalar_team(1, 0.3, 1.0, 1.0, 1.0, 1.0, 0.5, 1.0);
  const auto a = solve_deep_riccati(small, steps(200));
  const auto b = solve_deep_riccati(small, opts);
  EXPECT_GT((a.theta_bar[0] - b.theta_bar[0]).norm(), 1e-3);
}

TEST(Strategies, KindNamesRoundTrip) {
  for (auto k : {StrategyKind::Dss, StrategyKind::DssBeta, StrategyKind::PdssFinite, StrategyKind::PdssInfinite,
                 StrategyKind::Zero, StrategyKind::CentralizedOracle}) {
    EXPECT_EQ(parse_strategy_kind(to_string(k)), k);
  }
  EXPECT_THROW(parse_strategy_kind("greedy"), InputError);
}

TEST(NetworkExport, SingleAgentLayerIsOnePlusGain) {
  const auto m = scalar_team(1, 0.0, 1.0, 0.5, 1.0, 1.0, 0.0, 1.0);
  const auto g = make_gain_schedule(m, steps(100));
  const double dt = 0.01;
  const auto net = export_network_weights(m, *g, dt);
  ASSERT_EQ(net.layers.size(), 100u);
  for (std::size_t k = 0; k < net.layers.size(); ++k) {
    const int gk = g->riccati.index_at(k * dt);
    EXPECT_NEAR(net.layers[k].W[0][0](0, 0), 1.0 + dt * g->riccati.theta_bar[gk](0, 0), 1e-15);
    EXPECT_EQ(net.layers[k].b[0](0), 0.0);
  }
}

TEST(NetworkExport, ZeroCouplingHasNoCrossWeights) {
  std::mt19937_64 rng(41);
  auto m = scalar_team(4, 0.2, 1.0, 0.3, 1.0, 1.0, 0.1, 1.0);
  m.subs[0].f = 2;
  m.subs[0].alpha = random_alpha(rng, 4, 2);
  m.subs[0].Abar = {TimeVarying::zeros(1, 2), TimeVarying::zeros(1, 2)};
  m.subs[0].Bbar = {TimeVarying::zeros(1, 2), TimeVarying::zeros(1, 2)};
  m.subs[0].Qbar = TimeVarying::zeros(2, 2);
  m.subs[0].Rbar = TimeVarying::zeros(2, 2);
  const auto g = make_gain_schedule(m, steps(100));
  const auto net = export_network_weights(m, *g, 0.01);
  for (const auto& layer : net.layers) {
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        if (i != j) EXPECT_LE(layer.W[i][j].norm(), 1e-9);
      }
      EXPECT_EQ(layer.b[i].norm(), 0.0);
    }
  }
}

TEST(NetworkExport, ForwardPassReproducesClosedLoop) {
  std::mt19937_64 rng(42);
  auto m = scalar_team(5, 0.4, 1.0, 0.5, 1.0, 0.5, 0.1, 1.0, 0.5);
  m.subs[0].Qbar = TimeVarying::scalar(0.6);
  m.subs[0].Rbar = TimeVarying::scalar(0.2);
  for (int i = 0; i < 5; ++i) m.subs[0].tracking.push_back(TimeVarying::scalar(0.2 * i));
  const auto g = make_gain_schedule(m, steps(1000));
  const double dt = 0.001;
  const auto net = export_network_weights(m, *g, dt);
  ASSERT_EQ(net.layers.size(), 1000u);
  auto dss = make_dss_strategy(m, g);
  SimulationOptions so;
  so.dt = dt;
  const auto tr = simulate(m, *dss, so, 77);
  double worst = 0.0;
  for (std::size_t k = 0; k < net.layers.size(); ++k) {
    const Vec pred = forward_layer(net.layers[k], tr.x[k]) + tr.noise[k];
    worst = std::max(worst, (pred - tr.x[k + 1]).cwiseAbs().maxCoeff());
  }
  EXPECT_LE(worst, 1e-10);
}

TEST(NetworkExport, RefusesUnsupportedModels) {
  auto m = scalar_team(2, 0.0, 1.0, 0.5, 1.0, 1.0, 0.0, 1.0);
  m.subs[0].Abar = {TimeVarying::scalar(0.3)};
  const auto g = make_gain_schedule(m, steps(10));
  EXPECT_THROW(export_network_weights(m, *g, 0.1), DomainError);
  const auto plain = scalar_team(2, 0.0, 1.0, 0.5, 1.0, 1.0, 0.0, 1.0);
  EXPECT_THROW(export_network_weights(plain, *make_gain_schedule(plain, steps(10)), 0.3), InputError);
}
