#include "deeplq/strategies.hpp"

#include <algorithm>

#include "deeplq/centralized_oracle.hpp"

namespace deeplq {

std::string to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::Dss: return "dss";
    case StrategyKind::DssBeta: return "dss-beta";
    case StrategyKind::PdssFinite: return "pdss-finite";
    case StrategyKind::PdssInfinite: return "pdss-infinite";
    case StrategyKind::Zero: return "zero";
    case StrategyKind::CentralizedOracle: return "oracle";
  }
  return "unknown";
}

StrategyKind parse_strategy_kind(const std::string& name) {
  for (auto k : {StrategyKind::Dss, StrategyKind::DssBeta, StrategyKind::PdssFinite, StrategyKind::PdssInfinite,
                 StrategyKind::Zero, StrategyKind::CentralizedOracle}) {
    if (to_string(k) == name) return k;
  }
  throw InputError("unknown strategy '" + name + "'");
}

Mat GainSchedule::theta_bar_rows(const Layout& layout, int s, int j, int k) const {
  return riccati.theta_bar[k].middleRows(layout.deep_u(s, j), layout.du(s));
}

namespace {

void require_beta_preconditions(const TeamModel& model) {
  if (model.risk_factor != 0.0) {
    throw DomainError("the optimization-factor strategy is optimal only for lambda = 0");
  }
  for (const auto& sub : model.subs) {
    for (const auto& m : sub.Abar) {
      if (!m.is_zero()) throw DomainError("the optimization-factor strategy needs decoupled dynamics (Abar = 0)");
    }
    for (const auto& m : sub.Bbar) {
      if (!m.is_zero()) throw DomainError("the optimization-factor strategy needs decoupled dynamics (Bbar = 0)");
    }
  }
}

// u = theta (x - sum_j w_j z^j) + rho + sum_j w_j (thetabar^j z + rhobar^j).
Vec single_action(const TeamModel& model, const GainSchedule& gains, int s, int i, double t, const Vec& x_i,
                  const Vec& xbar, bool use_beta) {
  const Layout lay(model);
  const auto& sub = model.subs[s];
  if (x_i.size() != sub.dx || xbar.size() != lay.deep_x_dim()) throw InputError("dss_action: dimension mismatch");
  const int k = gains.riccati.index_at(t);
  const Mat w = mixing_weights(sub, use_beta);
  const Vec v = gains.riccati.theta_bar[k] * xbar + gains.corrections.rho_bar[k];
  Vec y = x_i;
  Vec u = gains.corrections.rho_of(s, i, k);
  for (int j = 0; j < sub.f; ++j) {
    y -= w(i, j) * xbar.segment(lay.deep_x(s, j), sub.dx);
    u += w(i, j) * v.segment(lay.deep_u(s, j), sub.du);
  }
  return u + gains.riccati.theta[s][k] * y;
}

}  // namespace

std::shared_ptr<const GainSchedule> make_gain_schedule(const TeamModel& model, const DeepRiccatiOptions& options) {
  auto g = std::make_shared<GainSchedule>();
  g->riccati = solve_deep_riccati(model, options);
  g->corrections = solve_correction_terms(model, g->riccati);
  g->use_beta = options.assembly.use_beta;
  return g;
}

Vec dss_action(const TeamModel& model, const GainSchedule& gains, int s, int i, double t, const Vec& x_i,
               const Vec& xbar) {
  return single_action(model, gains, s, i, t, x_i, xbar, false);
}

Vec dss_action_with_beta(const TeamModel& model, const GainSchedule& gains, int s, int i, double t,
                         const Vec& x_i, const Vec& xbar) {
  require_beta_preconditions(model);
  if (!gains.use_beta) throw InputError("dss_action_with_beta needs a schedule solved with use_beta");
  return single_action(model, gains, s, i, t, x_i, xbar, true);
}

Vec weakly_coupled_action(const TeamModel& model, const GainSchedule& gains, int s, int i, double t,
                          const Vec& x_i, const Vec& xbar_s) {
  if (!is_weakly_coupled(model)) throw DomainError("weakly_coupled_action: model is not weakly coupled");
  const Layout lay(model);
  const auto& sub = model.subs[s];
  if (xbar_s.size() != sub.f * sub.dx) throw InputError("weakly_coupled_action: dimension mismatch");
  const int k = gains.riccati.index_at(t);
  const Mat& theta = gains.riccati.theta[s][k];
  const Mat& tb = gains.riccati.theta_bar[k];
  const Vec& rb = gains.corrections.rho_bar[k];
  // theta x + sum_j alpha (thetabar^{jj} - theta) xbar^j + rho + sum_j alpha rhobar^j.
  Vec u = theta * x_i + gains.corrections.rho_of(s, i, k);
  for (int j = 0; j < sub.f; ++j) {
    const Mat diag_block = tb.block(lay.deep_u(s, j), lay.deep_x(s, j), sub.du, sub.dx);
    const auto xj = xbar_s.segment(j * sub.dx, sub.dx);
    u += sub.alpha(i, j) * ((diag_block - theta) * xj + rb.segment(lay.deep_u(s, j), sub.du));
  }
  return u;
}

void dss_joint_actions(const TeamModel& model, const Layout& lay, const GainSchedule& gains, int k,
                       const Vec& joint_x, const Vec& deep, Vec& joint_u) {
  const bool beta = gains.use_beta;
  Vec v = gains.corrections.rho_bar[k];
  v.noalias() += gains.riccati.theta_bar[k] * deep;
  joint_u.resize(lay.joint_u_dim());
  for (int s = 0; s < model.num_subs(); ++s) {
    const auto& sub = model.subs[s];
    const Mat& theta = gains.riccati.theta[s][k];
    const Vec* beta_v = beta && sub.beta.size() ? &sub.beta : nullptr;
    Vec y(sub.dx);
    for (int i = 0; i < sub.n; ++i) {
      const double scale = beta_v ? 1.0 / (*beta_v)(i) : 1.0;
      y = joint_x.segment(lay.joint_x(s, i), sub.dx);
      auto u = joint_u.segment(lay.joint_u(s, i), sub.du);
      u = gains.corrections.rho_of(s, i, k);
      for (int j = 0; j < sub.f; ++j) {
        const double w = scale * sub.alpha(i, j);
        y.noalias() -= w * deep.segment(lay.deep_x(s, j), sub.dx);
        u.noalias() += w * v.segment(lay.deep_u(s, j), sub.du);
      }
      u.noalias() += theta * y;
    }
  }
}

Mat composed_dss_gain(const TeamModel& model, const GainSchedule& gains, int k) {
  const Layout lay(model);
  const Mat Mx = assemble_centralized(model, 0.0, {lay.joint_x_dim(), false}).deep_x_map;
  Mat K = Mat::Zero(lay.joint_u_dim(), lay.joint_x_dim());
  const Mat& tb = gains.riccati.theta_bar[k];
  for (int s = 0; s < model.num_subs(); ++s) {
    const auto& sub = model.subs[s];
    const Mat w = mixing_weights(sub, gains.use_beta);
    const Mat& theta = gains.riccati.theta[s][k];
    for (int i = 0; i < sub.n; ++i) {
      auto rows = K.middleRows(lay.joint_u(s, i), sub.du);
      rows.middleCols(lay.joint_x(s, i), sub.dx) += theta;
      for (int j = 0; j < sub.f; ++j) {
        rows.noalias() -= w(i, j) * theta * Mx.middleRows(lay.deep_x(s, j), sub.dx);
        rows.noalias() += w(i, j) * tb.middleRows(lay.deep_u(s, j), sub.du) * Mx;
      }
    }
  }
  return K;
}

Vec composed_dss_offset(const TeamModel& model, const GainSchedule& gains, int k) {
  const Layout lay(model);
  Vec out = Vec::Zero(lay.joint_u_dim());
  const Vec& rb = gains.corrections.rho_bar[k];
  for (int s = 0; s < model.num_subs(); ++s) {
    const auto& sub = model.subs[s];
    const Mat w = mixing_weights(sub, gains.use_beta);
    for (int i = 0; i < sub.n; ++i) {
      auto seg = out.segment(lay.joint_u(s, i), sub.du);
      seg = gains.corrections.rho_of(s, i, k);
      for (int j = 0; j < sub.f; ++j) seg += w(i, j) * rb.segment(lay.deep_u(s, j), sub.du);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

class ZeroStrategy final : public Strategy {
 public:
  explicit ZeroStrategy(int du) : du_(du) {}
  StrategyKind kind() const override { return StrategyKind::Zero; }
  std::unique_ptr<Strategy> clone() const override { return std::make_unique<ZeroStrategy>(*this); }
  void act(double, const Vec&, Vec& joint_u) override { joint_u.setZero(du_); }

 private:
  int du_;
};

class DssStrategy final : public Strategy {
 public:
  DssStrategy(const TeamModel& model, std::shared_ptr<const GainSchedule> gains)
      : model_(std::make_shared<TeamModel>(model)), layout_(model), gains_(std::move(gains)) {}
  StrategyKind kind() const override { return gains_->use_beta ? StrategyKind::DssBeta : StrategyKind::Dss; }
  std::unique_ptr<Strategy> clone() const override { return std::make_unique<DssStrategy>(*this); }
  void act(double t, const Vec& joint_x, Vec& joint_u) override {
    deep_ = deep_state_joint(*model_, layout_, joint_x);
    dss_joint_actions(*model_, layout_, *gains_, gains_->riccati.index_at(t), joint_x, deep_, joint_u);
  }

 private:
  std::shared_ptr<const TeamModel> model_;
  Layout layout_;
  std::shared_ptr<const GainSchedule> gains_;
  Vec deep_;
};

// Estimator z: observed deep states are copied in, the others follow the
// closed-loop deep dynamics driven by the schedule's own gains.
class PdssStrategy final : public Strategy {
 public:
  PdssStrategy(const TeamModel& model, std::shared_ptr<const GainSchedule> gains, StrategyKind kind)
      : model_(std::make_shared<TeamModel>(model)), layout_(model), gains_(std::move(gains)), kind_(kind) {
    if (model.is_time_invariant()) {
      fixed_ = std::make_shared<PopulationMatrices>(assemble_population_matrices(model, 0.0));
    }
    z_ = Vec::Zero(layout_.deep_x_dim());
  }
  StrategyKind kind() const override { return kind_; }
  std::unique_ptr<Strategy> clone() const override { return std::make_unique<PdssStrategy>(*this); }

  void reset(const Vec& joint_x0) override {
    z_ = deep_state_joint(*model_, layout_, joint_x0);
    for (int s = 0; s < model_->num_subs(); ++s) {
      if (model_->is_shared(s)) continue;
      const auto& sub = model_->subs[s];
      z_.segment(layout_.deep_x(s), sub.f * sub.dx) = deep_state(sub.init.mean, sub.alpha);
    }
  }

  void act(double t, const Vec& joint_x, Vec& joint_u) override {
    if (!model_->shared_set.empty()) {
      const Vec observed = deep_state_joint(*model_, layout_, joint_x);
      for (int s : model_->shared_set) {
        const auto& sub = model_->subs[s];
        z_.segment(layout_.deep_x(s), sub.f * sub.dx) = observed.segment(layout_.deep_x(s), sub.f * sub.dx);
      }
    }
    k_ = gains_->riccati.index_at(t);
    dss_joint_actions(*model_, layout_, *gains_, k_, joint_x, z_, joint_u);
  }

  void advance(double t, double dt) override {
    if (static_cast<int>(model_->shared_set.size()) == model_->num_subs()) return;
    PopulationMatrices local;
    const PopulationMatrices* pm = fixed_.get();
    if (!pm) {
      local = assemble_population_matrices(*model_, t);
      pm = &local;
    }
    Vec v = gains_->corrections.rho_bar[k_];
    v.noalias() += gains_->riccati.theta_bar[k_] * z_;
    Vec dz = pm->A * z_;
    dz.noalias() += pm->B * v;
    for (int s = 0; s < model_->num_subs(); ++s) {
      if (model_->is_shared(s)) continue;
      const auto& sub = model_->subs[s];
      z_.segment(layout_.deep_x(s), sub.f * sub.dx) += dt * dz.segment(layout_.deep_x(s), sub.f * sub.dx);
    }
  }

  const Vec* estimate() const override { return &z_; }

 private:
  std::shared_ptr<const TeamModel> model_;
  Layout layout_;
  std::shared_ptr<const GainSchedule> gains_;
  StrategyKind kind_;
  std::shared_ptr<const PopulationMatrices> fixed_;
  Vec z_;
  int k_ = 0;
};

class OracleStrategy final : public Strategy {
 public:
  explicit OracleStrategy(std::shared_ptr<const CentralizedSolution> sol) : sol_(std::move(sol)) {}
  StrategyKind kind() const override { return StrategyKind::CentralizedOracle; }
  std::unique_ptr<Strategy> clone() const override { return std::make_unique<OracleStrategy>(*this); }
  void act(double t, const Vec& joint_x, Vec& joint_u) override {
    const int k = sol_->grid.index_at(t);
    joint_u = sol_->k[k];
    joint_u.noalias() += sol_->K[k] * joint_x;
  }

 private:
  std::shared_ptr<const CentralizedSolution> sol_;
};

}  // namespace

AssemblyOptions infinite_population_assembly(const TeamModel& model) {
  AssemblyOptions a;
  for (int s = 0; s < model.num_subs(); ++s) a.infinite_population.push_back(!model.is_shared(s));
  return a;
}

std::unique_ptr<Strategy> make_dss_strategy(const TeamModel& model, std::shared_ptr<const GainSchedule> gains) {
  if (gains->use_beta) require_beta_preconditions(model);
  return std::make_unique<DssStrategy>(model, std::move(gains));
}

std::unique_ptr<Strategy> make_pdss_strategy(const TeamModel& model, std::shared_ptr<const GainSchedule> gains,
                                             StrategyKind kind) {
  if (kind != StrategyKind::PdssFinite && kind != StrategyKind::PdssInfinite) {
    throw InputError("make_pdss_strategy needs a PDSS kind");
  }
  if (gains->use_beta) throw InputError("PDSS filters use the standard (beta-free) law");
  return std::make_unique<PdssStrategy>(model, std::move(gains), kind);
}

std::unique_ptr<Strategy> make_oracle_strategy(std::shared_ptr<const CentralizedSolution> solution) {
  return std::make_unique<OracleStrategy>(std::move(solution));
}

std::unique_ptr<Strategy> make_strategy(StrategyKind kind, const TeamModel& model, const StrategyOptions& options) {
  DeepRiccatiOptions ro;
  ro.steps = options.riccati_steps;
  switch (kind) {
    case StrategyKind::Zero: return std::make_unique<ZeroStrategy>(Layout(model).joint_u_dim());
    case StrategyKind::Dss: return make_dss_strategy(model, make_gain_schedule(model, ro));
    case StrategyKind::DssBeta:
      require_beta_preconditions(model);
      ro.assembly.use_beta = true;
      return make_dss_strategy(model, make_gain_schedule(model, ro));
    case StrategyKind::PdssFinite: return make_pdss_strategy(model, make_gain_schedule(model, ro), kind);
    case StrategyKind::PdssInfinite:
      ro.assembly = infinite_population_assembly(model);
      return make_pdss_strategy(model, make_gain_schedule(model, ro), kind);
    case StrategyKind::CentralizedOracle: {
      CentralizedOracleOptions co;
      co.steps = options.riccati_steps;
      co.max_joint_dim = options.max_joint_dim;
      return make_oracle_strategy(std::make_shared<CentralizedSolution>(centralized_oracle_gains(model, co)));
    }
  }
  throw InputError("unknown strategy kind");
}

}  // namespace deeplq
