#include "deeplq/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "deeplq/parallel.hpp"

namespace deeplq {

namespace {

int step_count(const TeamModel& model, double dt) {
  if (!(dt > 0.0)) throw InputError("dt must be positive");
  const double ratio = model.horizon / dt;
  const long K = std::lround(ratio);
  if (K < 1 || std::abs(K * dt - model.horizon) > 1e-9 * std::max(1.0, model.horizon)) {
    throw InputError("dt must divide the horizon");
  }
  return static_cast<int>(K);
}

// Adds weight * (running cost at t) to every agent's entry of J.
void add_running_cost(const TeamModel& model, const Layout& lay, double t, const Vec& X, const Vec& U,
                      const Vec& xbar, const Vec& ubar, double weight, Vec& J) {
  for (int s = 0; s < model.num_subs(); ++s) {
    const auto& sub = model.subs[s];
    const Mat& Q = sub.Q.at(t);
    const Mat& R = sub.R.at(t);
    const double deep_term = xbar.dot(sub.Qbar.at(t) * xbar) + ubar.dot(sub.Rbar.at(t) * ubar);
    const bool tracking = !sub.tracking.empty();
    for (int i = 0; i < sub.n; ++i) {
      const auto x = X.segment(lay.joint_x(s, i), sub.dx);
      const auto u = U.segment(lay.joint_u(s, i), sub.du);
      double c = deep_term;
      if (sub.dx == 1) {
        const double e = tracking ? x(0) - sub.tracking[i].at(t)(0, 0) : x(0);
        c += Q(0, 0) * e * e;
      } else {
        const Vec e = tracking ? Vec(x - sub.tracking[i].at(t)) : Vec(x);
        c += e.dot(Q * e);
      }
      c += sub.du == 1 ? R(0, 0) * u(0) * u(0) : u.dot(R * u);
      J(lay.agent_index(s, i)) += weight * c;
    }
  }
}

void add_terminal_cost(const TeamModel& model, const Layout& lay, const Vec& X, const Vec& xbar, Vec& J) {
  const double T = model.horizon;
  for (int s = 0; s < model.num_subs(); ++s) {
    const auto& sub = model.subs[s];
    const Mat& Q = sub.Q.at(T);
    const double deep_term = xbar.dot(sub.Qbar.at(T) * xbar);
    for (int i = 0; i < sub.n; ++i) {
      Vec e = X.segment(lay.joint_x(s, i), sub.dx);
      if (!sub.tracking.empty()) e -= sub.tracking[i].at(T);
      J(lay.agent_index(s, i)) += e.dot(Q * e) + deep_term;
    }
  }
}

double weighted_total(const TeamModel& model, const Layout& lay, const Vec& J, bool use_beta) {
  double total = 0.0;
  for (int s = 0; s < model.num_subs(); ++s) {
    const auto& sub = model.subs[s];
    double sum = 0.0;
    for (int i = 0; i < sub.n; ++i) {
      const double b = use_beta && sub.beta.size() ? sub.beta(i) : 1.0;
      sum += b * J(lay.agent_index(s, i));
    }
    total += sub.mu / sub.n * sum;
  }
  return total;
}

Mat psd_factor(const Mat& cov) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (cov + cov.transpose()));
  return es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
}

}  // namespace

Trajectory simulate(const TeamModel& model, Strategy& strategy, const SimulationOptions& options,
                    std::uint64_t seed, std::uint64_t replicate) {
  const Layout lay(model);
  const int K = step_count(model, options.dt);
  const double dt = options.dt;
  const double sqdt = std::sqrt(dt);
  std::mt19937_64 rng(replicate_seed(seed, replicate));
  std::normal_distribution<double> normal(0.0, 1.0);

  Vec X(lay.joint_x_dim());
  for (int s = 0; s < model.num_subs(); ++s) {
    const auto& sub = model.subs[s];
    const bool gaussian = sub.init.kind == InitialState::Kind::Gaussian;
    const Mat L = gaussian ? psd_factor(sub.init.cov) : Mat();
    Vec z(sub.dx);
    for (int i = 0; i < sub.n; ++i) {
      auto x = X.segment(lay.joint_x(s, i), sub.dx);
      x = sub.init.mean[i];
      if (gaussian) {
        for (int d = 0; d < sub.dx; ++d) z(d) = normal(rng);
        x += L * z;
      }
    }
  }

  Trajectory tr;
  Vec U(lay.joint_u_dim());
  Vec J = Vec::Zero(lay.total_agents());
  Vec xbar, ubar;
  Vec Xnext(X.size());
  Vec noise(X.size());
  std::vector<Vec> drive(static_cast<std::size_t>(model.num_subs()));
  strategy.reset(X);

  for (int k = 0;; ++k) {
    const double t = k == K ? model.horizon : k * dt;
    strategy.act(t, X, U);
    xbar = deep_state_joint(model, lay, X);
    ubar = deep_action_joint(model, lay, U);
    add_running_cost(model, lay, t, X, U, xbar, ubar, (k == 0 || k == K) ? 0.5 * dt : dt, J);
    if (options.record) {
      tr.t.push_back(t);
      tr.x.push_back(X);
      tr.u.push_back(U);
      tr.deep_x.push_back(xbar);
      tr.deep_u.push_back(ubar);
      if (const Vec* z = strategy.estimate()) tr.estimate.push_back(*z);
    }
    if (k == K) break;
    strategy.advance(t, dt);

    for (int s = 0; s < model.num_subs(); ++s) {
      const auto& sub = model.subs[s];
      const Mat& A = sub.A.at(t);
      const Mat& B = sub.B.at(t);
      const Mat& C = sub.C.at(t);
      // Coupling drive per feature: Abar^j xbar + Bbar^j ubar.
      Mat coupling(sub.dx, sub.f);
      for (int j = 0; j < sub.f; ++j) {
        coupling.col(j).noalias() = sub.Abar[j].at(t) * xbar;
        coupling.col(j).noalias() += sub.Bbar[j].at(t) * ubar;
      }
      const bool coupled = !coupling.isZero(0.0);
      Vec z(sub.dx);
      for (int i = 0; i < sub.n; ++i) {
        const auto x = X.segment(lay.joint_x(s, i), sub.dx);
        const auto u = U.segment(lay.joint_u(s, i), sub.du);
        auto xn = Xnext.segment(lay.joint_x(s, i), sub.dx);
        auto w = noise.segment(lay.joint_x(s, i), sub.dx);
        for (int d = 0; d < sub.dx; ++d) z(d) = normal(rng);
        if (sub.dx == 1 && sub.du == 1) {
          double drift = A(0, 0) * x(0) + B(0, 0) * u(0);
          if (coupled) drift += sub.alpha.row(i).dot(coupling.row(0));
          w(0) = C(0, 0) * sqdt * z(0);
          xn(0) = x(0) + dt * drift + w(0);
        } else {
          Vec drift = A * x;
          drift.noalias() += B * u;
          if (coupled) drift.noalias() += coupling * sub.alpha.row(i).transpose();
          w.noalias() = sqdt * C * z;
          xn = x + dt * drift + w;
        }
      }
    }
    if (!Xnext.allFinite()) {
      std::ostringstream os;
      os << "replicate " << replicate << " diverged at t = " << t + dt;
      throw DomainError(os.str());
    }
    X.swap(Xnext);
    if (options.record) tr.noise.push_back(noise);
  }
  add_terminal_cost(model, lay, X, xbar, J);
  tr.agent_cost = J;
  tr.weighted_cost = weighted_total(model, lay, J, options.use_beta);
  return tr;
}

CostBreakdown evaluate_cost(const Trajectory& tr, const TeamModel& model, bool use_beta) {
  const Layout lay(model);
  CostBreakdown out;
  out.per_agent = Vec::Zero(lay.total_agents());
  const int K = static_cast<int>(tr.t.size()) - 1;
  if (K < 1 || tr.x.size() != tr.t.size() || tr.u.size() != tr.t.size()) {
    throw InputError("evaluate_cost needs a recorded trajectory");
  }
  for (int k = 0; k <= K; ++k) {
    const double h_left = k > 0 ? tr.t[k] - tr.t[k - 1] : 0.0;
    const double h_right = k < K ? tr.t[k + 1] - tr.t[k] : 0.0;
    add_running_cost(model, lay, tr.t[k], tr.x[k], tr.u[k], deep_state_joint(model, lay, tr.x[k]),
                     deep_action_joint(model, lay, tr.u[k]), 0.5 * (h_left + h_right), out.per_agent);
  }
  add_terminal_cost(model, lay, tr.x[K], deep_state_joint(model, lay, tr.x[K]), out.per_agent);
  out.weighted = weighted_total(model, lay, out.per_agent, use_beta);
  return out;
}

std::vector<double> sample_costs(const TeamModel& model, const Strategy& prototype, int replicates,
                                 const SimulationOptions& options, std::uint64_t seed) {
  if (replicates < 1) throw InputError("replicate count must be positive");
  SimulationOptions opts = options;
  opts.record = false;
  std::vector<double> costs(static_cast<std::size_t>(replicates));
  parallel_for(costs.size(), [&](std::size_t m) {
    auto strategy = prototype.clone();
    costs[m] = simulate(model, *strategy, opts, seed, m).weighted_cost;
  });
  return costs;
}

CostEstimate summarize_costs(const std::vector<double>& costs, double lambda) {
  CostEstimate e;
  e.replicates = static_cast<int>(costs.size());
  e.lambda = lambda;
  if (costs.size() < 2) throw InputError("need at least two replicates");
  for (double c : costs) {
    if (!std::isfinite(c)) throw DomainError("non-finite cost sample; reduce lambda or the horizon");
  }
  const double M = static_cast<double>(costs.size());
  // Shifted by the maximum so identical samples give their value exactly.
  const double jmax = *std::max_element(costs.begin(), costs.end());
  double sum = 0.0;
  for (double c : costs) sum += c - jmax;
  e.mean = jmax + sum / M;
  double ss = 0.0;
  for (double c : costs) ss += (c - e.mean) * (c - e.mean);
  e.variance = ss / (M - 1.0);
  e.mean_stderr = std::sqrt(e.variance / M);
  if (lambda == 0.0) {
    e.risk_sensitive = e.mean;
    e.risk_sensitive_stderr = e.mean_stderr;
    return e;
  }
  // Shifted exponentials Y_m = exp(lambda (J_m - J_max)) stay in (0, 1].
  double ysum = 0.0;
  for (double c : costs) ysum += std::exp(lambda * (c - jmax));
  const double ybar = ysum / M;
  if (!(ybar > 0.0)) throw DomainError("exponential moment underflows; reduce lambda or the horizon");
  double yss = 0.0;
  for (double c : costs) {
    const double d = std::exp(lambda * (c - jmax)) - ybar;
    yss += d * d;
  }
  e.risk_sensitive = jmax + std::log(ybar) / lambda;
  e.risk_sensitive_stderr = std::sqrt(yss / (M - 1.0) / M) / (lambda * ybar);
  return e;
}

CostEstimate estimate_risk_sensitive_cost(const TeamModel& model, const Strategy& prototype, int replicates,
                                          const SimulationOptions& options, std::uint64_t seed) {
  return summarize_costs(sample_costs(model, prototype, replicates, options, seed), model.risk_factor);
}

void write_agent_csv(std::ostream& os, const Trajectory& tr, const TeamModel& model) {
  const Layout lay(model);
  int max_dx = 0, max_du = 0;
  for (const auto& sub : model.subs) {
    max_dx = std::max(max_dx, sub.dx);
    max_du = std::max(max_du, sub.du);
  }
  os << "t,s,i";
  for (int d = 0; d < max_dx; ++d) os << ",x" << d;
  for (int d = 0; d < max_du; ++d) os << ",u" << d;
  os << '\n' << std::setprecision(17);
  for (std::size_t k = 0; k < tr.t.size(); ++k) {
    for (int s = 0; s < model.num_subs(); ++s) {
      const auto& sub = model.subs[s];
      for (int i = 0; i < sub.n; ++i) {
        os << tr.t[k] << ',' << s + 1 << ',' << i + 1;
        for (int d = 0; d < max_dx; ++d) {
          os << ',';
          if (d < sub.dx) os << tr.x[k](lay.joint_x(s, i) + d);
        }
        for (int d = 0; d < max_du; ++d) {
          os << ',';
          if (d < sub.du) os << tr.u[k](lay.joint_u(s, i) + d);
        }
        os << '\n';
      }
    }
  }
}

void write_deep_csv(std::ostream& os, const Trajectory& tr, const TeamModel& model) {
  const Layout lay(model);
  int max_dx = 0;
  for (const auto& sub : model.subs) max_dx = std::max(max_dx, sub.dx);
  os << "t,s,j";
  for (int d = 0; d < max_dx; ++d) os << ",xbar" << d;
  os << '\n' << std::setprecision(17);
  for (std::size_t k = 0; k < tr.t.size(); ++k) {
    for (int s = 0; s < model.num_subs(); ++s) {
      const auto& sub = model.subs[s];
      for (int j = 0; j < sub.f; ++j) {
        os << tr.t[k] << ',' << s + 1 << ',' << j + 1;
        for (int d = 0; d < max_dx; ++d) {
          os << ',';
          if (d < sub.dx) os << tr.deep_x[k](lay.deep_x(s, j) + d);
        }
        os << '\n';
      }
    }
  }
}

}  // namespace deeplq
