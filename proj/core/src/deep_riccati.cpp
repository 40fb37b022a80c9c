#include "deeplq/deep_riccati.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <sstream>

namespace deeplq {

namespace {

// Time at which interval-k coefficients are read; grid point K uses T.
double coefficient_time(const TimeGrid& grid, int k) {
  if (k >= grid.intervals()) return grid.horizon();
  return 0.5 * (grid.t[k] + grid.t[k + 1]);
}

double local_noise_scale(const TeamModel& model, int s, const AssemblyOptions& opts) {
  const bool infinite = s < static_cast<int>(opts.infinite_population.size()) && opts.infinite_population[s];
  return infinite ? 0.0 : model.subs[s].mu / model.subs[s].n;
}

Mat solve_spd(const Mat& R, const Mat& rhs, const char* what) {
  Eigen::LLT<Mat> llt(R);
  if (llt.info() != Eigen::Success) throw DomainError(std::string(what) + " is not positive definite");
  return llt.solve(rhs);
}

RiccatiCoefficients local_coefficients(const TeamModel& model, int s, double t, double lambda,
                                       const AssemblyOptions& opts) {
  const auto& sub = model.subs[s];
  const Mat& B = sub.B.at(t);
  const Mat& C = sub.C.at(t);
  RiccatiCoefficients c;
  c.A = sub.A.at(t);
  c.Q = sub.Q.at(t);
  c.S = B * solve_spd(sub.R.at(t), B.transpose(), "R(s)") -
        2.0 * lambda * local_noise_scale(model, s, opts) * C * C.transpose();
  return c;
}

RiccatiCoefficients global_coefficients(const PopulationMatrices& pm, double lambda) {
  RiccatiCoefficients c;
  c.A = pm.A;
  c.Q = pm.Q;
  c.S = pm.B * solve_spd(pm.R, pm.B.transpose(), "Rbar") - 2.0 * lambda * pm.Sigma;
  return c;
}

std::string sub_label(const char* what, int s) {
  std::ostringstream os;
  os << what << " (sub-population " << s + 1 << ")";
  return os.str();
}

}  // namespace

TimeGrid make_grid(const TeamModel& model, int steps) {
  return TimeGrid::with_breakpoints(model.horizon, steps, model.breakpoints());
}

DeepRiccatiSolution solve_deep_riccati(const TeamModel& model, const DeepRiccatiOptions& options) {
  DeepRiccatiSolution sol;
  sol.grid = make_grid(model, options.steps);
  sol.lambda = model.risk_factor;
  sol.assembly = options.assembly;
  const int S = model.num_subs();
  const int K = sol.grid.intervals();
  const double T = model.horizon;

  sol.P.resize(S);
  sol.P_mid.resize(S);
  sol.theta.resize(S);
  for (int s = 0; s < S; ++s) {
    auto path = integrate_riccati_backward(
        sol.grid,
        [&](int k) {
          return local_coefficients(model, s, coefficient_time(sol.grid, k), sol.lambda, options.assembly);
        },
        model.subs[s].Q.at(T), options.blowup, sub_label("local Riccati", s));
    sol.P[s] = std::move(path.P);
    sol.P_mid[s] = std::move(path.P_mid);
    sol.theta[s].resize(static_cast<std::size_t>(K) + 1);
    for (int k = 0; k <= K; ++k) {
      const double t = coefficient_time(sol.grid, k);
      const auto& sub = model.subs[s];
      sol.theta[s][k] = -solve_spd(sub.R.at(t), sub.B.at(t).transpose() * sol.P[s][k], "R(s)");
    }
  }

  std::vector<PopulationMatrices> pms;
  pms.reserve(static_cast<std::size_t>(K) + 1);
  for (int k = 0; k <= K; ++k) {
    pms.push_back(assemble_population_matrices(model, coefficient_time(sol.grid, k), options.assembly));
  }
  auto path = integrate_riccati_backward(
      sol.grid, [&](int k) { return global_coefficients(pms[k], sol.lambda); },
      assemble_population_matrices(model, T, options.assembly).Q, options.blowup, "global Riccati");
  sol.Pbar = std::move(path.P);
  sol.Pbar_mid = std::move(path.P_mid);
  sol.theta_bar.resize(static_cast<std::size_t>(K) + 1);
  for (int k = 0; k <= K; ++k) {
    sol.theta_bar[k] = -solve_spd(pms[k].R, pms[k].B.transpose() * sol.Pbar[k], "Rbar");
  }
  return sol;
}

// ---------------------------------------------------------------------------
// Weakly coupled decomposition

namespace {

bool outside_block_zero(const Mat& m, Eigen::Index r0, Eigen::Index nr, Eigen::Index c0, Eigen::Index nc,
                        double tol) {
  Mat masked = m;
  masked.block(r0, c0, nr, nc).setZero();
  return masked.cwiseAbs().maxCoeff() <= tol || masked.size() == 0;
}

}  // namespace

bool is_weakly_coupled(const TeamModel& model, std::string* why, double tol) {
  const Layout lay(model);
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  for (int s = 0; s < model.num_subs(); ++s) {
    const auto& sub = model.subs[s];
    for (int j = 0; j < sub.f; ++j) {
      for (const auto& v : sub.Abar[j].values()) {
        if (!outside_block_zero(v, 0, sub.dx, lay.deep_x(s, j), sub.dx, tol)) {
          return fail(sub_label("Abar couples to another feature or sub-population", s));
        }
      }
      for (const auto& v : sub.Bbar[j].values()) {
        if (!outside_block_zero(v, 0, sub.dx, lay.deep_u(s, j), sub.du, tol)) {
          return fail(sub_label("Bbar couples to another feature or sub-population", s));
        }
      }
    }
    for (const auto& v : sub.Qbar.values()) {
      Mat masked = v;
      for (int j = 0; j < sub.f; ++j) masked.block(lay.deep_x(s, j), lay.deep_x(s, j), sub.dx, sub.dx).setZero();
      if (masked.cwiseAbs().maxCoeff() > tol) return fail(sub_label("Qbar is not feature-diagonal", s));
    }
    for (const auto& v : sub.Rbar.values()) {
      Mat masked = v;
      for (int j = 0; j < sub.f; ++j) masked.block(lay.deep_u(s, j), lay.deep_u(s, j), sub.du, sub.du).setZero();
      if (masked.cwiseAbs().maxCoeff() > tol) return fail(sub_label("Rbar is not feature-diagonal", s));
    }
  }
  return true;
}

Mat WeaklyCoupledSolution::assembled(int k) const {
  int D = 0;
  for (std::size_t s = 0; s < P.size(); ++s) D += static_cast<int>(P[s].size()) * dx[s];
  Mat out = Mat::Zero(D, D);
  int offset = 0;
  for (std::size_t s = 0; s < P.size(); ++s) {
    for (const auto& path : P[s]) {
      out.block(offset, offset, dx[s], dx[s]) = mu[s] * path[k];
      offset += dx[s];
    }
  }
  return out;
}

WeaklyCoupledSolution solve_weakly_coupled(const TeamModel& model, const DeepRiccatiOptions& options) {
  std::string why;
  if (!is_weakly_coupled(model, &why)) throw DomainError("model is not weakly coupled: " + why);
  const Layout lay(model);
  WeaklyCoupledSolution sol;
  sol.grid = make_grid(model, options.steps);
  const double lambda = model.risk_factor;
  const double T = model.horizon;
  for (int s = 0; s < model.num_subs(); ++s) {
    const auto& sub = model.subs[s];
    sol.mu.push_back(sub.mu);
    sol.dx.push_back(sub.dx);
    const double noise = local_noise_scale(model, s, options.assembly);
    const double qbar_weight = options.assembly.use_beta ? mean_beta(sub) : 1.0;
    std::vector<std::vector<Mat>> per_feature;
    for (int j = 0; j < sub.f; ++j) {
      const int cx = lay.deep_x(s, j);
      const int cu = lay.deep_u(s, j);
      auto coeffs = [&](double t) {
        const Mat A = sub.A.at(t) + sub.Abar[j].at(t).middleCols(cx, sub.dx);
        const Mat B = sub.B.at(t) + sub.Bbar[j].at(t).middleCols(cu, sub.du);
        const Mat R = sub.R.at(t) + qbar_weight * sub.Rbar.at(t).block(cu, cu, sub.du, sub.du);
        const Mat& C = sub.C.at(t);
        RiccatiCoefficients c;
        c.A = A;
        c.Q = sub.Q.at(t) + qbar_weight * sub.Qbar.at(t).block(cx, cx, sub.dx, sub.dx);
        c.S = B * solve_spd(R, B.transpose(), "R + Rbar^j") - 2.0 * lambda * noise * C * C.transpose();
        return c;
      };
      auto path = integrate_riccati_backward(
          sol.grid, [&](int k) { return coeffs(coefficient_time(sol.grid, k)); }, coeffs(T).Q,
          options.blowup, sub_label("weakly coupled Riccati", s));
      per_feature.push_back(std::move(path.P));
    }
    sol.P.push_back(std::move(per_feature));
  }
  return sol;
}

// ---------------------------------------------------------------------------
// Correction terms

std::vector<Vec> relative_tracking(const TeamModel& model, int s, double t, bool use_beta) {
  const auto& sub = model.subs[s];
  const auto r = tracking_at(sub, t);
  const Mat w = mixing_weights(sub, use_beta);
  const Vec rbar = deep_state(r, sub.alpha);
  std::vector<Vec> out(r.size());
  for (int i = 0; i < sub.n; ++i) {
    out[i] = r[i];
    for (int j = 0; j < sub.f; ++j) out[i] -= w(i, j) * rbar.segment(j * sub.dx, sub.dx);
  }
  return out;
}

Vec deep_tracking(const TeamModel& model, double t) {
  const Layout lay(model);
  Vec out = Vec::Zero(lay.deep_x_dim());
  for (int s = 0; s < model.num_subs(); ++s) {
    const auto& sub = model.subs[s];
    out.segment(lay.deep_x(s), sub.f * sub.dx) = deep_state(tracking_at(sub, t), sub.alpha);
  }
  return out;
}

namespace {

// Coefficient times of every interval, then T.
std::vector<double> coefficient_times(const TimeGrid& grid) {
  std::vector<double> times;
  for (int k = 0; k <= grid.intervals(); ++k) times.push_back(coefficient_time(grid, k));
  return times;
}

}  // namespace

CorrectionTerms solve_correction_terms(const TeamModel& model, const DeepRiccatiSolution& riccati) {
  const TimeGrid& grid = riccati.grid;
  const int K = grid.intervals();
  const int S = model.num_subs();
  const double lambda = riccati.lambda;
  const bool use_beta = riccati.assembly.use_beta;
  if (static_cast<int>(riccati.P.size()) != S) throw InputError("Riccati solution does not match the model");

  CorrectionTerms out;
  out.agent_class.resize(S);
  out.xi.resize(S);
  out.xi_mid.resize(S);
  out.rho.resize(S);
  for (const auto& sub : model.subs) {
    for (const auto& r : sub.tracking) {
      if (!r.is_zero()) out.zero = false;
    }
  }

  for (int s = 0; s < S; ++s) {
    const auto& sub = model.subs[s];
    // Distinct relative signals, sampled on the coefficient times.
    std::vector<std::vector<Vec>> samples;  // [class][k]
    if (out.zero) {
      out.agent_class[s].assign(static_cast<std::size_t>(sub.n), 0);
      samples.emplace_back(static_cast<std::size_t>(K) + 1, Vec::Zero(sub.dx));
    } else {
      const auto times = coefficient_times(grid);
      std::vector<std::vector<Vec>> per_agent(static_cast<std::size_t>(sub.n));
      for (double t : times) {
        const auto dr = relative_tracking(model, s, t, use_beta);
        for (int i = 0; i < sub.n; ++i) per_agent[i].push_back(dr[i]);
      }
      out.agent_class[s].resize(static_cast<std::size_t>(sub.n));
      for (int i = 0; i < sub.n; ++i) {
        int found = -1;
        for (std::size_t c = 0; c < samples.size() && found < 0; ++c) {
          bool same = true;
          for (std::size_t k = 0; k < times.size() && same; ++k) same = samples[c][k] == per_agent[i][k];
          if (same) found = static_cast<int>(c);
        }
        if (found < 0) {
          found = static_cast<int>(samples.size());
          samples.push_back(per_agent[i]);
        }
        out.agent_class[s][i] = found;
      }
    }

    const int C = static_cast<int>(samples.size());
    auto forcing = [&](int k) {
      Mat G(sub.dx, C);
      const Mat& Q = sub.Q.at(coefficient_time(grid, k));
      for (int c = 0; c < C; ++c) G.col(c) = -Q * samples[c][k];
      return G;
    };
    LinearPath path;
    if (out.zero) {
      path.Y.assign(static_cast<std::size_t>(K) + 1, Mat::Zero(sub.dx, C));
      path.Y_mid.assign(static_cast<std::size_t>(K), Mat::Zero(sub.dx, C));
    } else {
      path = integrate_linear_backward(
          grid,
          [&](int k) {
            const auto c = local_coefficients(model, s, coefficient_time(grid, k), lambda, riccati.assembly);
            LinearNodes n;
            const Mat* Ps[3] = {&riccati.P[s][k + 1], &riccati.P_mid[s][k], &riccati.P[s][k]};
            const Mat G = forcing(k);
            for (int node = 0; node < 3; ++node) {
              n.F[node] = (c.A - c.S * *Ps[node]).transpose();
              n.G[node] = G;
            }
            return n;
          },
          forcing(K));
    }
    out.xi[s].assign(static_cast<std::size_t>(C), {});
    out.xi_mid[s].assign(static_cast<std::size_t>(C), {});
    out.rho[s].assign(static_cast<std::size_t>(C), {});
    for (int c = 0; c < C; ++c) {
      for (int k = 0; k <= K; ++k) {
        const double t = coefficient_time(grid, k);
        Vec xi = path.Y[k].col(c);
        out.rho[s][c].push_back(-solve_spd(sub.R.at(t), sub.B.at(t).transpose() * xi, "R(s)"));
        out.xi[s][c].push_back(std::move(xi));
        if (k < K) out.xi_mid[s][c].push_back(path.Y_mid[k].col(c));
      }
    }
  }

  const Layout lay(model);
  const int Dx = lay.deep_x_dim();
  if (out.zero) {
    out.xi_bar.assign(static_cast<std::size_t>(K) + 1, Vec::Zero(Dx));
    out.xi_bar_mid.assign(static_cast<std::size_t>(K), Vec::Zero(Dx));
    out.rho_bar.assign(static_cast<std::size_t>(K) + 1, Vec::Zero(lay.deep_u_dim()));
    return out;
  }
  std::vector<PopulationMatrices> pms;
  std::vector<Vec> forcing;
  for (int k = 0; k <= K; ++k) {
    const double t = coefficient_time(grid, k);
    pms.push_back(assemble_population_matrices(model, t, riccati.assembly));
    forcing.push_back(-pms.back().Q_track * deep_tracking(model, t));
  }
  const auto path = integrate_linear_backward(
      grid,
      [&](int k) {
        const auto c = global_coefficients(pms[k], lambda);
        LinearNodes n;
        const Mat* Ps[3] = {&riccati.Pbar[k + 1], &riccati.Pbar_mid[k], &riccati.Pbar[k]};
        for (int node = 0; node < 3; ++node) {
          n.F[node] = (c.A - c.S * *Ps[node]).transpose();
          n.G[node] = forcing[k];
        }
        return n;
      },
      forcing[K]);
  for (int k = 0; k <= K; ++k) {
    out.xi_bar.push_back(path.Y[k].col(0));
    out.rho_bar.push_back(-solve_spd(pms[k].R, pms[k].B.transpose() * out.xi_bar.back(), "Rbar"));
    if (k < K) out.xi_bar_mid.push_back(path.Y_mid[k].col(0));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Value constants

ValueConstants compute_value_constants(const TeamModel& model, const DeepRiccatiSolution& riccati,
                                       const CorrectionTerms& corr) {
  const double lambda = riccati.lambda;
  if (!(lambda > 0.0)) {
    throw DomainError("value constants need lambda > 0; the risk-neutral value is estimated by simulation");
  }
  for (const auto& sub : model.subs) {
    if (sub.init.kind != InitialState::Kind::Deterministic) {
      throw DomainError("value constants need deterministic initial states");
    }
  }
  const TimeGrid& grid = riccati.grid;
  const int K = grid.intervals();
  const int S = model.num_subs();
  const bool use_beta = riccati.assembly.use_beta;
  ValueConstants vc;

  // Backward accumulation of an integrand with Simpson's rule per interval.
  auto accumulate = [&](const std::function<double(int k, int node)>& f, double terminal) {
    std::vector<double> out(static_cast<std::size_t>(K) + 1);
    out[K] = terminal;
    for (int k = K - 1; k >= 0; --k) {
      out[k] = out[k + 1] + grid.step(k) / 6.0 * (f(k, 2) + 4.0 * f(k, 1) + f(k, 0));
    }
    return out;
  };

  vc.log_eta.resize(S);
  vc.h.resize(S);
  for (int s = 0; s < S; ++s) {
    const auto& sub = model.subs[s];
    const double noise = local_noise_scale(model, s, riccati.assembly);
    const auto& P = riccati.P[s];
    const auto& Pm = riccati.P_mid[s];
    auto at_node = [&](const std::vector<Mat>& pts, const std::vector<Mat>& mid, int k, int node) -> const Mat& {
      return node == 0 ? pts[k + 1] : node == 1 ? mid[k] : pts[k];
    };
    vc.log_eta[s] = accumulate(
        [&](int k, int node) {
          const Mat& C = sub.C.at(coefficient_time(grid, k));
          return lambda * noise * (at_node(P, Pm, k, node) * C * C.transpose()).trace();
        },
        0.0);

    // Relative tracking per class at each interval.
    const int classes = static_cast<int>(corr.xi[s].size());
    std::vector<int> representative(static_cast<std::size_t>(classes), 0);
    for (int i = sub.n - 1; i >= 0; --i) representative[corr.agent_class[s][i]] = i;
    std::vector<std::vector<Vec>> all_dr;
    for (int k = 0; k <= K; ++k) all_dr.push_back(relative_tracking(model, s, coefficient_time(grid, k), use_beta));
    vc.h[s].resize(static_cast<std::size_t>(classes));
    for (int c = 0; c < classes; ++c) {
      const int i = representative[c];
      std::vector<Vec> dr;
      for (int k = 0; k <= K; ++k) dr.push_back(all_dr[k][i]);
      const auto& xi = corr.xi[s][c];
      const auto& xim = corr.xi_mid[s][c];
      const Mat QT = sub.Q.at(model.horizon);
      vc.h[s][c] = accumulate(
          [&](int k, int node) {
            const auto co = local_coefficients(model, s, coefficient_time(grid, k), lambda, riccati.assembly);
            const Vec& x = node == 0 ? xi[k + 1] : node == 1 ? xim[k] : xi[k];
            return dr[k].dot(co.Q * dr[k]) - x.dot(co.S * x);
          },
          dr[K].dot(QT * dr[K]));
    }
  }

  std::vector<PopulationMatrices> pms;
  std::vector<Vec> rbar;
  for (int k = 0; k <= K; ++k) {
    const double t = coefficient_time(grid, k);
    pms.push_back(assemble_population_matrices(model, t, riccati.assembly));
    rbar.push_back(deep_tracking(model, t));
  }
  vc.log_eta_bar = accumulate(
      [&](int k, int node) {
        const Mat& P = node == 0 ? riccati.Pbar[k + 1] : node == 1 ? riccati.Pbar_mid[k] : riccati.Pbar[k];
        return lambda * (P * pms[k].Sigma).trace();
      },
      0.0);
  vc.h_bar = accumulate(
      [&](int k, int node) {
        const auto co = global_coefficients(pms[k], lambda);
        const Vec& x = node == 0 ? corr.xi_bar[k + 1] : node == 1 ? corr.xi_bar_mid[k] : corr.xi_bar[k];
        return rbar[k].dot(pms[k].Q_track * rbar[k]) - x.dot(co.S * x);
      },
      rbar[K].dot(pms[K].Q_track * rbar[K]));

  // Optimal cost from the deterministic initial state.
  const Layout lay(model);
  Vec xbar0 = Vec::Zero(lay.deep_x_dim());
  double local = 0.0;
  for (int s = 0; s < S; ++s) {
    const auto& sub = model.subs[s];
    const auto g = gauge_decompose(sub.init.mean, sub.alpha, mixing_weights(sub, use_beta));
    xbar0.segment(lay.deep_x(s), sub.f * sub.dx) = g.deep;
    double sum = 0.0;
    for (int i = 0; i < sub.n; ++i) {
      const Vec& dx = g.delta[i];
      const int c = corr.agent_class[s][i];
      sum += dx.dot(riccati.P[s][0] * dx) + 2.0 * corr.xi[s][c][0].dot(dx) + vc.h[s][c][0];
    }
    local += sub.mu / sub.n * sum + (sub.n - sub.f) * vc.log_eta[s][0] / lambda;
  }
  vc.value = xbar0.dot(riccati.Pbar[0] * xbar0) + 2.0 * corr.xi_bar[0].dot(xbar0) + vc.h_bar[0] +
             vc.log_eta_bar[0] / lambda + local;
  return vc;
}

// ---------------------------------------------------------------------------
// Infinite horizon

namespace {

// PBH rank test: rank [A - z I, B] = n for every eigenvalue z with Re z >= 0.
bool pbh_ok(const Mat& A, const Mat& B, bool columns) {
  Eigen::EigenSolver<Mat> es(A, false);
  const auto n = A.rows();
  for (Eigen::Index e = 0; e < n; ++e) {
    const std::complex<double> z = es.eigenvalues()(e);
    if (z.real() < -1e-12) continue;
    Eigen::MatrixXcd M;
    const Eigen::MatrixXcd shifted = A.cast<std::complex<double>>() - z * Eigen::MatrixXcd::Identity(n, n);
    if (columns) {
      M.resize(n, n + B.cols());
      M << shifted, B.cast<std::complex<double>>();
    } else {
      M.resize(n + B.rows(), n);
      M << shifted, B.cast<std::complex<double>>();
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
    const auto& sv = svd.singularValues();
    const double tol = 1e-9 * std::max(1.0, sv(0));
    if ((sv.array() > tol).count() < n) return false;
  }
  return true;
}

Mat psd_sqrt(const Mat& Q) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (Q + Q.transpose()));
  const Vec d = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

Mat iterate_to_stationary(const RiccatiCoefficients& c, const Mat& terminal, const AlgebraicOptions& opt,
                          const std::string& label, long* steps) {
  Mat P = terminal;
  for (long n = 0; n < opt.max_steps; ++n) {
    if (riccati_rhs_norm(c, P) < opt.tol) {
      *steps = std::max(*steps, n);
      return P;
    }
    P = riccati_rk4_step(c, P, opt.step);
    const double norm = P.cwiseAbs().maxCoeff();
    if (!std::isfinite(norm) || norm > 1e12) {
      throw DomainError(label + " diverges; the risk condition or stabilizability fails");
    }
  }
  throw DomainError(label + " did not reach a stationary point within the step cap");
}

}  // namespace

AlgebraicSolution solve_algebraic(const TeamModel& model, const AlgebraicOptions& options) {
  if (!model.is_time_invariant()) throw DomainError("the stationary solution needs a time-invariant model");
  const double lambda = model.risk_factor;
  const double t = 0.0;
  AlgebraicSolution out;
  const Layout lay(model);
  Mat block_theta = Mat::Zero(lay.deep_u_dim(), lay.deep_x_dim());
  for (int s = 0; s < model.num_subs(); ++s) {
    const auto& sub = model.subs[s];
    const auto c = local_coefficients(model, s, t, lambda, options.assembly);
    if (!pbh_ok(c.A, sub.B.at(t), true)) out.warnings.push_back(sub_label("(A, B) not stabilizable", s));
    if (!pbh_ok(c.A, psd_sqrt(c.Q), false)) out.warnings.push_back(sub_label("(A, Q^1/2) not detectable", s));
    out.P.push_back(iterate_to_stationary(c, sub.Q.at(t), options, sub_label("local Riccati", s), &out.steps));
    out.theta.push_back(-solve_spd(sub.R.at(t), sub.B.at(t).transpose() * out.P.back(), "R(s)"));
    for (int j = 0; j < sub.f; ++j) {
      block_theta.block(lay.deep_u(s, j), lay.deep_x(s, j), sub.du, sub.dx) = out.theta.back();
    }
  }
  const auto pm = assemble_population_matrices(model, t, options.assembly);
  const auto c = global_coefficients(pm, lambda);
  if (!pbh_ok(pm.A, pm.B, true)) out.warnings.emplace_back("(Abar, Bbar) not stabilizable");
  if (!pbh_ok(pm.A, psd_sqrt(pm.Q), false)) out.warnings.emplace_back("(Abar, Qbar^1/2) not detectable");
  out.Pbar = iterate_to_stationary(c, pm.Q, options, "global Riccati", &out.steps);
  out.theta_bar = -solve_spd(pm.R, pm.B.transpose() * out.Pbar, "Rbar");

  const Mat closed = pm.A + pm.B * block_theta;
  Eigen::EigenSolver<Mat> es(closed, false);
  out.spectral_abscissa = es.eigenvalues().real().maxCoeff();
  out.hurwitz = out.spectral_abscissa < 0.0;
  return out;
}

}  // namespace deeplq
