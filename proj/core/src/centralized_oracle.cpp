#include "deeplq/centralized_oracle.hpp"

#include <cmath>

#include "deeplq/deep_riccati.hpp"

namespace deeplq {

namespace {

double coefficient_time(const TimeGrid& grid, int k) {
  if (k >= grid.intervals()) return grid.horizon();
  return 0.5 * (grid.t[k] + grid.t[k + 1]);
}

struct JointCoefficients {
  CentralizedSystem sys;
  CentralizedTracking track;
  Mat Rinv_Bt;
  Mat S;
};

}  // namespace

double CentralizedSolution::value(const Vec& joint_x0) const {
  return joint_x0.dot(P[0] * joint_x0) + 2.0 * g[0].dot(joint_x0) + c[0];
}

CentralizedSolution centralized_oracle_gains(const TeamModel& model, const CentralizedOracleOptions& options) {
  CentralizedSolution sol;
  sol.grid = make_grid(model, options.steps);
  const int K = sol.grid.intervals();
  const double lambda = model.risk_factor;
  CentralizedOptions co{options.max_joint_dim, options.use_beta};

  std::vector<JointCoefficients> jc;
  jc.reserve(static_cast<std::size_t>(K) + 1);
  for (int k = 0; k <= K; ++k) {
    const double t = coefficient_time(sol.grid, k);
    JointCoefficients c;
    c.sys = assemble_centralized(model, t, co);
    c.track = centralized_tracking(model, t, options.use_beta);
    Eigen::LLT<Mat> llt(c.sys.R);
    if (llt.info() != Eigen::Success) throw DomainError("centralized R is not positive definite");
    c.Rinv_Bt = llt.solve(c.sys.B.transpose());
    c.S = c.sys.B * c.Rinv_Bt - 2.0 * lambda * c.sys.Sigma;
    jc.push_back(std::move(c));
  }

  auto path = integrate_riccati_backward(
      sol.grid, [&](int k) { return RiccatiCoefficients{jc[k].sys.A, jc[k].sys.Q, jc[k].S}; }, jc[K].sys.Q,
      options.blowup, "centralized Riccati");
  sol.P = std::move(path.P);

  // -dg/dt = (A - S P)' g + q, g(T) = q(T).
  const auto gpath = integrate_linear_backward(
      sol.grid,
      [&](int k) {
        LinearNodes n;
        const Mat* Ps[3] = {&sol.P[k + 1], &path.P_mid[k], &sol.P[k]};
        for (int node = 0; node < 3; ++node) {
          n.F[node] = (jc[k].sys.A - jc[k].S * *Ps[node]).transpose();
          n.G[node] = jc[k].track.q;
        }
        return n;
      },
      jc[K].track.q);

  // -dc/dt = c_track - g' S g + tr(P Sigma), c(T) = c_track(T).
  sol.c.assign(static_cast<std::size_t>(K) + 1, 0.0);
  sol.c[K] = jc[K].track.c;
  for (int k = K - 1; k >= 0; --k) {
    auto f = [&](const Mat& P, const Vec& g) {
      return jc[k].track.c - g.dot(jc[k].S * g) + (P * jc[k].sys.Sigma).trace();
    };
    const Vec g1 = gpath.Y[k + 1].col(0);
    const Vec gm = gpath.Y_mid[k].col(0);
    const Vec g0 = gpath.Y[k].col(0);
    sol.c[k] = sol.c[k + 1] + sol.grid.step(k) / 6.0 *
                                  (f(sol.P[k], g0) + 4.0 * f(path.P_mid[k], gm) + f(sol.P[k + 1], g1));
  }

  for (int k = 0; k <= K; ++k) {
    sol.g.push_back(gpath.Y[k].col(0));
    sol.K.push_back(-jc[k].Rinv_Bt * sol.P[k]);
    sol.k.push_back(-jc[k].Rinv_Bt * sol.g.back());
  }
  return sol;
}

OracleComparison compare_with_oracle(const TeamModel& model, const GainSchedule& gains,
                                     const CentralizedSolution& oracle) {
  if (oracle.grid.t.size() != gains.riccati.grid.t.size()) throw InputError("oracle and DSS grids differ");
  OracleComparison out;
  for (int k = 0; k <= oracle.grid.intervals(); ++k) {
    const Mat Kd = composed_dss_gain(model, gains, k);
    const double scale = oracle.K[k].norm();
    const double dev = (Kd - oracle.K[k]).norm();
    out.max_rel_gain = std::max(out.max_rel_gain, scale > 0.0 ? dev / scale : dev);
    const Vec kd = composed_dss_offset(model, gains, k);
    const double oscale = oracle.k[k].norm();
    const double odev = (kd - oracle.k[k]).norm();
    out.max_rel_offset = std::max(out.max_rel_offset, oscale > 1e-12 ? odev / oscale : odev);
  }
  return out;
}

Vec joint_initial_mean(const TeamModel& model) {
  const Layout lay(model);
  Vec x = Vec::Zero(lay.joint_x_dim());
  for (int s = 0; s < model.num_subs(); ++s) {
    const auto& sub = model.subs[s];
    for (int i = 0; i < sub.n; ++i) x.segment(lay.joint_x(s, i), sub.dx) = sub.init.mean[i];
  }
  return x;
}

}  // namespace deeplq
