#include "deeplq/riccati_integrator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace deeplq {

TimeGrid TimeGrid::uniform(double horizon, int steps) {
  if (!(horizon > 0.0) || steps < 1) throw InputError("time grid needs a positive horizon and steps");
  TimeGrid g;
  g.t.resize(static_cast<std::size_t>(steps) + 1);
  for (int k = 0; k <= steps; ++k) g.t[k] = horizon * k / steps;
  g.t.back() = horizon;
  return g;
}

TimeGrid TimeGrid::with_breakpoints(double horizon, int steps, const std::vector<double>& breakpoints) {
  TimeGrid g = uniform(horizon, steps);
  const double tol = 1e-9 * horizon;
  std::vector<double> extra;
  for (double b : breakpoints) {
    if (b <= tol || b >= horizon - tol) continue;
    const auto it = std::lower_bound(g.t.begin(), g.t.end(), b);
    const bool near = (it != g.t.end() && *it - b < tol) || (it != g.t.begin() && b - *(it - 1) < tol);
    if (!near) extra.push_back(b);
  }
  g.t.insert(g.t.end(), extra.begin(), extra.end());
  std::sort(g.t.begin(), g.t.end());
  return g;
}

int TimeGrid::index_at(double time) const {
  const auto it = std::upper_bound(t.begin(), t.end(), time + 1e-9 * std::max(1.0, horizon()));
  int k = static_cast<int>(std::distance(t.begin(), it)) - 1;
  return std::clamp(k, 0, static_cast<int>(t.size()) - 1);
}

namespace {

Mat riccati_rhs(const RiccatiCoefficients& c, const Mat& P) {
  // Backward-time derivative: dP/d(T - t).
  Mat out = c.Q;
  out.noalias() += P * c.A;
  out.noalias() += c.A.transpose() * P;
  out.noalias() -= P * c.S * P;
  return out;
}

}  // namespace

double riccati_rhs_norm(const RiccatiCoefficients& c, const Mat& P) {
  return riccati_rhs(c, P).cwiseAbs().maxCoeff();
}

Mat riccati_rk4_step(const RiccatiCoefficients& c, const Mat& P, double h) {
  const Mat k1 = riccati_rhs(c, P);
  const Mat k2 = riccati_rhs(c, P + 0.5 * h * k1);
  const Mat k3 = riccati_rhs(c, P + 0.5 * h * k2);
  const Mat k4 = riccati_rhs(c, P + h * k3);
  const Mat out = P + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  return 0.5 * (out + out.transpose());
}

RiccatiPath integrate_riccati_backward(
    const TimeGrid& grid, const std::function<RiccatiCoefficients(int)>& coefficients,
    const Mat& terminal, double blowup, const std::string& label) {
  const int K = grid.intervals();
  RiccatiPath path;
  path.P.resize(static_cast<std::size_t>(K) + 1);
  path.P_mid.resize(static_cast<std::size_t>(K));
  path.P[K] = 0.5 * (terminal + terminal.transpose());
  for (int k = K - 1; k >= 0; --k) {
    const RiccatiCoefficients c = coefficients(k);
    const double h = grid.step(k);
    const Mat& P1 = path.P[k + 1];
    Mat P0 = riccati_rk4_step(c, P1, h);
    const double norm = P0.cwiseAbs().maxCoeff();
    if (!std::isfinite(norm) || norm > blowup) {
      std::ostringstream os;
      os << label << " flow escapes to infinity near t = " << grid.t[k]
         << "; the risk condition B R^-1 B' - 2 lambda Sigma > 0 is violated or the horizon is too long";
      throw DomainError(os.str());
    }
    // Forward-time slopes are the negated backward ones.
    const Mat d0 = -riccati_rhs(c, P0);
    const Mat d1 = -riccati_rhs(c, P1);
    path.P_mid[k] = 0.5 * (P0 + P1) + (h / 8.0) * (d0 - d1);
    path.P_mid[k] = 0.5 * (path.P_mid[k] + path.P_mid[k].transpose()).eval();
    path.P[k] = std::move(P0);
  }
  return path;
}

LinearPath integrate_linear_backward(const TimeGrid& grid,
                                     const std::function<LinearNodes(int)>& nodes,
                                     const Mat& terminal) {
  const int K = grid.intervals();
  LinearPath path;
  path.Y.resize(static_cast<std::size_t>(K) + 1);
  path.Y_mid.resize(static_cast<std::size_t>(K));
  path.Y[K] = terminal;
  for (int k = K - 1; k >= 0; --k) {
    const LinearNodes n = nodes(k);
    const double h = grid.step(k);
    const Mat& Y1 = path.Y[k + 1];
    auto rhs = [&](int node, const Mat& y) -> Mat {
      Mat out = n.G[node];
      out.noalias() += n.F[node] * y;
      return out;
    };
    const Mat k1 = rhs(0, Y1);
    const Mat k2 = rhs(1, Y1 + 0.5 * h * k1);
    const Mat k3 = rhs(1, Y1 + 0.5 * h * k2);
    const Mat k4 = rhs(2, Y1 + h * k3);
    Mat Y0 = Y1 + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const Mat d0 = -rhs(2, Y0);
    const Mat d1 = -k1;
    path.Y_mid[k] = 0.5 * (Y0 + Y1) + (h / 8.0) * (d0 - d1);
    path.Y[k] = std::move(Y0);
  }
  return path;
}

}  // namespace deeplq
