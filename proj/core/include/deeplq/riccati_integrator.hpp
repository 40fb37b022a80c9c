#pragma once

#include <functional>
#include <string>
#include <vector>

#include "deeplq/types.hpp"

namespace deeplq {

/// Increasing time points t_0 = 0 < ... < t_K = T.
struct TimeGrid {
  std::vector<double> t;

  static TimeGrid uniform(double horizon, int steps);
  /// Uniform grid with extra points inserted at the given breakpoints.
  static TimeGrid with_breakpoints(double horizon, int steps, const std::vector<double>& breakpoints);

  int intervals() const { return static_cast<int>(t.size()) - 1; }
  double step(int k) const { return t[k + 1] - t[k]; }
  double horizon() const { return t.back(); }
  /// Index k with t_k <= time < t_{k+1} (zero-order hold); clamps to the ends.
  int index_at(double time) const;
};

/// Constant coefficients of -dP/dt = Q + P A + A' P - P S P on one interval.
struct RiccatiCoefficients {
  Mat A, Q, S;
};

/// Solution of a backward Riccati flow on a grid. Values at interval
/// midpoints come from cubic Hermite interpolation with the exact slopes.
struct RiccatiPath {
  std::vector<Mat> P;      ///< at grid points
  std::vector<Mat> P_mid;  ///< one per interval
};

/// Classical RK4 backward from P(T) = terminal, symmetrizing every step.
/// Throws DomainError naming `label` when the norm exceeds `blowup`.
RiccatiPath integrate_riccati_backward(
    const TimeGrid& grid, const std::function<RiccatiCoefficients(int interval)>& coefficients,
    const Mat& terminal, double blowup = 1e12, const std::string& label = "Riccati");

/// Max-abs of the backward-time derivative Q + PA + A'P - PSP.
double riccati_rhs_norm(const RiccatiCoefficients& c, const Mat& P);

/// One symmetrized backward RK4 step of length h.
Mat riccati_rk4_step(const RiccatiCoefficients& c, const Mat& P, double h);

/// Linear backward flow -dY/dt = F(t) Y + G(t). F and G are sampled at the
/// three RK4 nodes of an interval: index 0 = t_{k+1}, 1 = midpoint, 2 = t_k.
struct LinearNodes {
  Mat F[3];
  Mat G[3];
};

struct LinearPath {
  std::vector<Mat> Y;      ///< at grid points
  std::vector<Mat> Y_mid;  ///< Hermite midpoint per interval
};

LinearPath integrate_linear_backward(const TimeGrid& grid,
                                     const std::function<LinearNodes(int interval)>& nodes,
                                     const Mat& terminal);

}  // namespace deeplq
