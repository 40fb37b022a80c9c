#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace deeplq {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// Malformed or dimensionally inconsistent input (model files, arguments).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A well-formed request the theory cannot serve: violated assumptions,
/// finite escape of a Riccati flow, refused strategy variants.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Matrix-valued function of time, piecewise constant on a breakpoint grid.
///
/// The value on [t_grid[k], t_grid[k+1]) is values[k]; the last value extends
/// to +inf and the first one also covers times before t_grid[0].
class TimeVarying {
 public:
  TimeVarying() = default;
  TimeVarying(Mat constant);  // NOLINT(google-explicit-constructor)
  TimeVarying(std::vector<double> t_grid, std::vector<Mat> values);

  static TimeVarying scalar(double v);
  static TimeVarying zeros(Eigen::Index rows, Eigen::Index cols);

  const Mat& at(double t) const;

  bool empty() const { return values_.empty(); }
  bool is_constant() const { return values_.size() <= 1; }
  Eigen::Index rows() const { return empty() ? 0 : values_.front().rows(); }
  Eigen::Index cols() const { return empty() ? 0 : values_.front().cols(); }

  const std::vector<double>& breakpoints() const { return t_grid_; }
  const std::vector<Mat>& values() const { return values_; }

  /// True when every value is exactly zero.
  bool is_zero() const;

 private:
  std::vector<double> t_grid_;
  std::vector<Mat> values_;
};

}  // namespace deeplq
