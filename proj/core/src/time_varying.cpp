#include "deeplq/types.hpp"

#include <algorithm>

namespace deeplq {

TimeVarying::TimeVarying(Mat constant) : t_grid_{0.0}, values_{std::move(constant)} {}

TimeVarying::TimeVarying(std::vector<double> t_grid, std::vector<Mat> values)
    : t_grid_(std::move(t_grid)), values_(std::move(values)) {
  if (t_grid_.size() != values_.size() || values_.empty()) {
    throw InputError("time-varying matrix: t_grid and values must be nonempty and of equal length");
  }
  if (!std::is_sorted(t_grid_.begin(), t_grid_.end()) ||
      std::adjacent_find(t_grid_.begin(), t_grid_.end()) != t_grid_.end()) {
    throw InputError("time-varying matrix: t_grid must be strictly increasing");
  }
  for (const auto& v : values_) {
    if (v.rows() != values_.front().rows() || v.cols() != values_.front().cols()) {
      throw InputError("time-varying matrix: all values must share one shape");
    }
  }
}

TimeVarying TimeVarying::scalar(double v) { return TimeVarying(Mat::Constant(1, 1, v)); }

TimeVarying TimeVarying::zeros(Eigen::Index rows, Eigen::Index cols) {
  return TimeVarying(Mat::Zero(rows, cols));
}

const Mat& TimeVarying::at(double t) const {
  if (values_.size() == 1) return values_.front();
  // Grid-aligned lookups arrive with rounding noise; snap within 1e-9.
  const auto it = std::upper_bound(t_grid_.begin(), t_grid_.end(), t + 1e-9);
  if (it == t_grid_.begin()) return values_.front();
  return values_[static_cast<std::size_t>(std::distance(t_grid_.begin(), it) - 1)];
}

bool TimeVarying::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](const Mat& m) { return m.isZero(0.0); });
}

}  // namespace deeplq
