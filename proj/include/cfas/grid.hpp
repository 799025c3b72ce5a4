#pragma once

#include <cmath>
#include <cstddef>

#include "cfas/errors.hpp"

namespace cfas::channel {

/// Uniform sampling of a linear aperture [0, length_m]. Point i sits at
/// i * step_m; the last point is the largest multiple of step_m that fits,
/// so span() may fall short of length_m when the step does not divide it.
/// A step larger than the length leaves the degenerate single-point grid.
class SpatialGrid {
 public:
  SpatialGrid(double length_m, double step_m)
      : length_m_(length_m), step_m_(step_m) {
    detail::require(std::isfinite(length_m) && length_m > 0.0,
                    "SpatialGrid: length must be positive");
    detail::require(std::isfinite(step_m) && step_m > 0.0,
                    "SpatialGrid: step must be positive");
    // Tolerate roundoff in length/step before flooring.
    size_ = static_cast<std::size_t>(
                std::floor(length_m / step_m * (1.0 + 1e-12))) +
            1;
  }

  double length() const { return length_m_; }
  double step() const { return step_m_; }
  std::size_t size() const { return size_; }
  double position(std::size_t i) const { return static_cast<double>(i) * step_m_; }
  /// Distance between first and last grid point.
  double span() const { return static_cast<double>(size_ - 1) * step_m_; }

  friend bool operator==(const SpatialGrid& a, const SpatialGrid& b) {
    return a.size_ == b.size_ && a.step_m_ == b.step_m_;
  }

 private:
  double length_m_;
  double step_m_;
  std::size_t size_;
};

}  // namespace cfas::channel
