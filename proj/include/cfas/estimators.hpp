#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cfas/channel.hpp"
#include "cfas/sirproc.hpp"

namespace cfas::estimators {

/// Threshold-crossing bookkeeping for one SIR trace. A sample equal to the
/// threshold counts as below it. Crossing locations are linearly
/// interpolated between samples, so excursion lengths are not multiples of
/// the grid step. Excursions cut off by the aperture ends are kept in the
/// below length and reported separately; they have no matching
/// downcrossing, which keeps |upcrossings - downcrossings| <= 1.
struct CrossingStats {
  std::size_t upcrossings = 0;
  std::size_t downcrossings = 0;
  double below_length_m = 0.0;
  std::vector<double> interior_excursions;
  std::vector<double> boundary_excursions;
};

CrossingStats count_crossings(const sirproc::SirTrace& trace,
                              double threshold);

struct EstimateWithCI {
  double value = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t n_events = 0;
};

/// Streaming mean/variance over per-realization values; mergeable so
/// parallel workers can accumulate into slots.
struct RateAccumulator {
  std::size_t count = 0;
  double sum = 0.0;
  double sum_sq = 0.0;

  void add(double x) {
    ++count;
    sum += x;
    sum_sq += x * x;
  }
  void merge(const RateAccumulator& other) {
    count += other.count;
    sum += other.sum;
    sum_sq += other.sum_sq;
  }
  double mean() const;
  double std_error() const;  // of the mean; 0 when count < 2
};

/// Streaming ratio-of-totals estimator with delta-method error.
struct RatioAccumulator {
  std::size_t count = 0;
  double sum_num = 0.0;
  double sum_den = 0.0;
  double sum_num_sq = 0.0;
  double sum_den_sq = 0.0;
  double sum_cross = 0.0;

  void add(double num, double den) {
    ++count;
    sum_num += num;
    sum_den += den;
    sum_num_sq += num * num;
    sum_den_sq += den * den;
    sum_cross += num * den;
  }
  void merge(const RatioAccumulator& other);
};

/// Normal-approximation interval on a per-trace mean, scaled by `scale`.
EstimateWithCI rate_estimate(const RateAccumulator& acc, double scale,
                             std::size_t events);

/// Ratio of totals with a delta-method interval. Throws no_events when the
/// denominator total is zero.
EstimateWithCI ratio_estimate(const RatioAccumulator& acc,
                              std::size_t events);

/// 95% Wilson score interval for a proportion; value is successes/trials
/// and n_events is the success count.
EstimateWithCI wilson_interval(std::size_t successes, std::size_t trials);

/// Upcrossing rate per meter at the threshold, averaged over traces, with
/// a normal-approximation CI over the per-trace counts.
EstimateWithCI empirical_lcr(std::span<const sirproc::SirTrace> traces,
                             double threshold);

/// Average below-threshold extent per downcrossing (total below length /
/// total downcrossings). Throws no_events when nothing ever crossed down;
/// widen the aperture or raise the realization count.
EstimateWithCI empirical_afd(std::span<const sirproc::SirTrace> traces,
                             double threshold);

/// Empirical CDF of the samples at each threshold (P(X <= s), ties count),
/// with Wilson intervals. Thresholds must be strictly increasing.
/// n_events is the count on the rarer side, the quantity that drives the
/// interval width.
std::vector<EstimateWithCI> empirical_cdf(std::span<const double> samples,
                                          std::span<const double> thresholds);

/// Variance of the spatial derivative of the normalized envelope
/// |x|/sqrt(variance), estimated by first differences. Converges to the
/// correlation curvature b. Requires at least 10^3 fields on a common
/// grid with step <= lambda/100.
double derivative_variance(std::span<const channel::ComplexField> fields,
                           double lambda_m);

}  // namespace cfas::estimators
