#include "cfas/estimators.hpp"

#include <algorithm>
#include <cmath>

#include "cfas/errors.hpp"

namespace cfas::estimators {

namespace {

constexpr double kZ95 = 1.959963984540054;

double interpolate_crossing(double t0, double step, double y0, double y1,
                            double threshold) {
  return t0 + step * (threshold - y0) / (y1 - y0);
}

}  // namespace

CrossingStats count_crossings(const sirproc::SirTrace& trace,
                              double threshold) {
  detail::require(std::isfinite(threshold) && threshold > 0.0,
                  "count_crossings: threshold must be positive");
  const auto n = trace.sir.size();
  detail::require(n >= 2, "count_crossings: trace too short");
  const double step = trace.grid.step();

  CrossingStats stats;
  bool below = trace.sir[0] <= threshold;
  bool excursion_from_boundary = below;
  double excursion_start = 0.0;
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    const bool next_below = trace.sir[k + 1] <= threshold;
    if (below == next_below) {
      below = next_below;
      continue;
    }
    const double where =
        interpolate_crossing(trace.grid.position(static_cast<std::size_t>(k)),
                             step, trace.sir[k], trace.sir[k + 1], threshold);
    if (below) {
      // Leaving the fade.
      ++stats.upcrossings;
      const double length = where - excursion_start;
      stats.below_length_m += length;
      if (excursion_from_boundary)
        stats.boundary_excursions.push_back(length);
      else
        stats.interior_excursions.push_back(length);
    } else {
      ++stats.downcrossings;
      excursion_start = where;
      excursion_from_boundary = false;
    }
    below = next_below;
  }
  if (below) {
    const double length = trace.grid.span() - excursion_start;
    stats.below_length_m += length;
    stats.boundary_excursions.push_back(length);
  }
  return stats;
}

double RateAccumulator::mean() const {
  detail::require(count > 0, "rate accumulator is empty");
  return sum / static_cast<double>(count);
}

double RateAccumulator::std_error() const {
  if (count < 2) return 0.0;
  const double n = static_cast<double>(count);
  const double var = std::max(0.0, (sum_sq - sum * sum / n) / (n - 1.0));
  return std::sqrt(var / n);
}

void RatioAccumulator::merge(const RatioAccumulator& other) {
  count += other.count;
  sum_num += other.sum_num;
  sum_den += other.sum_den;
  sum_num_sq += other.sum_num_sq;
  sum_den_sq += other.sum_den_sq;
  sum_cross += other.sum_cross;
}

EstimateWithCI rate_estimate(const RateAccumulator& acc, double scale,
                             std::size_t events) {
  const double value = acc.mean() * scale;
  const double half = kZ95 * acc.std_error() * scale;
  return {value, value - half, value + half, events};
}

EstimateWithCI ratio_estimate(const RatioAccumulator& acc,
                              std::size_t events) {
  detail::require(acc.count > 0, "ratio accumulator is empty");
  if (acc.sum_den <= 0.0)
    throw no_events("ratio estimate: no denominator events observed");
  const double n = static_cast<double>(acc.count);
  const double mean_num = acc.sum_num / n;
  const double mean_den = acc.sum_den / n;
  const double ratio = acc.sum_num / acc.sum_den;
  if (acc.count < 2) return {ratio, ratio, ratio, events};

  const double var_num =
      std::max(0.0, (acc.sum_num_sq - n * mean_num * mean_num) / (n - 1.0));
  const double var_den =
      std::max(0.0, (acc.sum_den_sq - n * mean_den * mean_den) / (n - 1.0));
  const double cov =
      (acc.sum_cross - n * mean_num * mean_den) / (n - 1.0);
  const double var_ratio =
      std::max(0.0, var_num - 2.0 * ratio * cov + ratio * ratio * var_den) /
      (n * mean_den * mean_den);
  const double half = kZ95 * std::sqrt(var_ratio);
  return {ratio, ratio - half, ratio + half, events};
}

EstimateWithCI wilson_interval(std::size_t successes, std::size_t trials) {
  detail::require(trials > 0, "wilson_interval: no trials");
  detail::require(successes <= trials,
                  "wilson_interval: successes exceed trials");
  const double k = static_cast<double>(successes);
  const double n = static_cast<double>(trials);
  const double z2 = kZ95 * kZ95;
  const double center = (k + z2 / 2.0) / (n + z2);
  const double half = kZ95 / (n + z2) *
                      std::sqrt(k * (n - k) / n + z2 / 4.0);
  // Roundoff can push the bounds a few ulp past the point estimate at the
  // extremes (k = 0 or k = n); the interval must always contain it.
  const double phat = k / n;
  const double lo = std::min(phat, std::max(0.0, center - half));
  const double hi = std::max(phat, std::min(1.0, center + half));
  return {phat, lo, hi, successes};
}

EstimateWithCI empirical_lcr(std::span<const sirproc::SirTrace> traces,
                             double threshold) {
  detail::require(!traces.empty(), "empirical_lcr: no traces");
  const double span = traces.front().grid.span();
  RateAccumulator acc;
  std::size_t events = 0;
  for (const sirproc::SirTrace& trace : traces) {
    detail::require(trace.grid == traces.front().grid,
                    "empirical_lcr: traces must share one grid");
    const CrossingStats stats = count_crossings(trace, threshold);
    acc.add(static_cast<double>(stats.upcrossings));
    events += stats.upcrossings;
  }
  return rate_estimate(acc, 1.0 / span, events);
}

EstimateWithCI empirical_afd(std::span<const sirproc::SirTrace> traces,
                             double threshold) {
  detail::require(!traces.empty(), "empirical_afd: no traces");
  RatioAccumulator acc;
  std::size_t events = 0;
  for (const sirproc::SirTrace& trace : traces) {
    detail::require(trace.grid == traces.front().grid,
                    "empirical_afd: traces must share one grid");
    const CrossingStats stats = count_crossings(trace, threshold);
    acc.add(stats.below_length_m, static_cast<double>(stats.downcrossings));
    events += stats.downcrossings;
  }
  if (events == 0)
    throw no_events(
        "empirical_afd: no downcrossings at this threshold; widen the "
        "aperture or raise the realization count");
  return ratio_estimate(acc, events);
}

std::vector<EstimateWithCI> empirical_cdf(
    std::span<const double> samples, std::span<const double> thresholds) {
  detail::require(!samples.empty(), "empirical_cdf: no samples");
  for (std::size_t i = 1; i < thresholds.size(); ++i)
    detail::require(thresholds[i] > thresholds[i - 1],
                    "empirical_cdf: thresholds must be strictly increasing");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());

  std::vector<EstimateWithCI> out;
  out.reserve(thresholds.size());
  for (double threshold : thresholds) {
    const auto below = static_cast<std::size_t>(
        std::upper_bound(sorted.begin(), sorted.end(), threshold) -
        sorted.begin());
    EstimateWithCI row = wilson_interval(below, sorted.size());
    row.n_events = std::min(below, sorted.size() - below);
    out.push_back(row);
  }
  return out;
}

double derivative_variance(std::span<const channel::ComplexField> fields,
                           double lambda_m) {
  detail::require(std::isfinite(lambda_m) && lambda_m > 0.0,
                  "derivative_variance: lambda must be positive");
  detail::require(fields.size() >= 1000,
                  "derivative_variance: need at least 10^3 fields");
  const channel::SpatialGrid& grid = fields.front().grid;
  detail::require(grid.size() >= 2, "derivative_variance: grid too short");
  detail::require(grid.step() <= lambda_m / 100.0 * (1.0 + 1e-12),
                  "derivative_variance: grid step must be <= lambda/100");

  double acc = 0.0;
  for (const channel::ComplexField& field : fields) {
    detail::require(field.grid == grid,
                    "derivative_variance: fields must share one grid");
    detail::require(field.variance > 0.0,
                    "derivative_variance: field variance must be positive");
    double field_acc = 0.0;
    for (Eigen::Index k = 0; k + 1 < field.samples.size(); ++k) {
      const double diff =
          std::abs(field.samples[k + 1]) - std::abs(field.samples[k]);
      field_acc += diff * diff;
    }
    acc += field_acc / field.variance;
  }
  const double pairs = static_cast<double>(fields.size()) *
                       static_cast<double>(grid.size() - 1);
  return acc / (pairs * grid.step() * grid.step());
}

}  // namespace cfas::estimators
