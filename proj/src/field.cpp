#include <cmath>
#include <complex>

#include "cfas/channel.hpp"
#include "cfas/errors.hpp"
#include "cfas/rng.hpp"

namespace cfas::channel {

Eigen::MatrixXd gaussian_coefficients(std::size_t rows, std::size_t count,
                                      std::uint64_t seed,
                                      std::uint64_t first_stream) {
  Eigen::MatrixXd z(static_cast<Eigen::Index>(rows),
                    static_cast<Eigen::Index>(2 * count));
  for (std::size_t j = 0; j < count; ++j) {
    rng::NormalStream stream(seed, first_stream + j);
    const auto re = static_cast<Eigen::Index>(2 * j);
    for (Eigen::Index i = 0; i < z.rows(); ++i) z(i, re) = stream();
    for (Eigen::Index i = 0; i < z.rows(); ++i) z(i, re + 1) = stream();
  }
  return z;
}

Eigen::MatrixXcd sample_field_matrix(const CovarianceFactor& factor,
                                     double variance, std::size_t count,
                                     std::uint64_t seed,
                                     std::uint64_t first_stream) {
  detail::require(std::isfinite(variance) && variance > 0.0,
                  "sample_field: variance must be positive");
  detail::require(count > 0, "sample_field: count must be positive");
  const double scale = std::sqrt(variance / 2.0);
  Eigen::MatrixXcd out(factor.factor.rows(), static_cast<Eigen::Index>(count));
  // One fixed-shape product per realization: gemm blocking depends on the
  // operand shapes, so a wide batched product would not be bit-identical to
  // drawing the same realization alone.
  for (std::size_t j = 0; j < count; ++j) {
    const Eigen::MatrixXd z =
        gaussian_coefficients(factor.rank(), 1, seed, first_stream + j);
    const Eigen::MatrixXd x = factor.factor * z;
    out.col(static_cast<Eigen::Index>(j)) =
        scale * (x.col(0) + std::complex<double>(0.0, 1.0) * x.col(1));
  }
  return out;
}

std::vector<ComplexField> sample_field(const CovarianceFactor& factor,
                                       double variance, std::size_t count,
                                       std::uint64_t seed,
                                       std::uint64_t first_stream) {
  const Eigen::MatrixXcd x =
      sample_field_matrix(factor, variance, count, seed, first_stream);
  std::vector<ComplexField> fields;
  fields.reserve(count);
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    fields.push_back({factor.grid, x.col(j), variance});
  return fields;
}

double empirical_correlation(std::span<const ComplexField> fields,
                             std::size_t lag_index) {
  detail::require(fields.size() >= 2,
                  "empirical_correlation: need at least 2 fields");
  const SpatialGrid& grid = fields.front().grid;
  const auto n = static_cast<std::size_t>(fields.front().samples.size());
  detail::require(lag_index < n, "empirical_correlation: lag exceeds grid");
  const auto pairs = static_cast<Eigen::Index>(n - lag_index);
  double acc = 0.0;
  for (const ComplexField& f : fields) {
    detail::require(
        f.grid == grid &&
            static_cast<std::size_t>(f.samples.size()) == n,
        "empirical_correlation: fields must share one grid");
    detail::require(f.variance > 0.0,
                    "empirical_correlation: field variance must be positive");
    const std::complex<double> dot =
        f.samples.head(pairs).dot(f.samples.tail(pairs));
    acc += dot.real() / f.variance;
  }
  return acc / (static_cast<double>(fields.size()) *
                static_cast<double>(pairs));
}

}  // namespace cfas::channel
