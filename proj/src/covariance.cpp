#include <algorithm>
#include <cmath>
#include <string>

#include "cfas/channel.hpp"
#include "cfas/errors.hpp"
#include "cfas/rng.hpp"

namespace cfas::channel {

namespace {

struct EigenPairs {
  Eigen::VectorXd values;   // descending
  Eigen::MatrixXd vectors;  // columns match values
};

Eigen::MatrixXd toeplitz_from_row(const Eigen::VectorXd& row) {
  const auto n = row.size();
  Eigen::MatrixXd c(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      c(i, j) = row[i - j];
      c(j, i) = row[i - j];
    }
  }
  return c;
}

EigenPairs descending(const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>& s) {
  EigenPairs out;
  out.values = s.eigenvalues().reverse();
  out.vectors = s.eigenvectors().rowwise().reverse();
  return out;
}

EigenPairs dense_eigh(const Eigen::MatrixXd& c) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(c);
  if (solver.info() != Eigen::Success)
    throw model_not_psd("build_covariance: eigendecomposition failed");
  return descending(solver);
}

Eigen::MatrixXd thin_q(const Eigen::MatrixXd& y) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
  return qr.householderQ() * Eigen::MatrixXd::Identity(y.rows(), y.cols());
}

/// Randomized subspace iteration (range finder with two power steps).
/// The probe matrix is seeded, so the result is reproducible. Grows the
/// subspace until the residual spectrum is below the truncation level;
/// falls back to the dense path if that would need more than n/2 columns.
EigenPairs subspace_eigh(const Eigen::MatrixXd& c,
                         const CovarianceOptions& options) {
  const auto n = c.rows();
  auto width = static_cast<Eigen::Index>(
      std::min<std::size_t>(options.initial_subspace, n));
  for (int attempt = 0;; ++attempt) {
    rng::NormalStream probe(options.probe_seed,
                            static_cast<std::uint64_t>(attempt));
    Eigen::MatrixXd gauss(n, width);
    for (Eigen::Index j = 0; j < width; ++j)
      for (Eigen::Index i = 0; i < n; ++i) gauss(i, j) = probe();

    Eigen::MatrixXd q = thin_q(c * gauss);
    q = thin_q(c * q);
    q = thin_q(c * q);
    Eigen::MatrixXd small = q.transpose() * (c * q);
    small = 0.5 * (small + small.transpose()).eval();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(small);
    if (solver.info() != Eigen::Success)
      throw model_not_psd("build_covariance: eigendecomposition failed");
    const Eigen::VectorXd mu = solver.eigenvalues();  // ascending
    const double mu_max = mu[width - 1];
    if (mu_max <= 0.0)
      throw model_not_psd("build_covariance: covariance has no positive part");

    // Captured when the smallest Ritz value has decayed to the truncation
    // level (or has gone negative, which the PSD check will judge).
    if (mu[0] <= options.truncation_rtol * mu_max || width == n) {
      EigenPairs out;
      out.values = mu.reverse();
      out.vectors = (q * solver.eigenvectors()).rowwise().reverse();
      return out;
    }
    width *= 2;
    if (width > n / 2) return dense_eigh(c);
  }
}

void validate_reconstruction(const Eigen::MatrixXd& c,
                             const Eigen::MatrixXd& factor, double tol) {
  const auto n = c.rows();
  const Eigen::Index probes[] = {0, n / 4, n / 2, (3 * n) / 4, n - 1};
  double worst = 0.0;
  for (Eigen::Index i : probes) {
    const Eigen::VectorXd row = factor * factor.row(i).transpose();
    worst = std::max(worst, (row - c.col(i)).cwiseAbs().maxCoeff());
  }
  if (worst > tol)
    throw model_not_psd(
        "build_covariance: factor validation failed, max row error " +
        std::to_string(worst));
}

}  // namespace

CovarianceFactor build_covariance(const CorrelationModel& model,
                                  const SpatialGrid& grid, double lambda_m,
                                  const CovarianceOptions& options) {
  detail::require(std::isfinite(lambda_m) && lambda_m > 0.0,
                  "build_covariance: lambda must be positive");
  const std::size_t n = grid.size();
  const std::size_t dense_bytes = n * n * sizeof(double);
  if (dense_bytes > options.memory_limit_bytes)
    throw resource_limit("build_covariance: grid of " + std::to_string(n) +
                         " points exceeds the memory budget");

  Eigen::VectorXd row(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i)
    row[static_cast<Eigen::Index>(i)] =
        correlation(model, grid.position(i), lambda_m);
  const Eigen::MatrixXd c = toeplitz_from_row(row);

  EigenPairs pairs = n <= options.dense_size_limit ? dense_eigh(c)
                                                   : subspace_eigh(c, options);

  const double lambda_max = pairs.values[0];
  if (!(lambda_max > 0.0))
    throw model_not_psd("build_covariance: covariance has no positive part");
  const double negativity_floor = -options.negativity_rtol * lambda_max;
  const double keep_floor = options.truncation_rtol * lambda_max;

  std::size_t clamped = 0;
  Eigen::Index kept = 0;
  for (Eigen::Index i = 0; i < pairs.values.size(); ++i) {
    const double value = pairs.values[i];
    if (value < negativity_floor)
      throw model_not_psd(
          "build_covariance: model is not positive semidefinite on this "
          "grid (eigenvalue " +
          std::to_string(value) + ")");
    if (value < 0.0) ++clamped;
    if (value > keep_floor) ++kept;
  }

  CovarianceFactor out{grid, Eigen::MatrixXd(), Eigen::VectorXd(), clamped};
  // (clamped eigenvalues are also below the truncation floor, so the
  // factor never carries their columns.)
  out.eigenvalues = pairs.values.head(kept);
  out.factor = pairs.vectors.leftCols(kept) *
               out.eigenvalues.cwiseSqrt().asDiagonal();
  // Eigenvector signs are arbitrary; pin each column so the entry of
  // largest magnitude is positive. Keeps factors reproducible across
  // solver versions.
  for (Eigen::Index j = 0; j < out.factor.cols(); ++j) {
    Eigen::Index peak = 0;
    out.factor.col(j).cwiseAbs().maxCoeff(&peak);
    if (out.factor(peak, j) < 0.0) out.factor.col(j) = -out.factor.col(j);
  }
  validate_reconstruction(c, out.factor, options.reconstruction_tol);
  return out;
}

}  // namespace cfas::channel
