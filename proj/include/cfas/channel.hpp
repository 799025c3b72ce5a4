#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "cfas/correlation.hpp"
#include "cfas/grid.hpp"

namespace cfas::channel {

/// One realization of a zero-mean circularly symmetric Gaussian field
/// sampled on a spatial grid. variance is the per-sample power it was
/// drawn with, i.e. E|x_k|^2.
struct ComplexField {
  SpatialGrid grid;
  Eigen::VectorXcd samples;
  double variance = 1.0;
};

struct CovarianceOptions {
  /// Grids up to this size use a full dense eigendecomposition. Larger
  /// grids switch to a deterministic randomized subspace iteration, which
  /// exploits the low numerical rank of band-limited kernels.
  std::size_t dense_size_limit = 1500;
  /// Eigenvalues below truncation_rtol * lambda_max are dropped from the
  /// factor (this includes anything clamped to zero).
  double truncation_rtol = 1e-13;
  /// Eigenvalues in [-negativity_rtol * lambda_max, 0) are treated as
  /// roundoff and clamped; anything more negative rejects the model.
  double negativity_rtol = 1e-10;
  /// Max abs entrywise error allowed on sampled rows of F F^T vs C.
  double reconstruction_tol = 1e-8;
  /// Starting subspace width for the randomized path; doubled until the
  /// spectrum is captured.
  std::size_t initial_subspace = 192;
  /// Seed for the randomized range finder; fixed so factors are
  /// reproducible. Independent of user simulation seeds.
  std::uint64_t probe_seed = 0x0c0ffee5eedull;
  std::size_t memory_limit_bytes = std::size_t(3500) * 1024 * 1024;
};

/// Low-rank square root of the model covariance on a grid: F F^T
/// reproduces C = [rho(|i-j| step)] within reconstruction_tol. Columns are
/// eigenvectors scaled by sqrt(eigenvalue), eigenvalues descending.
struct CovarianceFactor {
  SpatialGrid grid;
  Eigen::MatrixXd factor;
  Eigen::VectorXd eigenvalues;
  /// Count of small negative eigenvalues clamped to zero.
  std::size_t clamped_eigenvalue_count = 0;

  std::size_t rank() const { return static_cast<std::size_t>(factor.cols()); }
};

/// Factor the model covariance on the grid. Throws model_not_psd when the
/// kernel is not positive semidefinite on this grid (within tolerance) or
/// when the factor fails reconstruction validation; throws resource_limit
/// when the dense covariance would exceed the memory budget.
CovarianceFactor build_covariance(const CorrelationModel& model,
                                  const SpatialGrid& grid, double lambda_m,
                                  const CovarianceOptions& options = {});

/// rows x 2*count matrix of iid standard normals. Column pair (2j, 2j+1)
/// is drawn from substream (seed, first_stream + j): `rows` draws for the
/// first column, then `rows` draws for the second. This is the only
/// Gaussian source used for field sampling, so a field's values depend
/// only on its stream index, never on batch boundaries.
Eigen::MatrixXd gaussian_coefficients(std::size_t rows, std::size_t count,
                                      std::uint64_t seed,
                                      std::uint64_t first_stream);

/// count correlated field realizations as the columns of an n x count
/// complex matrix; field j uses substream (seed, first_stream + j) and has
/// per-sample power `variance`. Intended for moderate batches; callers
/// loop or chunk for large counts.
Eigen::MatrixXcd sample_field_matrix(const CovarianceFactor& factor,
                                     double variance, std::size_t count,
                                     std::uint64_t seed,
                                     std::uint64_t first_stream = 0);

std::vector<ComplexField> sample_field(const CovarianceFactor& factor,
                                       double variance, std::size_t count,
                                       std::uint64_t seed,
                                       std::uint64_t first_stream = 0);

/// Empirical spatial correlation at an integer lag (in grid steps):
/// Re E[x(t) conj(x(t+tau))] / beta averaged over all positions and
/// fields. Needs at least two fields on one common grid; the lag must be
/// below the grid size.
double empirical_correlation(std::span<const ComplexField> fields,
                             std::size_t lag_index);

}  // namespace cfas::channel
