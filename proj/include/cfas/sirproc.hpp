#pragma once

#include <Eigen/Dense>
#include <cstddef>

#include "cfas/channel.hpp"
#include "cfas/grid.hpp"

namespace cfas::sirproc {

/// Physical scenario: one desired link with mean power beta0 against
/// n_interferers equal-power interferers with mean power beta_i each, all
/// Rayleigh faded with the same spatial correlation along an aperture of
/// length_m at carrier wavelength lambda_m.
struct ScenarioParams {
  double beta0 = 1.0;
  double beta_i = 1.0;
  int n_interferers = 1;
  double lambda_m = 0.01;
  double length_m = 0.01;

  void validate() const;
};

/// Signal-to-interference ratio sampled along the aperture.
struct SirTrace {
  channel::SpatialGrid grid;
  Eigen::VectorXd sir;
};

struct SupremumResult {
  double value = 0.0;
  double position_m = 0.0;
  /// True when the parabolic vertex was accepted in place of the grid max.
  bool refined = false;
};

/// sir_k = |g_k|^2 / sum_i |h_{i,k}|^2 from one desired field and an
/// n x N matrix whose columns are the interferer fields (all on the same
/// grid). Throws degenerate_sample if the denominator vanishes anywhere.
Eigen::VectorXd sir_from_samples(
    const Eigen::Ref<const Eigen::VectorXcd>& desired,
    const Eigen::Ref<const Eigen::MatrixXcd>& interferers);

SirTrace assemble_sir(const channel::ComplexField& desired,
                      std::span<const channel::ComplexField> interferers);

/// Supremum of the SIR over the aperture. With refine=true a parabola is
/// fitted to the envelope (sqrt of SIR) around the grid argmax; the vertex
/// replaces the grid value when it lies within one step and above it.
SupremumResult supremum(const SirTrace& trace, bool refine = true);

/// Best-port SIR of a discrete system with n_ports ports spread uniformly
/// over the aperture (endpoints included), each snapped to the nearest
/// grid point. n_ports == 1 reads the first grid point.
double dfas_select(const SirTrace& trace, std::size_t n_ports);

}  // namespace cfas::sirproc
