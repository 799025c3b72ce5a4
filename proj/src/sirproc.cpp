#include "cfas/sirproc.hpp"

#include <cmath>

#include "cfas/errors.hpp"

namespace cfas::sirproc {

void ScenarioParams::validate() const {
  detail::require(std::isfinite(beta0) && beta0 > 0.0,
                  "scenario: beta0 must be positive");
  detail::require(std::isfinite(beta_i) && beta_i > 0.0,
                  "scenario: beta_i must be positive");
  detail::require(n_interferers >= 1,
                  "scenario: need at least one interferer");
  detail::require(std::isfinite(lambda_m) && lambda_m > 0.0,
                  "scenario: lambda must be positive");
  detail::require(std::isfinite(length_m) && length_m > 0.0,
                  "scenario: aperture length must be positive");
}

Eigen::VectorXd sir_from_samples(
    const Eigen::Ref<const Eigen::VectorXcd>& desired,
    const Eigen::Ref<const Eigen::MatrixXcd>& interferers) {
  detail::require(desired.size() == interferers.rows(),
                  "sir: desired and interferer grids differ");
  detail::require(interferers.cols() >= 1, "sir: need at least one interferer");
  Eigen::VectorXd denom = interferers.cwiseAbs2().rowwise().sum();
  if ((denom.array() <= 0.0).any())
    throw degenerate_sample("sir: interference power vanished on the grid");
  return desired.cwiseAbs2().cwiseQuotient(denom);
}

SirTrace assemble_sir(const channel::ComplexField& desired,
                      std::span<const channel::ComplexField> interferers) {
  detail::require(!interferers.empty(), "sir: need at least one interferer");
  Eigen::MatrixXcd h(desired.samples.size(),
                     static_cast<Eigen::Index>(interferers.size()));
  for (std::size_t i = 0; i < interferers.size(); ++i) {
    detail::require(interferers[i].grid == desired.grid &&
                        interferers[i].samples.size() == desired.samples.size(),
                    "sir: fields must share one grid");
    h.col(static_cast<Eigen::Index>(i)) = interferers[i].samples;
  }
  return {desired.grid, sir_from_samples(desired.samples, h)};
}

SupremumResult supremum(const SirTrace& trace, bool refine) {
  const auto n = trace.sir.size();
  detail::require(n >= 1, "supremum: empty trace");
  Eigen::Index best = 0;
  for (Eigen::Index k = 1; k < n; ++k)
    if (trace.sir[k] > trace.sir[best]) best = k;

  SupremumResult out{trace.sir[best], trace.grid.position(best), false};
  if (!refine || best == 0 || best == n - 1) return out;

  // Fit the parabola on the envelope: SIR is a squared Gaussian magnitude
  // over slowly varying interference, so sqrt(SIR) is locally smooth.
  const double ym = std::sqrt(trace.sir[best - 1]);
  const double y0 = std::sqrt(trace.sir[best]);
  const double yp = std::sqrt(trace.sir[best + 1]);
  const double bend = (ym + yp) - 2.0 * y0;
  if (!(bend < 0.0)) return out;

  const double step = trace.grid.step();
  const double offset = 0.5 * step * (ym - yp) / bend;
  const double vertex = y0 - (ym - yp) * (ym - yp) / (8.0 * bend);
  if (std::abs(offset) <= step && vertex > y0) {
    out.value = vertex * vertex;
    out.position_m = trace.grid.position(best) + offset;
    out.refined = true;
  }
  return out;
}

double dfas_select(const SirTrace& trace, std::size_t n_ports) {
  const auto n = static_cast<std::size_t>(trace.sir.size());
  detail::require(n_ports >= 1 && n_ports <= n,
                  "dfas_select: port count must be in [1, grid size]");
  if (n_ports == 1) return trace.sir[0];
  double best = trace.sir[0];
  for (std::size_t k = 1; k < n_ports; ++k) {
    const double pos = static_cast<double>(k) * trace.grid.length() /
                       static_cast<double>(n_ports - 1);
    auto idx = static_cast<std::size_t>(std::llround(pos / trace.grid.step()));
    if (idx > n - 1) idx = n - 1;
    best = std::max(best, trace.sir[static_cast<Eigen::Index>(idx)]);
  }
  return best;
}

}  // namespace cfas::sirproc
