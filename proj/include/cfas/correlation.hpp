#pragma once

#include <optional>
#include <string>

namespace cfas::channel {

enum class CorrelationKind { Jakes2D, Sinc3D, Quadratic };

/// Spatial correlation model for the fading process along the aperture.
///
/// Jakes2D:   rho(tau) = J0(2 pi tau / lambda)        (isotropic 2-D ring)
/// Sinc3D:    rho(tau) = sinc(2 tau / lambda)         (isotropic 3-D sphere)
/// Quadratic: rho(tau) = max(1 - b tau^2, -1)         (small-lag surrogate)
///
/// Quadratic requires an explicit curvature b; it is only positive
/// semidefinite on sufficiently short apertures and is intended for
/// small-grid studies and unit tests.
struct CorrelationModel {
  CorrelationKind kind = CorrelationKind::Jakes2D;
  std::optional<double> curvature_override;  // required for Quadratic

  static CorrelationModel jakes2d() { return {CorrelationKind::Jakes2D, {}}; }
  static CorrelationModel sinc3d() { return {CorrelationKind::Sinc3D, {}}; }
  static CorrelationModel quadratic(double b) {
    return {CorrelationKind::Quadratic, b};
  }
};

/// rho(tau) for the given model at carrier wavelength lambda_m.
/// tau_m may be any real lag; rho(0) == 1 exactly.
double correlation(const CorrelationModel& model, double tau_m,
                   double lambda_m);

/// Curvature b = -rho''(0)/... in the expansion rho(tau) ~ 1 - b tau^2.
/// Jakes2D: pi^2/lambda^2, Sinc3D: 2 pi^2 / (3 lambda^2), Quadratic: the
/// override. This is also the variance of the derivative of the normalized
/// fading process, which is what the level-crossing forms consume.
double curvature_b(const CorrelationModel& model, double lambda_m);

std::string kind_name(CorrelationKind kind);
CorrelationKind parse_kind(const std::string& name);

}  // namespace cfas::channel
