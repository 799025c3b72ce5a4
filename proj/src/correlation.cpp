#include "cfas/correlation.hpp"

#include <algorithm>
#include <cmath>

#include "cfas/errors.hpp"

namespace cfas::channel {

namespace {

void check_lambda(double lambda_m) {
  detail::require(std::isfinite(lambda_m) && lambda_m > 0.0,
                  "correlation: lambda must be positive");
}

}  // namespace

double correlation(const CorrelationModel& model, double tau_m,
                   double lambda_m) {
  check_lambda(lambda_m);
  detail::require(std::isfinite(tau_m), "correlation: lag must be finite");
  const double tau = std::abs(tau_m);
  switch (model.kind) {
    case CorrelationKind::Jakes2D:
      return std::cyl_bessel_j(0.0, 2.0 * M_PI * tau / lambda_m);
    case CorrelationKind::Sinc3D: {
      const double x = 2.0 * M_PI * tau / lambda_m;
      if (x < 1e-8) return 1.0 - x * x / 6.0;
      return std::sin(x) / x;
    }
    case CorrelationKind::Quadratic: {
      detail::require(model.curvature_override.has_value(),
                      "correlation: quadratic model needs a curvature");
      const double b = *model.curvature_override;
      detail::require(std::isfinite(b) && b > 0.0,
                      "correlation: curvature must be positive");
      return std::max(1.0 - b * tau * tau, -1.0);
    }
  }
  throw invalid_parameter("correlation: unknown model kind");
}

double curvature_b(const CorrelationModel& model, double lambda_m) {
  check_lambda(lambda_m);
  switch (model.kind) {
    case CorrelationKind::Jakes2D:
      return M_PI * M_PI / (lambda_m * lambda_m);
    case CorrelationKind::Sinc3D:
      return 2.0 * M_PI * M_PI / (3.0 * lambda_m * lambda_m);
    case CorrelationKind::Quadratic: {
      detail::require(model.curvature_override.has_value(),
                      "curvature_b: quadratic model needs a curvature");
      const double b = *model.curvature_override;
      detail::require(std::isfinite(b) && b > 0.0,
                      "curvature_b: curvature must be positive");
      return b;
    }
  }
  throw invalid_parameter("curvature_b: unknown model kind");
}

std::string kind_name(CorrelationKind kind) {
  switch (kind) {
    case CorrelationKind::Jakes2D:
      return "jakes2d";
    case CorrelationKind::Sinc3D:
      return "sinc3d";
    case CorrelationKind::Quadratic:
      return "quadratic";
  }
  return "unknown";
}

CorrelationKind parse_kind(const std::string& name) {
  if (name == "jakes2d") return CorrelationKind::Jakes2D;
  if (name == "sinc3d") return CorrelationKind::Sinc3D;
  if (name == "quadratic") return CorrelationKind::Quadratic;
  throw invalid_parameter("unknown correlation model '" + name + "'");
}

}  // namespace cfas::channel
