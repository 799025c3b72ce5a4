#include "cfas/analytics.hpp"

#include <cmath>
#include <limits>

#include "cfas/errors.hpp"

namespace cfas::analytics {

namespace {

// Gamma(n + 1/2) / Gamma(n); the half-integer ratio that appears in every
// crossing-rate form.
double gamma_half_ratio(int n) {
  const double nn = n;
  return std::exp(std::lgamma(nn + 0.5) - std::lgamma(nn));
}

void check_common(const sirproc::ScenarioParams& params, double b, double s) {
  params.validate();
  detail::require(std::isfinite(b) && b > 0.0,
                  "analytics: curvature b must be positive");
  detail::require(std::isfinite(s) && s >= 0.0,
                  "analytics: threshold must be nonnegative");
}

}  // namespace

double lcr_closed_form(const sirproc::ScenarioParams& params, double b,
                       double s) {
  check_common(params, b, s);
  if (s == 0.0) return 0.0;
  const double n = params.n_interferers;
  const double log_marginal =
      n * (std::log(params.beta0) - std::log(params.beta0 + params.beta_i * s));
  return gamma_half_ratio(params.n_interferers) * std::exp(log_marginal) *
         std::sqrt(2.0 * b * params.beta_i * s / (M_PI * params.beta0));
}

double afd_closed_form(const sirproc::ScenarioParams& params, double b,
                       double s) {
  check_common(params, b, s);
  if (s == 0.0) return 0.0;
  const double n = params.n_interferers;
  const double log_hi = std::log(params.beta0 + params.beta_i * s);
  const double log_lo = std::log(params.beta0);
  // ((beta0 + beta_i s)^N - beta0^N) evaluated in log space so large N and
  // large s cannot overflow.
  const double log_diff =
      n * log_hi + std::log(-std::expm1(-n * (log_hi - log_lo)));
  const double log_afd = std::lgamma(n) - std::lgamma(n + 0.5) + log_diff -
                         0.5 * std::log(2.0 * b * params.beta_i * s / M_PI) -
                         (n - 0.5) * log_lo;
  return std::exp(log_afd);
}

double cdf_sir(const sirproc::ScenarioParams& params, double s) {
  params.validate();
  detail::require(std::isfinite(s) && s >= 0.0,
                  "analytics: threshold must be nonnegative");
  if (s == 0.0) return 0.0;
  const double n = params.n_interferers;
  return -std::expm1(n * (std::log(params.beta0) -
                          std::log(params.beta0 + params.beta_i * s)));
}

double cdf_sup_lower_bound(const sirproc::ScenarioParams& params, double b,
                           double s) {
  check_common(params, b, s);
  return cdf_sir(params, s) - params.length_m * lcr_closed_form(params, b, s);
}

double lcr_envelope_ratio(double r, int n_interferers, double b) {
  detail::require(std::isfinite(r) && r >= 0.0,
                  "lcr_envelope_ratio: level must be nonnegative");
  detail::require(n_interferers >= 1,
                  "lcr_envelope_ratio: need at least one interferer");
  detail::require(std::isfinite(b) && b > 0.0,
                  "lcr_envelope_ratio: curvature must be positive");
  return gamma_half_ratio(n_interferers) * std::sqrt(b / (2.0 * M_PI)) *
         2.0 * r * std::exp(-n_interferers * std::log1p(r * r));
}

double lcr_equal_beta(int n_interferers, double lambda_m, double s) {
  sirproc::ScenarioParams params;
  params.beta0 = params.beta_i = 1.0;
  params.n_interferers = n_interferers;
  params.lambda_m = lambda_m;
  params.validate();
  detail::require(std::isfinite(s) && s >= 0.0,
                  "analytics: threshold must be nonnegative");
  if (s == 0.0) return 0.0;
  return gamma_half_ratio(n_interferers) * std::sqrt(2.0 * M_PI * s) /
         lambda_m * std::exp(-n_interferers * std::log1p(s));
}

double afd_equal_beta(int n_interferers, double lambda_m, double s) {
  sirproc::ScenarioParams params;
  params.beta0 = params.beta_i = 1.0;
  params.n_interferers = n_interferers;
  params.lambda_m = lambda_m;
  params.validate();
  detail::require(std::isfinite(s) && s >= 0.0,
                  "analytics: threshold must be nonnegative");
  if (s == 0.0) return 0.0;
  return lambda_m / gamma_half_ratio(n_interferers) *
         std::expm1(n_interferers * std::log1p(s)) /
         std::sqrt(2.0 * M_PI * s);
}

double lcr_asymptotic(const sirproc::ScenarioParams& params, double b,
                      double s, SRegime regime) {
  check_common(params, b, s);
  const double n = params.n_interferers;
  if (regime == SRegime::SmallS)
    return gamma_half_ratio(params.n_interferers) *
           std::sqrt(2.0 * b * params.beta_i * s / (M_PI * params.beta0));
  return gamma_half_ratio(params.n_interferers) * std::sqrt(2.0 * b / M_PI) *
         std::exp((n - 0.5) *
                  (std::log(params.beta0) - std::log(params.beta_i * s)));
}

double afd_asymptotic(const sirproc::ScenarioParams& params, double b,
                      double s, SRegime regime) {
  check_common(params, b, s);
  const double n = params.n_interferers;
  if (regime == SRegime::SmallS)
    return std::exp(std::lgamma(n + 1.0) - std::lgamma(n + 0.5)) *
           std::sqrt(M_PI * params.beta_i * s / (2.0 * b * params.beta0));
  return std::exp(std::lgamma(n) - std::lgamma(n + 0.5)) *
         std::sqrt(M_PI / (2.0 * b)) *
         std::exp((n - 0.5) *
                  (std::log(params.beta_i * s) - std::log(params.beta0)));
}

SupCdfAsymptotic cdf_sup_asymptotic(const sirproc::ScenarioParams& params,
                                    double b, double s, TRegime regime) {
  check_common(params, b, s);
  if (regime == TRegime::SmallT)
    return {cdf_sir(params, s), std::numeric_limits<double>::quiet_NaN()};
  detail::require(s > 0.0, "cdf_sup_asymptotic: tail regime needs s > 0");
  const double n = params.n_interferers;
  const double tail_marginal =
      std::exp(n * (std::log(params.beta0) - std::log(params.beta_i * s)));
  const double crossing_term =
      params.length_m * lcr_asymptotic(params, b, s, SRegime::SmallS);
  return {1.0 - tail_marginal * (1.0 + crossing_term), 0.5 - n};
}

}  // namespace cfas::analytics
