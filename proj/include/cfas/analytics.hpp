#pragma once

#include "cfas/sirproc.hpp"

namespace cfas::analytics {

/// Small-argument vs large-argument threshold regimes.
enum class SRegime { SmallS, LargeS };
/// Short-aperture vs deep-tail regimes for the supremum CDF.
enum class TRegime { SmallT, Tail };

struct SupCdfAsymptotic {
  double value = 0.0;
  /// Tail decay order of 1 - value in the threshold, i.e. 1/2 - N for the
  /// Tail regime; NaN for SmallT where no power law applies.
  double order_exponent = 0.0;
};

// Closed forms for the continuous-aperture SIR process. All spatial rates
// are per meter; b is the zero-lag curvature of the spatial correlation
// (channel::curvature_b), which carries the wavelength dependence.
// Thresholds s are linear (not dB) and must be >= 0.

/// Level-crossing rate of the SIR process at threshold s.
double lcr_closed_form(const sirproc::ScenarioParams& params, double b,
                       double s);

/// Average fade extent (aperture length below s per downcrossing).
double afd_closed_form(const sirproc::ScenarioParams& params, double b,
                       double s);

/// Marginal CDF of the SIR at a point, P(S <= s).
double cdf_sir(const sirproc::ScenarioParams& params, double s);

/// Lower bound on P(sup S <= s) over the aperture params.length_m:
/// cdf_sir(s) - length * lcr(s). Deliberately not clamped at 0; callers
/// that need a probability clamp it themselves.
double cdf_sup_lower_bound(const sirproc::ScenarioParams& params, double b,
                           double s);

/// Crossing rate of the normalized envelope ratio process at level r >= 0.
/// lcr_closed_form is this rate under the change of variables
/// r = sqrt(beta_i s / beta0).
double lcr_envelope_ratio(double r, int n_interferers, double b);

/// Specializations for beta0 == beta_i (unit-power case).
double lcr_equal_beta(int n_interferers, double lambda_m, double s);
double afd_equal_beta(int n_interferers, double lambda_m, double s);

double lcr_asymptotic(const sirproc::ScenarioParams& params, double b,
                      double s, SRegime regime);
double afd_asymptotic(const sirproc::ScenarioParams& params, double b,
                      double s, SRegime regime);

/// Asymptotics of the supremum CDF bound: SmallT collapses to the point
/// CDF; Tail is the large-s expansion whose complement decays like
/// s^(1/2 - N).
SupCdfAsymptotic cdf_sup_asymptotic(const sirproc::ScenarioParams& params,
                                    double b, double s, TRegime regime);

}  // namespace cfas::analytics
