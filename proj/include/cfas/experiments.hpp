#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cfas/correlation.hpp"
#include "cfas/sirproc.hpp"

namespace cfas::experiments {

/// "lo:step:hi" -> inclusive dB grid.
std::vector<double> parse_db_range(const std::string& text);

/// Full description of one experiment run. A run is a pure function of
/// this struct: identical configs produce identical tables (wall-clock
/// metadata aside), independent of thread count or batching.
struct ExperimentConfig {
  /// Defaults: unit-power desired link against one interferer of twice the
  /// power, 1 cm carrier wavelength, 1 cm aperture.
  sirproc::ScenarioParams scenario{1.0, 2.0, 1, 0.01, 0.01};
  channel::CorrelationModel model = channel::CorrelationModel::jakes2d();
  /// Strictly increasing threshold grid in dB.
  std::vector<double> thresholds_db = parse_db_range("-20:1:30");
  std::size_t n_realizations = 1000;
  int grid_points_per_wavelength = 200;
  std::uint64_t seed = 1;
  std::size_t dfas_ports = 10;
  bool refine_supremum = true;
  /// Trace length for crossing-statistics runs, in wavelengths. The
  /// supremum runs use scenario.length_m instead.
  double trace_length_wavelengths = 50.0;
  /// When true, the port comparison also simulates the other isotropic
  /// model (sinc when the primary is Jakes and vice versa) under common
  /// random numbers.
  bool include_sinc_pair = true;

  void validate() const;
  std::vector<double> thresholds_linear() const;

  /// Flat JSON object with snake_case keys mirroring the fields above;
  /// unknown keys are rejected by name.
  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct ResultRow {
  double x_db = 0.0;
  double x_linear = 0.0;
  double analytic = 0.0;
  double empirical = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  long long n_events = 0;
  bool low_confidence = false;  // fewer than 30 events
  std::vector<double> extras;
};

/// Uniform output of every experiment runner. The first eight columns are
/// fixed; runner-specific columns are appended after them. CSV output is
/// deterministic (9 significant digits, LF line endings, no wall time);
/// JSON output carries the config echo and revision, plus the wall time
/// unless suppressed.
struct ResultTable {
  std::string experiment;
  std::string x_db_label = "threshold_db";
  std::string x_linear_label = "threshold_linear";
  std::vector<std::string> extra_columns;
  std::vector<ResultRow> rows;
  nlohmann::json config_echo;
  std::string revision;
  double wall_time_s = 0.0;

  void write_csv(std::ostream& os) const;
  std::string csv() const;
  nlohmann::json to_json(bool include_wall_time = true) const;
};

/// Level-crossing rate vs threshold over long traces. Extras:
/// analytic_per_wavelength, empirical_per_wavelength.
ResultTable run_lcr_experiment(const ExperimentConfig& config);

/// Average fade extent vs threshold over the same kind of traces. Extras:
/// analytic_over_lambda, empirical_over_lambda. Thresholds that never
/// crossed down get NaN estimates and a low-confidence flag.
ResultTable run_afd_experiment(const ExperimentConfig& config);

/// Both crossing tables from one shared simulation (the traces are
/// identical to running each separately).
std::pair<ResultTable, ResultTable> run_crossing_experiments(
    const ExperimentConfig& config);

/// Empirical CDF of the supremum over the aperture vs the analytic lower
/// bound (clamped at zero in the analytic column). Extras:
/// bound_unclamped, marginal_cdf.
ResultTable run_sup_cdf_experiment(const ExperimentConfig& config);

/// Continuous supremum vs discrete port selection under common random
/// numbers, optionally with the paired isotropic model. Extras:
/// dfas_empirical, dfas_ci_low, dfas_ci_high and, with the pair,
/// <model>_empirical, <model>_ci_low, <model>_ci_high.
ResultTable run_dfas_comparison(const ExperimentConfig& config);

/// Empirical vs model spatial correlation on a two-wavelength grid, one
/// row per lag in {0, 1/8, 1/4, 1/2, 1} wavelengths, plus a final
/// derivative-variance row with sentinel x values of -1 comparing the
/// envelope-derivative variance against the model curvature b.
ResultTable run_channel_validation(const ExperimentConfig& config);

}  // namespace cfas::experiments
