#include "cfas/experiments.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <sstream>
#include <tuple>

#include "cfas/analytics.hpp"
#include "cfas/channel.hpp"
#include "cfas/errors.hpp"
#include "cfas/estimators.hpp"
#include "cfas/threading.hpp"

#ifndef CFAS_REVISION
#define CFAS_REVISION "unknown"
#endif

namespace cfas::experiments {

namespace {

constexpr long long kLowConfidenceEvents = 30;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

// The covariance factor depends only on (model, grid, lambda); runs that
// share those reuse one factorization. Entries are never evicted; the few
// factors a process touches are small next to the simulation itself.
const channel::CovarianceFactor& cached_factor(
    const channel::CorrelationModel& model, const channel::SpatialGrid& grid,
    double lambda_m) {
  struct Key {
    int kind;
    double b;
    std::size_t n;
    double step;
    double length;
    double lambda;
    bool operator<(const Key& o) const {
      return std::tie(kind, b, n, step, length, lambda) <
             std::tie(o.kind, o.b, o.n, o.step, o.length, o.lambda);
    }
  };
  static std::mutex mutex;
  static std::map<Key, std::unique_ptr<channel::CovarianceFactor>> cache;

  const Key key{static_cast<int>(model.kind),
                model.curvature_override.value_or(0.0),
                grid.size(),
                grid.step(),
                grid.length(),
                lambda_m};
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(key);
  if (it == cache.end()) {
    auto factor = std::make_unique<channel::CovarianceFactor>(
        channel::build_covariance(model, grid, lambda_m));
    it = cache.emplace(key, std::move(factor)).first;
  }
  return *it->second;
}

struct Timer {
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  }
};

void stamp(ResultTable& table, const ExperimentConfig& config,
           const Timer& timer) {
  table.config_echo = config.to_json();
  table.revision = CFAS_REVISION;
  table.wall_time_s = timer.seconds();
}

std::complex<double> imag_unit() { return {0.0, 1.0}; }

// Splits the real coefficient product into the desired field (variance
// beta0) and the interferer matrix (variance beta_i per column).
void split_links(const Eigen::MatrixXd& product, double beta0, double beta_i,
                 Eigen::VectorXcd& desired, Eigen::MatrixXcd& interferers) {
  const Eigen::Index n = product.rows();
  const Eigen::Index links = product.cols() / 2;
  desired = std::sqrt(beta0 / 2.0) *
            (product.col(0) + imag_unit() * product.col(1));
  interferers.resize(n, links - 1);
  const double scale = std::sqrt(beta_i / 2.0);
  for (Eigen::Index j = 1; j < links; ++j)
    interferers.col(j - 1) =
        scale * (product.col(2 * j) + imag_unit() * product.col(2 * j + 1));
}

// One SIR trace for realization r; fields use streams
// r*(1+N) .. r*(1+N)+N, desired first.
sirproc::SirTrace simulate_trace(const ExperimentConfig& config,
                                 const channel::CovarianceFactor& factor,
                                 std::size_t realization) {
  const auto links =
      static_cast<std::size_t>(1 + config.scenario.n_interferers);
  const Eigen::MatrixXd z = channel::gaussian_coefficients(
      factor.rank(), links, config.seed, realization * links);
  const Eigen::MatrixXd product = factor.factor * z;
  Eigen::VectorXcd desired;
  Eigen::MatrixXcd interferers;
  split_links(product, config.scenario.beta0, config.scenario.beta_i, desired,
              interferers);
  return {factor.grid, sirproc::sir_from_samples(desired, interferers)};
}

ResultRow make_row(double db, double linear, double analytic,
                   const estimators::EstimateWithCI& estimate) {
  ResultRow row;
  row.x_db = db;
  row.x_linear = linear;
  row.analytic = analytic;
  row.empirical = estimate.value;
  row.ci_low = estimate.ci_low;
  row.ci_high = estimate.ci_high;
  row.n_events = static_cast<long long>(estimate.n_events);
  row.low_confidence = row.n_events < kLowConfidenceEvents;
  return row;
}

struct CrossingTotals {
  std::vector<estimators::RateAccumulator> up;
  std::vector<estimators::RatioAccumulator> fade;
  std::vector<std::size_t> up_events;
  std::vector<std::size_t> down_events;
  double span_m = 0.0;
};

CrossingTotals simulate_crossings(const ExperimentConfig& config) {
  const double lambda = config.scenario.lambda_m;
  const channel::SpatialGrid grid(
      config.trace_length_wavelengths * lambda,
      lambda / config.grid_points_per_wavelength);
  const channel::CovarianceFactor& factor =
      cached_factor(config.model, grid, lambda);
  const std::vector<double> thresholds = config.thresholds_linear();
  const std::size_t n_thresholds = thresholds.size();

  // Per-realization cells keep the reduction order fixed under threading.
  std::vector<std::vector<std::array<double, 3>>> cells(config.n_realizations);
  parallel_for(config.n_realizations, [&](std::size_t r) {
    const sirproc::SirTrace trace = simulate_trace(config, factor, r);
    auto& mine = cells[r];
    mine.resize(n_thresholds);
    for (std::size_t t = 0; t < n_thresholds; ++t) {
      const estimators::CrossingStats stats =
          estimators::count_crossings(trace, thresholds[t]);
      mine[t] = {static_cast<double>(stats.upcrossings),
                 static_cast<double>(stats.downcrossings),
                 stats.below_length_m};
    }
  });

  CrossingTotals totals;
  totals.span_m = grid.span();
  totals.up.resize(n_thresholds);
  totals.fade.resize(n_thresholds);
  totals.up_events.assign(n_thresholds, 0);
  totals.down_events.assign(n_thresholds, 0);
  for (const auto& mine : cells) {
    for (std::size_t t = 0; t < n_thresholds; ++t) {
      totals.up[t].add(mine[t][0]);
      totals.fade[t].add(mine[t][2], mine[t][1]);
      totals.up_events[t] += static_cast<std::size_t>(mine[t][0]);
      totals.down_events[t] += static_cast<std::size_t>(mine[t][1]);
    }
  }
  return totals;
}

}  // namespace

void ExperimentConfig::validate() const {
  scenario.validate();
  if (model.kind == channel::CorrelationKind::Quadratic)
    detail::require(model.curvature_override.has_value(),
                    "config: quadratic model needs curvature_b");
  detail::require(!thresholds_db.empty(), "config: thresholds are empty");
  for (std::size_t i = 0; i < thresholds_db.size(); ++i) {
    detail::require(std::isfinite(thresholds_db[i]),
                    "config: thresholds must be finite");
    if (i)
      detail::require(thresholds_db[i] > thresholds_db[i - 1],
                      "config: thresholds must be strictly increasing");
  }
  detail::require(n_realizations >= 1, "config: need at least 1 realization");
  detail::require(grid_points_per_wavelength >= 1,
                  "config: grid_points_per_wavelength must be >= 1");
  detail::require(dfas_ports >= 1, "config: dfas_ports must be >= 1");
  detail::require(std::isfinite(trace_length_wavelengths) &&
                      trace_length_wavelengths > 0.0,
                  "config: trace_length_wavelengths must be positive");
}

std::vector<double> ExperimentConfig::thresholds_linear() const {
  std::vector<double> out;
  out.reserve(thresholds_db.size());
  for (double db : thresholds_db) out.push_back(db_to_linear(db));
  return out;
}

std::vector<double> parse_db_range(const std::string& text) {
  std::array<double, 3> parts{};
  std::size_t begin = 0;
  for (int i = 0; i < 3; ++i) {
    const std::size_t end =
        i < 2 ? text.find(':', begin) : std::string::npos;
    if (i < 2 && end == std::string::npos)
      throw invalid_parameter("threshold range must look like lo:step:hi");
    const std::string piece = text.substr(begin, end - begin);
    try {
      std::size_t used = 0;
      parts[i] = std::stod(piece, &used);
      if (used != piece.size()) throw std::invalid_argument(piece);
    } catch (const std::exception&) {
      throw invalid_parameter("threshold range: bad number '" + piece + "'");
    }
    begin = end + 1;
  }
  const auto [lo, step, hi] = parts;
  detail::require(std::isfinite(lo) && std::isfinite(step) &&
                      std::isfinite(hi),
                  "threshold range must be finite");
  detail::require(step > 0.0, "threshold range: step must be positive");
  detail::require(lo <= hi, "threshold range: lo must not exceed hi");
  std::vector<double> out;
  for (std::size_t k = 0;; ++k) {
    const double value = lo + static_cast<double>(k) * step;
    if (value > hi + step * 1e-9) break;
    out.push_back(value);
  }
  return out;
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  detail::require(j.is_object(), "config must be a JSON object");
  static const std::array<const char*, 15> known = {
      "beta0",          "beta_i",
      "n_interferers",  "lambda_m",
      "length_m",       "model",
      "curvature_b",    "thresholds_db",
      "n_realizations", "grid_points_per_wavelength",
      "seed",           "dfas_ports",
      "refine_supremum", "trace_length_wavelengths",
      "include_sinc_pair"};
  for (const auto& item : j.items()) {
    if (std::find_if(known.begin(), known.end(), [&](const char* k) {
          return item.key() == k;
        }) == known.end())
      throw invalid_parameter("config: unknown key '" + item.key() + "'");
  }

  ExperimentConfig config;
  auto read = [&j](const char* key, auto& out) {
    if (!j.contains(key)) return;
    try {
      out = j.at(key).get<std::decay_t<decltype(out)>>();
    } catch (const nlohmann::json::exception& e) {
      throw invalid_parameter(std::string("config: key '") + key +
                              "': " + e.what());
    }
  };
  read("beta0", config.scenario.beta0);
  read("beta_i", config.scenario.beta_i);
  read("n_interferers", config.scenario.n_interferers);
  read("lambda_m", config.scenario.lambda_m);
  read("length_m", config.scenario.length_m);
  if (j.contains("model")) {
    std::string name;
    read("model", name);
    config.model.kind = channel::parse_kind(name);
    config.model.curvature_override.reset();
  }
  if (j.contains("curvature_b")) {
    detail::require(config.model.kind == channel::CorrelationKind::Quadratic,
                    "config: curvature_b only applies to the quadratic model");
    double b = 0.0;
    read("curvature_b", b);
    config.model.curvature_override = b;
  }
  if (j.contains("thresholds_db")) {
    const nlohmann::json& t = j.at("thresholds_db");
    if (t.is_string()) {
      config.thresholds_db = parse_db_range(t.get<std::string>());
    } else {
      try {
        config.thresholds_db = t.get<std::vector<double>>();
      } catch (const nlohmann::json::exception& e) {
        throw invalid_parameter(
            std::string("config: key 'thresholds_db': ") + e.what());
      }
    }
  }
  read("n_realizations", config.n_realizations);
  read("grid_points_per_wavelength", config.grid_points_per_wavelength);
  read("seed", config.seed);
  read("dfas_ports", config.dfas_ports);
  read("refine_supremum", config.refine_supremum);
  read("trace_length_wavelengths", config.trace_length_wavelengths);
  read("include_sinc_pair", config.include_sinc_pair);
  config.validate();
  return config;
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j{
      {"beta0", scenario.beta0},
      {"beta_i", scenario.beta_i},
      {"n_interferers", scenario.n_interferers},
      {"lambda_m", scenario.lambda_m},
      {"length_m", scenario.length_m},
      {"model", channel::kind_name(model.kind)},
      {"thresholds_db", thresholds_db},
      {"n_realizations", n_realizations},
      {"grid_points_per_wavelength", grid_points_per_wavelength},
      {"seed", seed},
      {"dfas_ports", dfas_ports},
      {"refine_supremum", refine_supremum},
      {"trace_length_wavelengths", trace_length_wavelengths},
      {"include_sinc_pair", include_sinc_pair},
  };
  if (model.kind == channel::CorrelationKind::Quadratic &&
      model.curvature_override)
    j["curvature_b"] = *model.curvature_override;
  return j;
}

void ResultTable::write_csv(std::ostream& os) const {
  os << x_db_label << ',' << x_linear_label
     << ",analytic,empirical,ci_low,ci_high,n_events,low_confidence";
  for (const std::string& name : extra_columns) os << ',' << name;
  os << '\n';
  char buffer[40];
  const auto put = [&](double v) {
    std::snprintf(buffer, sizeof(buffer), "%.9g", v);
    os << buffer;
  };
  for (const ResultRow& row : rows) {
    put(row.x_db);
    os << ',';
    put(row.x_linear);
    os << ',';
    put(row.analytic);
    os << ',';
    put(row.empirical);
    os << ',';
    put(row.ci_low);
    os << ',';
    put(row.ci_high);
    os << ',' << row.n_events << ',' << (row.low_confidence ? 1 : 0);
    for (double extra : row.extras) {
      os << ',';
      put(extra);
    }
    os << '\n';
  }
}

std::string ResultTable::csv() const {
  std::ostringstream os;
  write_csv(os);
  return os.str();
}

nlohmann::json ResultTable::to_json(bool include_wall_time) const {
  nlohmann::json columns = nlohmann::json::array();
  for (const std::string& name :
       {x_db_label, x_linear_label, std::string("analytic"),
        std::string("empirical"), std::string("ci_low"),
        std::string("ci_high"), std::string("n_events"),
        std::string("low_confidence")})
    columns.push_back(name);
  for (const std::string& name : extra_columns) columns.push_back(name);

  nlohmann::json rows_json = nlohmann::json::array();
  for (const ResultRow& row : rows) {
    nlohmann::json r = {row.x_db,    row.x_linear, row.analytic,
                        row.empirical, row.ci_low,  row.ci_high,
                        row.n_events,  row.low_confidence};
    for (double extra : row.extras) r.push_back(extra);
    rows_json.push_back(std::move(r));
  }

  nlohmann::json metadata = {{"config", config_echo}, {"revision", revision}};
  if (include_wall_time) metadata["wall_time_s"] = wall_time_s;
  return nlohmann::json{{"experiment", experiment},
                        {"metadata", std::move(metadata)},
                        {"columns", std::move(columns)},
                        {"rows", std::move(rows_json)}};
}

std::pair<ResultTable, ResultTable> run_crossing_experiments(
    const ExperimentConfig& config) {
  config.validate();
  const Timer timer;
  const CrossingTotals totals = simulate_crossings(config);
  const double b =
      channel::curvature_b(config.model, config.scenario.lambda_m);
  const double lambda = config.scenario.lambda_m;

  ResultTable lcr;
  lcr.experiment = "lcr";
  lcr.extra_columns = {"analytic_per_wavelength", "empirical_per_wavelength"};
  ResultTable afd;
  afd.experiment = "afd";
  afd.extra_columns = {"analytic_over_lambda", "empirical_over_lambda"};

  for (std::size_t t = 0; t < config.thresholds_db.size(); ++t) {
    const double db = config.thresholds_db[t];
    const double s = db_to_linear(db);

    const double lcr_true = analytics::lcr_closed_form(config.scenario, b, s);
    const estimators::EstimateWithCI lcr_hat = estimators::rate_estimate(
        totals.up[t], 1.0 / totals.span_m, totals.up_events[t]);
    ResultRow lcr_row = make_row(db, s, lcr_true, lcr_hat);
    lcr_row.extras = {lcr_true * lambda, lcr_hat.value * lambda};
    lcr.rows.push_back(std::move(lcr_row));

    const double afd_true = analytics::afd_closed_form(config.scenario, b, s);
    ResultRow afd_row;
    if (totals.down_events[t] > 0) {
      const estimators::EstimateWithCI afd_hat =
          estimators::ratio_estimate(totals.fade[t], totals.down_events[t]);
      afd_row = make_row(db, s, afd_true, afd_hat);
      afd_row.extras = {afd_true / lambda, afd_hat.value / lambda};
    } else {
      afd_row = make_row(db, s, afd_true, {kNaN, kNaN, kNaN, 0});
      afd_row.low_confidence = true;
      afd_row.extras = {afd_true / lambda, kNaN};
    }
    afd.rows.push_back(std::move(afd_row));
  }
  stamp(lcr, config, timer);
  stamp(afd, config, timer);
  return {std::move(lcr), std::move(afd)};
}

ResultTable run_lcr_experiment(const ExperimentConfig& config) {
  return run_crossing_experiments(config).first;
}

ResultTable run_afd_experiment(const ExperimentConfig& config) {
  return run_crossing_experiments(config).second;
}

ResultTable run_sup_cdf_experiment(const ExperimentConfig& config) {
  config.validate();
  const Timer timer;
  const double lambda = config.scenario.lambda_m;
  const channel::SpatialGrid grid(config.scenario.length_m,
                                  lambda / config.grid_points_per_wavelength);
  const channel::CovarianceFactor& factor =
      cached_factor(config.model, grid, lambda);
  const double b = channel::curvature_b(config.model, lambda);

  std::vector<double> sups(config.n_realizations);
  parallel_for(config.n_realizations, [&](std::size_t r) {
    const sirproc::SirTrace trace = simulate_trace(config, factor, r);
    sups[r] = sirproc::supremum(trace, config.refine_supremum).value;
  });

  const std::vector<double> thresholds = config.thresholds_linear();
  const std::vector<estimators::EstimateWithCI> cdf =
      estimators::empirical_cdf(sups, thresholds);

  ResultTable table;
  table.experiment = "cdf_sup";
  table.extra_columns = {"bound_unclamped", "marginal_cdf"};
  for (std::size_t t = 0; t < thresholds.size(); ++t) {
    const double s = thresholds[t];
    const double bound =
        analytics::cdf_sup_lower_bound(config.scenario, b, s);
    ResultRow row =
        make_row(config.thresholds_db[t], s, std::max(0.0, bound), cdf[t]);
    row.extras = {bound, analytics::cdf_sir(config.scenario, s)};
    table.rows.push_back(std::move(row));
  }
  stamp(table, config, timer);
  return table;
}

ResultTable run_dfas_comparison(const ExperimentConfig& config) {
  config.validate();
  const Timer timer;
  const double lambda = config.scenario.lambda_m;
  const channel::SpatialGrid grid(config.scenario.length_m,
                                  lambda / config.grid_points_per_wavelength);
  const channel::CovarianceFactor& primary =
      cached_factor(config.model, grid, lambda);
  detail::require(config.dfas_ports <= grid.size(),
                  "config: dfas_ports exceeds the grid size");

  const bool with_pair =
      config.include_sinc_pair &&
      config.model.kind != channel::CorrelationKind::Quadratic;
  channel::CorrelationModel pair_model =
      config.model.kind == channel::CorrelationKind::Jakes2D
          ? channel::CorrelationModel::sinc3d()
          : channel::CorrelationModel::jakes2d();
  const channel::CovarianceFactor* pair =
      with_pair ? &cached_factor(pair_model, grid, lambda) : nullptr;

  const auto links =
      static_cast<std::size_t>(1 + config.scenario.n_interferers);
  const std::size_t draw_rank =
      std::max(primary.rank(), pair ? pair->rank() : 0);

  struct Sample {
    double sup = 0.0;
    double port = 0.0;
    double pair_sup = 0.0;
  };
  std::vector<Sample> samples(config.n_realizations);
  parallel_for(config.n_realizations, [&](std::size_t r) {
    // One coefficient block per realization; both models consume the same
    // leading rows, which is what couples them (common random numbers).
    const Eigen::MatrixXd z = channel::gaussian_coefficients(
        draw_rank, links, config.seed, r * links);
    Eigen::VectorXcd desired;
    Eigen::MatrixXcd interferers;

    const Eigen::MatrixXd x =
        primary.factor *
        z.topRows(static_cast<Eigen::Index>(primary.rank()));
    split_links(x, config.scenario.beta0, config.scenario.beta_i, desired,
                interferers);
    const sirproc::SirTrace trace{
        grid, sirproc::sir_from_samples(desired, interferers)};
    samples[r].sup =
        sirproc::supremum(trace, config.refine_supremum).value;
    samples[r].port = sirproc::dfas_select(trace, config.dfas_ports);

    if (pair) {
      const Eigen::MatrixXd xp =
          pair->factor * z.topRows(static_cast<Eigen::Index>(pair->rank()));
      split_links(xp, config.scenario.beta0, config.scenario.beta_i, desired,
                  interferers);
      const sirproc::SirTrace pair_trace{
          grid, sirproc::sir_from_samples(desired, interferers)};
      samples[r].pair_sup =
          sirproc::supremum(pair_trace, config.refine_supremum).value;
    }
  });

  std::vector<double> sups(config.n_realizations);
  std::vector<double> ports(config.n_realizations);
  std::vector<double> pair_sups(pair ? config.n_realizations : 0);
  for (std::size_t r = 0; r < config.n_realizations; ++r) {
    sups[r] = samples[r].sup;
    ports[r] = samples[r].port;
    if (pair) pair_sups[r] = samples[r].pair_sup;
  }

  const std::vector<double> thresholds = config.thresholds_linear();
  const auto cdf_sup = estimators::empirical_cdf(sups, thresholds);
  const auto cdf_port = estimators::empirical_cdf(ports, thresholds);
  std::vector<estimators::EstimateWithCI> cdf_pair;
  if (pair) cdf_pair = estimators::empirical_cdf(pair_sups, thresholds);

  const double b = channel::curvature_b(config.model, lambda);
  ResultTable table;
  table.experiment = "dfas_comparison";
  table.extra_columns = {"dfas_empirical", "dfas_ci_low", "dfas_ci_high"};
  if (pair) {
    const std::string prefix = channel::kind_name(pair_model.kind);
    table.extra_columns.push_back(prefix + "_empirical");
    table.extra_columns.push_back(prefix + "_ci_low");
    table.extra_columns.push_back(prefix + "_ci_high");
  }
  for (std::size_t t = 0; t < thresholds.size(); ++t) {
    const double s = thresholds[t];
    const double bound =
        analytics::cdf_sup_lower_bound(config.scenario, b, s);
    ResultRow row = make_row(config.thresholds_db[t], s, std::max(0.0, bound),
                             cdf_sup[t]);
    row.extras = {cdf_port[t].value, cdf_port[t].ci_low, cdf_port[t].ci_high};
    if (pair) {
      row.extras.push_back(cdf_pair[t].value);
      row.extras.push_back(cdf_pair[t].ci_low);
      row.extras.push_back(cdf_pair[t].ci_high);
    }
    table.rows.push_back(std::move(row));
  }
  stamp(table, config, timer);
  return table;
}

ResultTable run_channel_validation(const ExperimentConfig& config) {
  config.validate();
  const Timer timer;
  const double lambda = config.scenario.lambda_m;
  const channel::SpatialGrid grid(2.0 * lambda,
                                  lambda / config.grid_points_per_wavelength);
  const channel::CovarianceFactor& factor =
      cached_factor(config.model, grid, lambda);

  const auto gppw = static_cast<std::size_t>(config.grid_points_per_wavelength);
  std::vector<std::size_t> lags{0, gppw / 8, gppw / 4, gppw / 2, gppw};
  lags.erase(std::unique(lags.begin(), lags.end()), lags.end());

  // Fields for the derivative-variance check are retained from the head of
  // the run; the estimator needs at least 10^3 of them.
  const std::size_t keep =
      std::min<std::size_t>(config.n_realizations, 10000);

  std::vector<std::vector<double>> correlations(config.n_realizations);
  std::vector<channel::ComplexField> kept(keep,
                                          {grid, Eigen::VectorXcd(), 1.0});
  parallel_for(config.n_realizations, [&](std::size_t r) {
    std::vector<channel::ComplexField> field = channel::sample_field(
        factor, config.scenario.beta0, 1, config.seed, r);
    const Eigen::VectorXcd& x = field.front().samples;
    // Per-realization lag moments; their spread across realizations gives
    // the interval on the pooled estimate.
    std::vector<double>& mine = correlations[r];
    mine.reserve(lags.size());
    for (std::size_t lag : lags) {
      const auto pairs = static_cast<Eigen::Index>(grid.size() - lag);
      const std::complex<double> dot =
          x.head(pairs).dot(x.tail(pairs));
      mine.push_back(dot.real() /
                     (config.scenario.beta0 * static_cast<double>(pairs)));
    }
    if (r < keep) kept[r] = std::move(field.front());
  });

  std::vector<estimators::RateAccumulator> acc(lags.size());
  for (const std::vector<double>& values : correlations)
    for (std::size_t i = 0; i < lags.size(); ++i) acc[i].add(values[i]);

  ResultTable table;
  table.experiment = "channel_validation";
  table.x_db_label = "lag_over_lambda";
  table.x_linear_label = "lag_m";
  for (std::size_t i = 0; i < lags.size(); ++i) {
    const double lag_m = grid.step() * static_cast<double>(lags[i]);
    const double model_rho =
        channel::correlation(config.model, lag_m, lambda);
    const estimators::EstimateWithCI estimate = estimators::rate_estimate(
        acc[i], 1.0, config.n_realizations);
    table.rows.push_back(
        make_row(lag_m / lambda, lag_m, model_rho, estimate));
  }

  if (keep >= 1000 && grid.step() <= lambda / 100.0 * (1.0 + 1e-12)) {
    const double variance = estimators::derivative_variance(kept, lambda);
    ResultRow row = make_row(-1.0, -1.0,
                             channel::curvature_b(config.model, lambda),
                             {variance, variance, variance, keep});
    row.low_confidence = false;
    table.rows.push_back(std::move(row));
  }
  stamp(table, config, timer);
  return table;
}

}  // namespace cfas::experiments
