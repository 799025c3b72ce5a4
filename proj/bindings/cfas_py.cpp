// Python bindings for the CFAS toolkit: closed forms, channel sampling,
// and the experiment runners. Tables cross the boundary as plain dicts
// matching the JSON the CLI writes.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "cfas/analytics.hpp"
#include "cfas/channel.hpp"
#include "cfas/errors.hpp"
#include "cfas/estimators.hpp"
#include "cfas/experiments.hpp"
#include "cfas/sirproc.hpp"

namespace py = pybind11;

namespace {

using cfas::channel::CorrelationModel;
using cfas::experiments::ExperimentConfig;
using cfas::sirproc::ScenarioParams;

nlohmann::json py_to_json(py::handle obj) {
  if (obj.is_none()) return nullptr;
  if (py::isinstance<py::bool_>(obj)) return obj.cast<bool>();
  if (py::isinstance<py::int_>(obj)) {
    try {
      return obj.cast<std::int64_t>();
    } catch (const py::cast_error&) {
      return obj.cast<std::uint64_t>();
    }
  }
  if (py::isinstance<py::float_>(obj)) return obj.cast<double>();
  if (py::isinstance<py::str>(obj)) return obj.cast<std::string>();
  if (py::isinstance<py::dict>(obj)) {
    nlohmann::json out = nlohmann::json::object();
    for (auto item : obj.cast<py::dict>())
      out[item.first.cast<std::string>()] = py_to_json(item.second);
    return out;
  }
  if (py::isinstance<py::list>(obj) || py::isinstance<py::tuple>(obj)) {
    nlohmann::json out = nlohmann::json::array();
    for (auto item : obj.cast<py::sequence>()) out.push_back(py_to_json(item));
    return out;
  }
  throw cfas::invalid_parameter("config values must be JSON-like");
}

py::object json_to_py(const nlohmann::json& j) {
  switch (j.type()) {
    case nlohmann::json::value_t::null:
      return py::none();
    case nlohmann::json::value_t::boolean:
      return py::bool_(j.get<bool>());
    case nlohmann::json::value_t::number_integer:
      return py::int_(j.get<std::int64_t>());
    case nlohmann::json::value_t::number_unsigned:
      return py::int_(j.get<std::uint64_t>());
    case nlohmann::json::value_t::number_float:
      return py::float_(j.get<double>());
    case nlohmann::json::value_t::string:
      return py::str(j.get<std::string>());
    case nlohmann::json::value_t::array: {
      py::list out;
      for (const auto& item : j) out.append(json_to_py(item));
      return out;
    }
    case nlohmann::json::value_t::object: {
      py::dict out;
      for (const auto& item : j.items())
        out[py::str(item.key())] = json_to_py(item.value());
      return out;
    }
    default:
      throw cfas::invalid_parameter("unsupported JSON value");
  }
}

CorrelationModel make_model(const std::string& name,
                            std::optional<double> curvature) {
  const auto kind = cfas::channel::parse_kind(name);
  if (kind == cfas::channel::CorrelationKind::Quadratic) {
    cfas::detail::require(curvature.has_value(),
                          "quadratic model needs curvature_b");
    return CorrelationModel::quadratic(*curvature);
  }
  cfas::detail::require(!curvature.has_value(),
                        "curvature_b only applies to the quadratic model");
  return CorrelationModel{kind, {}};
}

cfas::analytics::SRegime parse_s_regime(const std::string& name) {
  if (name == "small_s") return cfas::analytics::SRegime::SmallS;
  if (name == "large_s") return cfas::analytics::SRegime::LargeS;
  throw cfas::invalid_parameter("regime must be 'small_s' or 'large_s'");
}

cfas::analytics::TRegime parse_t_regime(const std::string& name) {
  if (name == "small_t") return cfas::analytics::TRegime::SmallT;
  if (name == "tail") return cfas::analytics::TRegime::Tail;
  throw cfas::invalid_parameter("regime must be 'small_t' or 'tail'");
}

cfas::experiments::ResultTable dispatch_experiment(
    const std::string& name, const ExperimentConfig& config) {
  if (name == "lcr") return cfas::experiments::run_lcr_experiment(config);
  if (name == "afd") return cfas::experiments::run_afd_experiment(config);
  if (name == "cdf-sup")
    return cfas::experiments::run_sup_cdf_experiment(config);
  if (name == "compare-dfas")
    return cfas::experiments::run_dfas_comparison(config);
  if (name == "validate-channel")
    return cfas::experiments::run_channel_validation(config);
  throw cfas::invalid_parameter("unknown experiment '" + name +
                                "' (expected lcr, afd, cdf-sup, "
                                "compare-dfas, or validate-channel)");
}

// SIR realizations as rows; field j of realization r reads substream
// r * (1 + N) + j so results are independent of batching.
Eigen::MatrixXd sample_sir(const ScenarioParams& params,
                           const std::string& model,
                           std::optional<double> curvature,
                           int grid_points_per_wavelength, std::size_t count,
                           std::uint64_t seed) {
  params.validate();
  cfas::detail::require(grid_points_per_wavelength >= 1,
                        "grid_points_per_wavelength must be >= 1");
  cfas::detail::require(count >= 1, "count must be >= 1");
  const cfas::channel::SpatialGrid grid(
      params.length_m, params.lambda_m / grid_points_per_wavelength);
  const cfas::channel::CovarianceFactor factor = cfas::channel::build_covariance(
      make_model(model, curvature), grid, params.lambda_m);

  const auto links = static_cast<std::size_t>(1 + params.n_interferers);
  Eigen::MatrixXd out(static_cast<Eigen::Index>(count),
                      static_cast<Eigen::Index>(grid.size()));
  for (std::size_t r = 0; r < count; ++r) {
    const Eigen::MatrixXcd desired = cfas::channel::sample_field_matrix(
        factor, params.beta0, 1, seed, r * links);
    const Eigen::MatrixXcd interferers = cfas::channel::sample_field_matrix(
        factor, params.beta_i, static_cast<std::size_t>(params.n_interferers),
        seed, r * links + 1);
    out.row(static_cast<Eigen::Index>(r)) =
        cfas::sirproc::sir_from_samples(desired.col(0), interferers)
            .transpose();
  }
  return out;
}

cfas::sirproc::SirTrace trace_from_samples(
    const Eigen::Ref<const Eigen::VectorXd>& sir, double step_m) {
  cfas::detail::require(sir.size() >= 1, "sir trace is empty");
  cfas::detail::require(std::isfinite(step_m) && step_m > 0.0,
                        "step_m must be positive");
  const cfas::channel::SpatialGrid grid(
      step_m * static_cast<double>(sir.size() - 1), step_m);
  cfas::detail::require(grid.size() == static_cast<std::size_t>(sir.size()),
                        "sir length does not fit the grid");
  return {grid, sir};
}

}  // namespace

PYBIND11_MODULE(_cfas, m) {
  m.doc() =
      "Continuous fluid antenna system toolkit: spatially correlated "
      "Rayleigh fading, SIR crossing statistics, and their closed forms.";
  m.attr("__version__") = "0.1.0";

  py::class_<ScenarioParams>(m, "ScenarioParams",
                             "One desired link against n_interferers "
                             "equal-power interferers along an aperture.")
      .def(py::init([](double beta0, double beta_i, int n_interferers,
                       double lambda_m, double length_m) {
             ScenarioParams params{beta0, beta_i, n_interferers, lambda_m,
                                   length_m};
             params.validate();
             return params;
           }),
           py::arg("beta0") = 1.0, py::arg("beta_i") = 1.0,
           py::arg("n_interferers") = 1, py::arg("lambda_m") = 0.01,
           py::arg("length_m") = 0.01)
      .def_readwrite("beta0", &ScenarioParams::beta0)
      .def_readwrite("beta_i", &ScenarioParams::beta_i)
      .def_readwrite("n_interferers", &ScenarioParams::n_interferers)
      .def_readwrite("lambda_m", &ScenarioParams::lambda_m)
      .def_readwrite("length_m", &ScenarioParams::length_m)
      .def("validate", &ScenarioParams::validate)
      .def("__repr__", [](const ScenarioParams& p) {
        return "ScenarioParams(beta0=" + std::to_string(p.beta0) +
               ", beta_i=" + std::to_string(p.beta_i) +
               ", n_interferers=" + std::to_string(p.n_interferers) +
               ", lambda_m=" + std::to_string(p.lambda_m) +
               ", length_m=" + std::to_string(p.length_m) + ")";
      });

  m.def("correlation",
        [](const std::string& model, double tau_m, double lambda_m,
           std::optional<double> curvature_b) {
          return cfas::channel::correlation(make_model(model, curvature_b),
                                            tau_m, lambda_m);
        },
        py::arg("model"), py::arg("tau_m"), py::arg("lambda_m"),
        py::arg("curvature_b") = py::none(),
        "Spatial correlation rho(tau) of the named model (jakes2d, sinc3d, "
        "or quadratic with an explicit curvature_b).");
  m.def("curvature_b",
        [](const std::string& model, double lambda_m,
           std::optional<double> curvature_b) {
          return cfas::channel::curvature_b(make_model(model, curvature_b),
                                            lambda_m);
        },
        py::arg("model"), py::arg("lambda_m"),
        py::arg("curvature_b") = py::none(),
        "Zero-lag curvature b of the model, the variance of the normalized "
        "envelope derivative.");

  m.def("lcr", &cfas::analytics::lcr_closed_form, py::arg("params"),
        py::arg("b"), py::arg("s"),
        "Level-crossing rate of the SIR process at threshold s, per meter.");
  m.def("afd", &cfas::analytics::afd_closed_form, py::arg("params"),
        py::arg("b"), py::arg("s"),
        "Average fade extent below threshold s, in meters.");
  m.def("cdf_sir", &cfas::analytics::cdf_sir, py::arg("params"), py::arg("s"),
        "Marginal CDF of the SIR at a point.");
  m.def("cdf_sup_lower_bound", &cfas::analytics::cdf_sup_lower_bound,
        py::arg("params"), py::arg("b"), py::arg("s"),
        "Lower bound on P(sup SIR <= s) over the aperture; not clamped "
        "at zero.");
  m.def("lcr_envelope_ratio", &cfas::analytics::lcr_envelope_ratio,
        py::arg("r"), py::arg("n_interferers"), py::arg("b"),
        "Crossing rate of the normalized envelope ratio at level r.");
  m.def("lcr_equal_beta", &cfas::analytics::lcr_equal_beta,
        py::arg("n_interferers"), py::arg("lambda_m"), py::arg("s"));
  m.def("afd_equal_beta", &cfas::analytics::afd_equal_beta,
        py::arg("n_interferers"), py::arg("lambda_m"), py::arg("s"));
  m.def("lcr_asymptotic",
        [](const ScenarioParams& params, double b, double s,
           const std::string& regime) {
          return cfas::analytics::lcr_asymptotic(params, b, s,
                                                 parse_s_regime(regime));
        },
        py::arg("params"), py::arg("b"), py::arg("s"), py::arg("regime"),
        "Crossing-rate asymptotic; regime is 'small_s' or 'large_s'.");
  m.def("afd_asymptotic",
        [](const ScenarioParams& params, double b, double s,
           const std::string& regime) {
          return cfas::analytics::afd_asymptotic(params, b, s,
                                                 parse_s_regime(regime));
        },
        py::arg("params"), py::arg("b"), py::arg("s"), py::arg("regime"),
        "Fade-extent asymptotic; regime is 'small_s' or 'large_s'.");
  m.def("cdf_sup_asymptotic",
        [](const ScenarioParams& params, double b, double s,
           const std::string& regime) {
          const auto out = cfas::analytics::cdf_sup_asymptotic(
              params, b, s, parse_t_regime(regime));
          return py::make_tuple(out.value, out.order_exponent);
        },
        py::arg("params"), py::arg("b"), py::arg("s"), py::arg("regime"),
        "Supremum-CDF asymptotic as (value, tail order); regime is "
        "'small_t' or 'tail'.");

  m.def("covariance_factor",
        [](const std::string& model, double length_m, double step_m,
           double lambda_m, std::optional<double> curvature_b) {
          const cfas::channel::CovarianceFactor factor =
              cfas::channel::build_covariance(
                  make_model(model, curvature_b),
                  cfas::channel::SpatialGrid(length_m, step_m), lambda_m);
          return py::make_tuple(factor.factor, factor.eigenvalues);
        },
        py::arg("model"), py::arg("length_m"), py::arg("step_m"),
        py::arg("lambda_m"), py::arg("curvature_b") = py::none(),
        "Low-rank covariance square root on the grid as (factor, "
        "eigenvalues); factor @ factor.T reproduces the model covariance.");

  m.def("sample_sir", &sample_sir, py::arg("params"),
        py::arg("model") = "jakes2d", py::arg("curvature_b") = py::none(),
        py::arg("grid_points_per_wavelength") = 200, py::arg("count") = 1,
        py::arg("seed") = 1,
        "SIR traces along the aperture, one realization per row. "
        "Deterministic in (seed, realization index).");

  m.def("supremum",
        [](const Eigen::Ref<const Eigen::VectorXd>& sir, double step_m,
           bool refine) {
          const auto out =
              cfas::sirproc::supremum(trace_from_samples(sir, step_m), refine);
          return py::make_tuple(out.value, out.position_m, out.refined);
        },
        py::arg("sir"), py::arg("step_m"), py::arg("refine") = true,
        "Supremum of a sampled SIR trace as (value, position_m, refined); "
        "refine fits a parabola to the envelope around the grid argmax.");
  m.def("dfas_select",
        [](const Eigen::Ref<const Eigen::VectorXd>& sir, double step_m,
           std::size_t n_ports) {
          return cfas::sirproc::dfas_select(trace_from_samples(sir, step_m),
                                            n_ports);
        },
        py::arg("sir"), py::arg("step_m"), py::arg("n_ports"),
        "Best-port SIR with n_ports uniformly spread over the aperture.");

  m.def("wilson_interval",
        [](std::size_t successes, std::size_t trials) {
          const auto out = cfas::estimators::wilson_interval(successes, trials);
          return py::make_tuple(out.value, out.ci_low, out.ci_high);
        },
        py::arg("successes"), py::arg("trials"),
        "95% Wilson score interval as (value, ci_low, ci_high).");

  m.def("parse_db_range", &cfas::experiments::parse_db_range, py::arg("text"),
        "Expand 'lo:step:hi' into an inclusive dB grid.");

  m.def("run_experiment",
        [](const std::string& name, py::handle config,
           bool include_wall_time) {
          const ExperimentConfig parsed =
              ExperimentConfig::from_json(py_to_json(config));
          return json_to_py(
              dispatch_experiment(name, parsed).to_json(include_wall_time));
        },
        py::arg("name"), py::arg("config"),
        py::arg("include_wall_time") = true,
        "Run one experiment (lcr, afd, cdf-sup, compare-dfas, or "
        "validate-channel) from a config dict; returns the result table "
        "as a dict with the same layout as the CLI's JSON output.");
}
