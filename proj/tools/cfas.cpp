// Command-line front end: experiment runners plus closed-form evaluation.
// Exit codes: 0 success, 2 usage or configuration errors, 1 runtime
// failures.

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cfas/analytics.hpp"
#include "cfas/correlation.hpp"
#include "cfas/errors.hpp"
#include "cfas/experiments.hpp"

namespace {

using cfas::experiments::ExperimentConfig;
using cfas::experiments::ResultTable;

struct ExperimentOptions {
  std::string config_path;
  std::string out_path;
  std::string format = "csv";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> realizations;
  std::optional<std::string> thresholds_db;
  std::optional<std::string> model;
  std::optional<std::size_t> ports;
  std::optional<double> length_cm;
};

void add_experiment_options(CLI::App* cmd, ExperimentOptions& opts) {
  cmd->add_option("--config", opts.config_path,
                  "JSON config file; flags below override its keys");
  cmd->add_option("--out", opts.out_path,
                  "output path ('-' for stdout; default derived from config)");
  cmd->add_option("--format", opts.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--seed", opts.seed, "RNG seed");
  cmd->add_option("--realizations", opts.realizations,
                  "Monte Carlo realization count");
  cmd->add_option("--thresholds-db", opts.thresholds_db,
                  "threshold grid lo:step:hi in dB");
  cmd->add_option("--model", opts.model, "correlation model")
      ->check(CLI::IsMember({"jakes2d", "sinc3d"}));
  cmd->add_option("--ports", opts.ports, "port count for the discrete system");
  cmd->add_option("--length-cm", opts.length_cm, "aperture length in cm");
}

ExperimentConfig load_config(const ExperimentOptions& opts) {
  nlohmann::json j = nlohmann::json::object();
  if (!opts.config_path.empty()) {
    std::ifstream in(opts.config_path);
    if (!in)
      throw cfas::invalid_parameter("cannot read config file '" +
                                    opts.config_path + "'");
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw cfas::invalid_parameter("config file '" + opts.config_path +
                                    "': " + e.what());
    }
  }
  if (opts.seed) j["seed"] = *opts.seed;
  if (opts.realizations) j["n_realizations"] = *opts.realizations;
  if (opts.thresholds_db) j["thresholds_db"] = *opts.thresholds_db;
  if (opts.model) j["model"] = *opts.model;
  if (opts.ports) j["dfas_ports"] = *opts.ports;
  if (opts.length_cm) j["length_m"] = *opts.length_cm / 100.0;
  return ExperimentConfig::from_json(j);
}

std::string default_out_path(const ResultTable& table,
                             const ExperimentConfig& config,
                             const std::string& format) {
  std::ostringstream name;
  name << table.experiment << '_'
       << cfas::channel::kind_name(config.model.kind) << "_N"
       << config.scenario.n_interferers << "_R" << config.n_realizations
       << "_seed" << config.seed << '.' << format;
  return name.str();
}

void emit(const ResultTable& table, const ExperimentConfig& config,
          const ExperimentOptions& opts) {
  std::string payload;
  if (opts.format == "csv")
    payload = table.csv();
  else
    payload = table.to_json().dump(2) + "\n";

  if (opts.out_path == "-") {
    std::cout << payload;
    return;
  }
  const std::string path = opts.out_path.empty()
                               ? default_out_path(table, config, opts.format)
                               : opts.out_path;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << payload;
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
  std::cout << "wrote " << path << "\n";
}

struct EvalOptions {
  std::string form;
  int n = 1;
  double beta0 = 1.0;
  double beta_i = 2.0;
  double lambda_m = 0.01;
  double s = 1.0;
  double r = 1.0;
  double tau_m = 0.0;
  double length_cm = 1.0;
  std::optional<double> b;
  std::string model = "jakes2d";
};

double evaluate_form(const EvalOptions& opts) {
  namespace analytics = cfas::analytics;
  namespace channel = cfas::channel;
  using analytics::SRegime;
  using analytics::TRegime;

  cfas::sirproc::ScenarioParams params;
  params.beta0 = opts.beta0;
  params.beta_i = opts.beta_i;
  params.n_interferers = opts.n;
  params.lambda_m = opts.lambda_m;
  params.length_m = opts.length_cm / 100.0;

  channel::CorrelationModel model;
  model.kind = channel::parse_kind(opts.model);
  const double b = opts.b ? *opts.b
                          : channel::curvature_b(model, opts.lambda_m);

  const std::map<std::string, std::function<double()>> forms{
      {"lcr",
       [&] { return analytics::lcr_closed_form(params, b, opts.s); }},
      {"afd",
       [&] { return analytics::afd_closed_form(params, b, opts.s); }},
      {"cdf-sir", [&] { return analytics::cdf_sir(params, opts.s); }},
      {"cdf-sup-bound",
       [&] { return analytics::cdf_sup_lower_bound(params, b, opts.s); }},
      {"lcr-envelope-ratio",
       [&] { return analytics::lcr_envelope_ratio(opts.r, opts.n, b); }},
      {"lcr-equal-beta",
       [&] {
         return analytics::lcr_equal_beta(opts.n, opts.lambda_m, opts.s);
       }},
      {"afd-equal-beta",
       [&] {
         return analytics::afd_equal_beta(opts.n, opts.lambda_m, opts.s);
       }},
      {"lcr-small-s",
       [&] {
         return analytics::lcr_asymptotic(params, b, opts.s, SRegime::SmallS);
       }},
      {"lcr-large-s",
       [&] {
         return analytics::lcr_asymptotic(params, b, opts.s, SRegime::LargeS);
       }},
      {"afd-small-s",
       [&] {
         return analytics::afd_asymptotic(params, b, opts.s, SRegime::SmallS);
       }},
      {"afd-large-s",
       [&] {
         return analytics::afd_asymptotic(params, b, opts.s, SRegime::LargeS);
       }},
      {"cdf-sup-small-t",
       [&] {
         return analytics::cdf_sup_asymptotic(params, b, opts.s,
                                              TRegime::SmallT)
             .value;
       }},
      {"cdf-sup-tail",
       [&] {
         return analytics::cdf_sup_asymptotic(params, b, opts.s, TRegime::Tail)
             .value;
       }},
      {"curvature-b", [&] { return b; }},
      {"correlation",
       [&] {
         return channel::correlation(model, opts.tau_m, opts.lambda_m);
       }},
  };

  const auto it = forms.find(opts.form);
  if (it == forms.end()) {
    std::string names;
    for (const auto& [name, fn] : forms) names += name + " ";
    throw cfas::invalid_parameter("unknown form '" + opts.form +
                                  "'; available: " + names);
  }
  return it->second();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spatial SIR statistics for continuous fluid antennas"};
  app.set_version_flag("--version", "0.1.0");
  app.require_subcommand(1);

  ExperimentOptions lcr_opts, afd_opts, sup_opts, dfas_opts, chan_opts;
  using Runner = std::function<ResultTable(const ExperimentConfig&)>;
  struct Command {
    CLI::App* cmd;
    ExperimentOptions* opts;
    Runner run;
  };
  std::vector<Command> commands{
      {app.add_subcommand("lcr", "level-crossing rate vs threshold"),
       &lcr_opts, cfas::experiments::run_lcr_experiment},
      {app.add_subcommand("afd", "average fade extent vs threshold"),
       &afd_opts, cfas::experiments::run_afd_experiment},
      {app.add_subcommand("cdf-sup",
                          "supremum CDF vs its analytic lower bound"),
       &sup_opts, cfas::experiments::run_sup_cdf_experiment},
      {app.add_subcommand("compare-dfas",
                          "continuous supremum vs discrete port selection"),
       &dfas_opts, cfas::experiments::run_dfas_comparison},
      {app.add_subcommand("validate-channel",
                          "empirical correlation and derivative variance"),
       &chan_opts, cfas::experiments::run_channel_validation},
  };
  for (Command& c : commands) add_experiment_options(c.cmd, *c.opts);

  EvalOptions eval_opts;
  CLI::App* eval = app.add_subcommand("eval", "print one closed form value");
  eval->add_option("--form", eval_opts.form, "which closed form")->required();
  eval->add_option("--n", eval_opts.n, "number of interferers");
  eval->add_option("--beta0", eval_opts.beta0, "desired link power");
  eval->add_option("--betaI", eval_opts.beta_i, "interferer power");
  eval->add_option("--lambda", eval_opts.lambda_m, "wavelength in meters");
  eval->add_option("--s", eval_opts.s, "linear SIR threshold");
  eval->add_option("--r", eval_opts.r, "envelope ratio level");
  eval->add_option("--tau", eval_opts.tau_m, "spatial lag in meters");
  eval->add_option("--length-cm", eval_opts.length_cm,
                   "aperture length in cm");
  eval->add_option("--b", eval_opts.b, "correlation curvature override");
  eval->add_option("--model", eval_opts.model, "correlation model")
      ->check(CLI::IsMember({"jakes2d", "sinc3d"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (eval->parsed()) {
      char buffer[40];
      std::snprintf(buffer, sizeof(buffer), "%.9g", evaluate_form(eval_opts));
      std::cout << buffer << "\n";
      return 0;
    }
    for (const Command& c : commands) {
      if (!c.cmd->parsed()) continue;
      const ExperimentConfig config = load_config(*c.opts);
      emit(c.run(config), config, *c.opts);
      return 0;
    }
    std::cerr << "no subcommand\n";
    return 2;
  } catch (const cfas::invalid_parameter& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
