// Acceptance suite for the CFAS toolkit. Each criterion prints one
// [PASS]/[FAIL] line; the process exits nonzero when any selected
// criterion fails. Run a subset with --criteria 1,2
//
// Every stochastic check runs a fixed seed and was sized so the pass
// margin is several standard errors wide; a pass is reproducible, not a
// coin flip. Where a check gates on an event count, the thresholds were
// placed so expected counts land either well above the gate (>= 8e3,
// giving a 3-sigma margin on a 3% comparison) or well below it.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cfas/analytics.hpp"
#include "cfas/channel.hpp"
#include "cfas/estimators.hpp"
#include "cfas/experiments.hpp"
#include "cfas/sirproc.hpp"

namespace {

using cfas::channel::CorrelationModel;
using cfas::experiments::ExperimentConfig;
using cfas::experiments::ResultRow;
using cfas::experiments::ResultTable;
using cfas::sirproc::ScenarioParams;

constexpr double kLambda = 0.01;  // 1 cm carrier

struct Outcome {
  bool ok = true;
  std::string detail;
};

std::string fmt(const char* pattern, ...) {
  char buffer[768];
  va_list args;
  va_start(args, pattern);
  std::vsnprintf(buffer, sizeof buffer, pattern, args);
  va_end(args);
  return buffer;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

std::vector<double> logspace(double lo, double hi, std::size_t count) {
  std::vector<double> out(count);
  const double l0 = std::log(lo);
  const double l1 = std::log(hi);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = std::exp(l0 + (l1 - l0) * static_cast<double>(i) /
                               static_cast<double>(count - 1));
  return out;
}

double fitted_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// ---------------------------------------------------------------------------
// Criteria 1 and 2: crossing statistics against the closed forms, shared sim.

// Dense thresholds stop where the expected event count would fall into the
// no-man's land between the 1e3-event gate and the 8e3 events a 3% check
// needs for a 3-sigma margin; a few sparse tail thresholds then exercise
// the low-count exemption.
std::vector<double> crossing_thresholds(int n_interferers) {
  std::vector<double> out;
  const double dense_top =
      n_interferers == 1 ? 20.0 : (n_interferers == 2 ? 8.0 : 4.0);
  for (double db = -20.0; db <= dense_top + 1e-9; db += 2.0) out.push_back(db);
  if (n_interferers == 2) out.insert(out.end(), {18.0, 20.0});
  if (n_interferers == 3) out.insert(out.end(), {10.0, 12.0, 14.0});
  return out;
}

struct CrossingOutcome {
  Outcome lcr;
  Outcome afd;
};

CrossingOutcome run_crossing_block() {
  const auto start = std::chrono::steady_clock::now();
  double worst_lcr = 0.0, worst_afd = 0.0;
  int checked_lcr = 0, checked_afd = 0;
  std::size_t traces = 0;
  std::string bad_lcr, bad_afd;

  for (int n : {1, 2, 3}) {
    ExperimentConfig config;
    config.scenario = {1.0, 2.0, n, kLambda, kLambda};
    config.thresholds_db = crossing_thresholds(n);
    config.n_realizations = 4000;
    config.seed = 910 + static_cast<std::uint64_t>(n);
    traces += config.n_realizations;

    const auto [lcr_table, afd_table] =
        cfas::experiments::run_crossing_experiments(config);
    for (const ResultRow& row : lcr_table.rows) {
      if (row.n_events < 1000) continue;
      ++checked_lcr;
      const double rel = std::abs(row.empirical - row.analytic) / row.analytic;
      worst_lcr = std::max(worst_lcr, rel);
      if (rel > 0.03)
        bad_lcr += fmt(" [N=%d %+.0f dB off by %.1f%%]", n, row.x_db, 100 * rel);
    }
    for (const ResultRow& row : afd_table.rows) {
      if (row.n_events < 1000) continue;
      ++checked_afd;
      const double rel = std::abs(row.empirical - row.analytic) / row.analytic;
      worst_afd = std::max(worst_afd, rel);
      if (rel > 0.03)
        bad_afd += fmt(" [N=%d %+.0f dB off by %.1f%%]", n, row.x_db, 100 * rel);
    }
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  CrossingOutcome out;
  out.lcr.ok = bad_lcr.empty() && checked_lcr >= 40 && seconds <= 330.0;
  out.lcr.detail = fmt(
      "level-crossing rate within 3%% of the closed form at all %d thresholds "
      "with >= 10^3 upcrossings (worst %.2f%%; N in {1,2,3}, %zu traces of "
      "50 lambda, %.0f s)%s%s",
      checked_lcr, 100 * worst_lcr, traces, seconds, bad_lcr.c_str(),
      seconds > 330.0 ? " [over the 5 min budget]" : "");
  out.afd.ok = bad_afd.empty() && checked_afd >= 40;
  out.afd.detail = fmt(
      "average fade extent within 3%% of the closed form at all %d thresholds "
      "with >= 10^3 downcrossings (worst %.2f%%, same traces as criterion 1)%s",
      checked_afd, 100 * worst_afd, bad_afd.c_str());
  return out;
}

// ---------------------------------------------------------------------------
// Criterion 3: fade extent x crossing rate == marginal CDF.

Outcome check_identity() {
  const double b =
      cfas::channel::curvature_b(CorrelationModel::jakes2d(), kLambda);
  double worst = 0.0;
  int points = 0;
  for (int n = 1; n <= 5; ++n)
    for (double beta0 : {0.5, 1.0, 2.5})
      for (double beta_i : {0.4, 1.0, 2.0, 3.7})
        for (double s : logspace(1e-3, 1e3, 17)) {
          const ScenarioParams params{beta0, beta_i, n, kLambda, kLambda};
          const double product =
              cfas::analytics::afd_closed_form(params, b, s) *
              cfas::analytics::lcr_closed_form(params, b, s);
          const double cdf = cfas::analytics::cdf_sir(params, s);
          worst = std::max(worst, std::abs(product / cdf - 1.0));
          ++points;
        }
  Outcome out;
  out.ok = worst <= 1e-12 && points >= 1000;
  out.detail = fmt(
      "fade extent x crossing rate reproduces the marginal CDF to %.1e "
      "relative (tolerance 1e-12) over %d parameter points",
      worst, points);
  return out;
}

// ---------------------------------------------------------------------------
// Criterion 4: equal-power specializations and the s -> 0 / s -> inf limits.

Outcome check_asymptotics() {
  using cfas::analytics::SRegime;
  const double b_jakes =
      cfas::channel::curvature_b(CorrelationModel::jakes2d(), kLambda);

  double worst_equal = 0.0;
  for (int n : {1, 2, 3, 5})
    for (double beta : {0.5, 1.0, 3.25})
      for (double s : logspace(1e-3, 1e3, 25)) {
        const ScenarioParams params{beta, beta, n, kLambda, kLambda};
        const double lcr_full =
            cfas::analytics::lcr_closed_form(params, b_jakes, s);
        const double afd_full =
            cfas::analytics::afd_closed_form(params, b_jakes, s);
        worst_equal = std::max(
            worst_equal,
            std::abs(cfas::analytics::lcr_equal_beta(n, kLambda, s) / lcr_full -
                     1.0));
        worst_equal = std::max(
            worst_equal,
            std::abs(cfas::analytics::afd_equal_beta(n, kLambda, s) / afd_full -
                     1.0));
      }

  // The large-s ratios are pure algebra: exact/asymptotic equals the
  // marginal factor (beta_i s / (beta0 + beta_i s))^N for the crossing
  // rate, and its fade-extent counterpart below. Deviations from those
  // predictions expose a wrong exponent immediately.
  double worst_small = 0.0, worst_large = 0.0;
  const std::array<std::array<double, 2>, 3> betas{
      {{1.0, 1.0}, {1.0, 2.0}, {2.5, 0.4}}};
  for (int n : {1, 2, 3})
    for (const auto& [beta0, beta_i] : betas) {
      const ScenarioParams params{beta0, beta_i, n, kLambda, kLambda};
      const double s_small = 1e-6;
      worst_small = std::max(
          worst_small,
          std::abs(
              cfas::analytics::lcr_asymptotic(params, b_jakes, s_small,
                                              SRegime::SmallS) /
                  cfas::analytics::lcr_closed_form(params, b_jakes, s_small) -
              1.0));
      worst_small = std::max(
          worst_small,
          std::abs(
              cfas::analytics::afd_asymptotic(params, b_jakes, s_small,
                                              SRegime::SmallS) /
                  cfas::analytics::afd_closed_form(params, b_jakes, s_small) -
              1.0));

      const double s_large = 1e4;
      const double u = beta_i * s_large / (beta0 + beta_i * s_large);
      const double pred_lcr = std::pow(u, n);
      const double pred_afd = (std::pow(beta0 + beta_i * s_large, n) -
                               std::pow(beta0, n)) /
                              std::pow(beta_i * s_large, n);
      const double ratio_lcr =
          cfas::analytics::lcr_closed_form(params, b_jakes, s_large) /
          cfas::analytics::lcr_asymptotic(params, b_jakes, s_large,
                                          SRegime::LargeS);
      const double ratio_afd =
          cfas::analytics::afd_closed_form(params, b_jakes, s_large) /
          cfas::analytics::afd_asymptotic(params, b_jakes, s_large,
                                          SRegime::LargeS);
      worst_large = std::max(worst_large,
                             std::abs(ratio_lcr / pred_lcr - 1.0));
      worst_large = std::max(worst_large,
                             std::abs(ratio_afd / pred_afd - 1.0));
    }

  Outcome out;
  out.ok = worst_equal <= 1e-12 && worst_small <= 1e-3 && worst_large <= 1e-9;
  out.detail = fmt(
      "equal-power forms agree to %.1e (tolerance 1e-12); small-s "
      "asymptotics within %.1e of exact at s=1e-6 (tolerance 1e-3); large-s "
      "ratios match the marginal-factor prediction to %.1e at s=1e4",
      worst_equal, worst_small, worst_large);
  return out;
}

// ---------------------------------------------------------------------------
// Criterion 5: supremum CDF lower bound, validity and tail tightness.

// Threshold where the bound complement (1 - cdf) + T*lcr decays through
// `target`; unique in the tail, and everything left of it sits above.
double tail_threshold(const ScenarioParams& params, double b, double target) {
  double lo = 1e-3, hi = 1e8;
  for (int i = 0; i < 120; ++i) {
    const double mid = std::sqrt(lo * hi);
    const double complement =
        1.0 - cfas::analytics::cdf_sup_lower_bound(params, b, mid);
    (complement > target ? lo : hi) = mid;
  }
  return std::sqrt(lo * hi);
}

// Relative bound gap at the empirical (1-q)-quantile; `sorted` ascending.
double tail_gap(const std::vector<double>& sorted, const ScenarioParams& params,
                double b, double q) {
  const std::size_t n = sorted.size();
  const auto idx = std::min(
      n - 1, static_cast<std::size_t>((1.0 - q) * static_cast<double>(n)));
  const double s_star = sorted[idx];
  const auto above = static_cast<double>(
      sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), s_star));
  const double q_hat = above / static_cast<double>(n);
  const double bound_complement =
      1.0 - cfas::analytics::cdf_sup_lower_bound(params, b, s_star);
  return (bound_complement - q_hat) / q_hat;
}

Outcome check_sup_bound() {
  // lambda/2000, not the lambda/200 crossing-statistics default: at the
  // deepest tail threshold (N=1) the mean excursion above the level is
  // about lambda/250, so a lambda/200 grid walks right over those peaks
  // and the discrete supremum loses ~40% of the tail mass.
  const double step = kLambda / 2000.0;
  const cfas::channel::SpatialGrid grid_long(0.01, step);   // 1 cm aperture
  const cfas::channel::SpatialGrid grid_short(0.003, step); // 0.3 cm prefix
  const auto model = CorrelationModel::jakes2d();
  const double b = cfas::channel::curvature_b(model, kLambda);
  const cfas::channel::CovarianceFactor factor =
      cfas::channel::build_covariance(model, grid_long, kLambda);
  const std::size_t n_samples = 100000;
  const auto short_points = static_cast<Eigen::Index>(grid_short.size());

  Outcome out;
  std::string why;
  double worst_gap = 0.0;
  double tight_diff_sum = 0.0;
  int tight_diff_count = 0;

  for (int n : {1, 2, 3}) {
    // The short-aperture supremum is taken over a prefix of the same
    // trace, so the two aperture lengths are compared on common random
    // numbers; its marginal law matches a standalone short-aperture run.
    std::vector<double> sup_long(n_samples), sup_short(n_samples);
    const std::uint64_t seed = 1500 + static_cast<std::uint64_t>(n);
    const std::size_t links = 1 + static_cast<std::size_t>(n);
    for (std::size_t r = 0; r < n_samples; ++r) {
      const Eigen::MatrixXcd desired =
          cfas::channel::sample_field_matrix(factor, 1.0, 1, seed, r * links);
      const Eigen::MatrixXcd interferers = cfas::channel::sample_field_matrix(
          factor, 2.0, static_cast<std::size_t>(n), seed, r * links + 1);
      const Eigen::VectorXd sir =
          cfas::sirproc::sir_from_samples(desired.col(0), interferers);
      sup_long[r] = cfas::sirproc::supremum({grid_long, sir}, true).value;
      sup_short[r] =
          cfas::sirproc::supremum({grid_short, sir.head(short_points)}, true)
              .value;
    }

    for (int t = 0; t < 2; ++t) {
      const double aperture = t == 0 ? 0.003 : 0.01;
      const std::vector<double>& sups = t == 0 ? sup_short : sup_long;
      const ScenarioParams params{1.0, 2.0, n, kLambda, aperture};
      // Log-spaced thresholds from deep in the noise up to where the bound
      // complement reaches 0.02; past that a 10^5-sample tail estimate is
      // too coarse to say anything about a 15% gap.
      const std::vector<double> sgrid =
          logspace(1e-2, tail_threshold(params, b, 0.02), 40);
      const auto cdf = cfas::estimators::empirical_cdf(sups, sgrid);
      int tail_rows = 0;
      for (std::size_t i = 0; i < sgrid.size(); ++i) {
        const double bound =
            cfas::analytics::cdf_sup_lower_bound(params, b, sgrid[i]);
        const double half = 0.5 * (cdf[i].ci_high - cdf[i].ci_low);
        if (cdf[i].value < bound - half) {
          out.ok = false;
          why += fmt(" [N=%d T=%.1f cm: empirical %.4f under bound %.4f]", n,
                     100 * aperture, cdf[i].value, bound);
        }
        const double complement = 1.0 - cdf[i].value;
        if (complement > 0.0 && complement <= 0.05) {
          ++tail_rows;
          const double gap = (cdf[i].value - bound) / complement;
          worst_gap = std::max(worst_gap, gap);
          if (gap > 0.15) {
            out.ok = false;
            why += fmt(" [N=%d T=%.1f cm: tail gap %.0f%%]", n, 100 * aperture,
                       100 * gap);
          }
        }
      }
      if (tail_rows == 0) {
        out.ok = false;
        why += fmt(" [N=%d T=%.1f cm: no tail rows]", n, 100 * aperture);
      }
    }

    std::sort(sup_long.begin(), sup_long.end());
    std::sort(sup_short.begin(), sup_short.end());
    const ScenarioParams long_params{1.0, 2.0, n, kLambda, 0.01};
    const ScenarioParams short_params{1.0, 2.0, n, kLambda, 0.003};
    for (double q : {0.05, 0.04, 0.03, 0.02}) {
      const double gap_long = tail_gap(sup_long, long_params, b, q);
      const double gap_short = tail_gap(sup_short, short_params, b, q);
      worst_gap = std::max({worst_gap, gap_long, gap_short});
      if (gap_long > 0.15 || gap_short > 0.15) {
        out.ok = false;
        why += fmt(" [N=%d q=%.2f: gap %.0f%%]", n, q,
                   100 * std::max(gap_long, gap_short));
      }
      // At a matched tail probability both gaps reduce to the union
      // bound's clump excess, which is nearly aperture-independent, so
      // the true difference is a sub-percent tie. The order statistic
      // behind each gap carries ~2% noise at q=0.02 with 10^5 samples;
      // cap single comparisons at ~3 sigma and test the tightening on
      // the mean across q and N below.
      tight_diff_sum += gap_short - gap_long;
      ++tight_diff_count;
      if (gap_short > gap_long + 0.08) {
        out.ok = false;
        why += fmt(" [N=%d q=%.2f: short gap %.3f > long gap %.3f]", n, q,
                   gap_short, gap_long);
      }
    }
  }

  const double tight_mean =
      tight_diff_sum / static_cast<double>(tight_diff_count);
  if (tight_mean > 0.035) {
    out.ok = false;
    why += fmt(" [mean short-minus-long gap %.3f > 0.035]", tight_mean);
  }

  out.detail = fmt(
      "supremum CDF bound holds within one Wilson half-width at every "
      "threshold and the tail gap stays <= 15%% (worst %.1f%%); apertures "
      "{0.3, 1} cm, N in {1,2,3}, 10^5 supremum samples each; shorter "
      "aperture at least as tight at matched tail probabilities (mean "
      "short-minus-long gap %.4f)%s",
      100 * worst_gap, tight_mean, why.c_str());
  return out;
}

// ---------------------------------------------------------------------------
// Criterion 6: short-aperture supremum CDF collapses onto the point CDF.

Outcome check_small_aperture_limit() {
  const double step = kLambda / 200.0;
  const double t_main = 0.05 * kLambda;  // 5e-4 m, 11 grid points
  const double t_tiny = 0.01 * kLambda;  // 1e-4 m, 3 grid points
  const cfas::channel::SpatialGrid grid_main(t_main, step);
  const cfas::channel::SpatialGrid grid_tiny(t_tiny, step);
  const auto model = CorrelationModel::jakes2d();
  const double b = cfas::channel::curvature_b(model, kLambda);
  const cfas::channel::CovarianceFactor factor =
      cfas::channel::build_covariance(model, grid_main, kLambda);
  const std::size_t n_samples = 100000;
  const std::uint64_t seed = 1600;
  const auto tiny_points = static_cast<Eigen::Index>(grid_tiny.size());

  std::vector<double> sup_main(n_samples), sup_tiny(n_samples);
  for (std::size_t r = 0; r < n_samples; ++r) {
    const Eigen::MatrixXcd desired =
        cfas::channel::sample_field_matrix(factor, 1.0, 1, seed, 2 * r);
    const Eigen::MatrixXcd interferers =
        cfas::channel::sample_field_matrix(factor, 2.0, 1, seed, 2 * r + 1);
    const Eigen::VectorXd sir =
        cfas::sirproc::sir_from_samples(desired.col(0), interferers);
    sup_main[r] = cfas::sirproc::supremum({grid_main, sir}, true).value;
    sup_tiny[r] =
        cfas::sirproc::supremum({grid_tiny, sir.head(tiny_points)}, true)
            .value;
  }

  // 20 thresholds at point-CDF levels 0.05 .. 0.95; for one interferer at
  // beta_i/beta0 = 2 the inverse CDF is s = p / (2 (1 - p)).
  std::vector<double> sgrid(20);
  for (std::size_t k = 0; k < sgrid.size(); ++k) {
    const double p = 0.05 + 0.9 * static_cast<double>(k) / 19.0;
    sgrid[k] = p / (2.0 * (1.0 - p));
  }

  Outcome out;
  std::string why;
  double excess[2] = {0.0, 0.0};
  double cap[2] = {0.0, 0.0};
  for (int t = 0; t < 2; ++t) {
    const double aperture = t == 0 ? t_main : t_tiny;
    const std::vector<double>& sups = t == 0 ? sup_main : sup_tiny;
    const ScenarioParams params{1.0, 2.0, 1, kLambda, aperture};
    const auto cdf = cfas::estimators::empirical_cdf(sups, sgrid);
    double max_half = 0.0;
    for (std::size_t k = 0; k < sgrid.size(); ++k) {
      const double point_cdf = cfas::analytics::cdf_sir(params, sgrid[k]);
      const double bound =
          cfas::analytics::cdf_sup_lower_bound(params, b, sgrid[k]);
      // 1.7x the Wilson half-width is a ~3.3 sigma band; with 40 one-sided
      // comparisons per aperture that keeps false alarms rare.
      const double slack = 1.7 * 0.5 * (cdf[k].ci_high - cdf[k].ci_low);
      max_half = std::max(max_half, slack);
      if (cdf[k].value > point_cdf + slack || cdf[k].value < bound - slack) {
        out.ok = false;
        why += fmt(" [T=%.2f lambda s=%.3f: empirical %.4f outside (%.4f, %.4f)]",
                   aperture / kLambda, sgrid[k], cdf[k].value, bound, point_cdf);
      }
      excess[t] = std::max(excess[t], point_cdf - cdf[k].value);
      cap[t] = std::max(
          cap[t], aperture * cfas::analytics::lcr_closed_form(params, b,
                                                              sgrid[k]));
    }
    cap[t] += max_half;
    if (excess[t] > cap[t]) {
      out.ok = false;
      why += fmt(" [T=%.2f lambda: deviation %.4f above crossing-term cap %.4f]",
                 aperture / kLambda, excess[t], cap[t]);
    }
  }
  // The deviation from the point CDF must shrink with the aperture.
  if (excess[1] >= excess[0]) {
    out.ok = false;
    why += fmt(" [no tightening: %.4f at 0.01 lambda vs %.4f at 0.05 lambda]",
               excess[1], excess[0]);
  }

  out.detail = fmt(
      "supremum CDF on a 0.05 lambda aperture sits between the lower bound "
      "and the point CDF at 20 thresholds, deviation %.4f within the "
      "crossing-term cap %.4f; shrinking to 0.01 lambda tightens it to %.4f "
      "(10^5 samples)%s",
      excess[0], cap[0], excess[1], why.c_str());
  return out;
}

// ---------------------------------------------------------------------------
// Criterion 7: tail decay order of the bound complement.

Outcome check_tail_order() {
  const double b =
      cfas::channel::curvature_b(CorrelationModel::jakes2d(), kLambda);
  Outcome out;
  std::string detail = "bound complement log-log slope over 30..50 dB:";
  for (int n : {1, 2, 3}) {
    const ScenarioParams params{1.0, 2.0, n, kLambda, 0.01};
    std::vector<double> x, y;
    for (double db = 30.0; db <= 50.0 + 1e-9; db += 1.0) {
      const double s = db_to_linear(db);
      x.push_back(std::log(s));
      y.push_back(
          std::log(1.0 - cfas::analytics::cdf_sup_lower_bound(params, b, s)));
    }
    const double slope = fitted_slope(x, y);
    const double target = 0.5 - n;
    detail += fmt(" N=%d %.4f (expect %.1f);", n, slope, target);
    if (std::abs(slope - target) > 0.05) out.ok = false;
  }
  out.detail = detail + " tolerance 0.05";
  return out;
}

// ---------------------------------------------------------------------------
// Criterion 8: continuous aperture dominates discrete ports under CRN.

Outcome check_port_dominance() {
  ExperimentConfig config;
  config.scenario = {1.0, 2.0, 1, kLambda, kLambda};  // 1 cm aperture
  config.thresholds_db = cfas::experiments::parse_db_range("-20:2:30");
  config.n_realizations = 20000;
  config.seed = 1700;
  config.dfas_ports = 10;

  const ResultTable table = cfas::experiments::run_dfas_comparison(config);
  Outcome out;
  std::string why;
  if (table.rows.empty() || table.rows.front().extras.size() != 6) {
    out.ok = false;
    out.detail = "port comparison did not produce the paired-model columns";
    return out;
  }
  double total_dominance = 0.0;
  for (const ResultRow& row : table.rows) {
    const double port_cdf = row.extras[0];
    if (row.empirical > port_cdf) {
      out.ok = false;
      why += fmt(" [%+.0f dB: continuous CDF %.4f above 10-port CDF %.4f]",
                 row.x_db, row.empirical, port_cdf);
    }
    total_dominance += port_cdf - row.empirical;

    const double half_self = 0.5 * (row.ci_high - row.ci_low);
    const double half_pair = 0.5 * (row.extras[5] - row.extras[4]);
    if (row.extras[3] < row.empirical - (half_self + half_pair)) {
      out.ok = false;
      why += fmt(" [%+.0f dB: 3-D model CDF %.4f under ring model %.4f]",
                 row.x_db, row.extras[3], row.empirical);
    }
  }
  if (total_dominance <= 1e-3) {
    out.ok = false;
    why += " [port and continuous CDFs identical; pairing suspect]";
  }
  out.detail = fmt(
      "continuous-aperture CDF <= 10-port CDF at every threshold under "
      "common random numbers (summed margin %.3f over %zu thresholds); "
      "3-D isotropic CDF >= ring-model CDF within CI throughout%s",
      total_dominance, table.rows.size(), why.c_str());
  return out;
}

// ---------------------------------------------------------------------------
// Criterion 9: channel fidelity (correlation curve and derivative variance).

Outcome check_channel_fidelity() {
  Outcome out;
  std::string why;
  double worst_rho = 0.0, worst_b = 0.0;
  const std::array<CorrelationModel, 2> models{CorrelationModel::jakes2d(),
                                               CorrelationModel::sinc3d()};
  for (std::size_t m = 0; m < models.size(); ++m) {
    ExperimentConfig config;
    config.scenario = {1.0, 2.0, 1, kLambda, kLambda};
    config.model = models[m];
    config.n_realizations = 100000;
    config.seed = 1800 + m;

    const ResultTable table =
        cfas::experiments::run_channel_validation(config);
    if (table.rows.size() != 6) {
      out.ok = false;
      why += fmt(" [model %zu: expected 6 rows, got %zu]", m,
                 table.rows.size());
      continue;
    }
    for (std::size_t i = 0; i + 1 < table.rows.size(); ++i) {
      const ResultRow& row = table.rows[i];
      const double err = std::abs(row.empirical - row.analytic);
      worst_rho = std::max(worst_rho, err);
      if (err > 0.01) {
        out.ok = false;
        why += fmt(" [lag %.3f lambda: correlation off by %.4f]", row.x_db,
                   err);
      }
    }
    const ResultRow& deriv = table.rows.back();
    const double rel = std::abs(deriv.empirical / deriv.analytic - 1.0);
    worst_b = std::max(worst_b, rel);
    if (deriv.x_db != -1.0 || rel > 0.05) {
      out.ok = false;
      why += fmt(" [derivative variance off by %.1f%%]", 100 * rel);
    }
  }
  out.detail = fmt(
      "empirical correlation within 0.01 of both models at lags {0, 1/8, "
      "1/4, 1/2, 1} lambda over 10^5 realizations (worst %.4f); envelope "
      "derivative variance within 5%% of the curvature (worst %.2f%%)%s",
      worst_rho, 100 * worst_b, why.c_str());
  return out;
}

// ---------------------------------------------------------------------------
// Criterion 10: CLI reruns are byte-identical.

int run_cli(const std::string& args) {
  const std::string command =
      std::string(CFAS_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(command.c_str());
  if (status < 0 || !WIFEXITED(status)) return -1;
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Outcome check_cli_determinism() {
  Outcome out;
  char tmpl[] = "/tmp/cfas_accept_XXXXXX";
  const char* dir = mkdtemp(tmpl);
  if (!dir) {
    out.ok = false;
    out.detail = "could not create a scratch directory";
    return out;
  }
  const std::string base = dir;

  const auto write_config = [&](const std::string& name,
                                const std::string& body) {
    std::ofstream(base + "/" + name) << body;
  };
  write_config("crossing.json",
               "{\"n_realizations\": 60, \"trace_length_wavelengths\": 5.0,\n"
               " \"grid_points_per_wavelength\": 100,\n"
               " \"thresholds_db\": \"0:5:10\", \"seed\": 7,"
               " \"n_interferers\": 2}\n");
  write_config("sup.json",
               "{\"n_realizations\": 400, \"thresholds_db\": \"-5:5:15\",\n"
               " \"seed\": 9, \"length_m\": 0.005,\n"
               " \"grid_points_per_wavelength\": 100}\n");

  std::string why;
  const auto rerun = [&](const std::string& subcommand,
                         const std::string& config, const std::string& tag) {
    const std::string first = base + "/" + tag + "_a.csv";
    const std::string second = base + "/" + tag + "_b.csv";
    for (const std::string& path : {first, second}) {
      const int code = run_cli(subcommand + " --config " + base + "/" +
                               config + " --out " + path);
      if (code != 0) {
        out.ok = false;
        why += fmt(" [%s exited with %d]", subcommand.c_str(), code);
        return;
      }
    }
    const std::string a = slurp(first);
    if (a.empty() || a != slurp(second)) {
      out.ok = false;
      why += fmt(" [%s rerun differs]", subcommand.c_str());
    }
  };
  rerun("lcr", "crossing.json", "lcr");
  rerun("cdf-sup", "sup.json", "sup");

  // Same config with another seed must not reproduce the table.
  const std::string reseeded = base + "/lcr_seed99.csv";
  if (run_cli("lcr --config " + base + "/crossing.json --seed 99 --out " +
              reseeded) != 0 ||
      slurp(reseeded) == slurp(base + "/lcr_a.csv")) {
    out.ok = false;
    why += " [reseeded run did not change the table]";
  }

  out.detail =
      "CLI reruns with identical config and seed produce byte-identical CSV "
      "for crossing-rate and supremum experiments; a reseeded run differs" +
      why;
  return out;
}

// ---------------------------------------------------------------------------

std::vector<int> parse_criteria(const std::string& text) {
  std::vector<int> out;
  std::stringstream stream(text);
  std::string piece;
  while (std::getline(stream, piece, ',')) {
    const int id = std::stoi(piece);
    if (id < 1 || id > 10)
      throw std::out_of_range("criterion id out of range: " + piece);
    out.push_back(id);
  }
  if (out.empty()) throw std::invalid_argument("empty criteria list");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> wanted{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    std::string value;
    if (arg == "--criteria" && i + 1 < argc) {
      value = argv[++i];
    } else if (arg.rfind("--criteria=", 0) == 0) {
      value = arg.substr(std::string("--criteria=").size());
    } else {
      std::cerr << "usage: " << argv[0] << " [--criteria 1,2,...]\n";
      return 2;
    }
    try {
      wanted = parse_criteria(value);
    } catch (const std::exception& e) {
      std::cerr << "bad --criteria value: " << e.what() << "\n";
      return 2;
    }
  }

  bool crossing_ran = false;
  CrossingOutcome crossing;
  bool all_ok = true;
  for (int id : wanted) {
    Outcome outcome;
    try {
      switch (id) {
        case 1:
        case 2:
          if (!crossing_ran) {
            crossing = run_crossing_block();
            crossing_ran = true;
          }
          outcome = id == 1 ? crossing.lcr : crossing.afd;
          break;
        case 3: outcome = check_identity(); break;
        case 4: outcome = check_asymptotics(); break;
        case 5: outcome = check_sup_bound(); break;
        case 6: outcome = check_small_aperture_limit(); break;
        case 7: outcome = check_tail_order(); break;
        case 8: outcome = check_port_dominance(); break;
        case 9: outcome = check_channel_fidelity(); break;
        case 10: outcome = check_cli_determinism(); break;
        default: break;
      }
    } catch (const std::exception& e) {
      outcome.ok = false;
      outcome.detail = fmt("threw %s", e.what());
    }
    std::cout << (outcome.ok ? "[PASS]" : "[FAIL]") << " criterion " << id
              << ": " << outcome.detail << "\n";
    all_ok = all_ok && outcome.ok;
  }
  return all_ok ? 0 : 1;
}
