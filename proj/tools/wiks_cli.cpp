// Copyright 2026 The wiks authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end. Three subcommands:
//
//   wiks test       compare two sample files and decide
//   wiks calibrate  simulate a null to pick a rejection threshold
//   wiks power      sweep simulation scenarios and tabulate rejection rates
//
// Exit codes: 0 success, 2 unreadable or malformed input files, 3 resource
// budget exceeded, 64 usage errors, 1 anything else.

#include <algorithm>
#include <cstdio>
#include <exception>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include <wiks/calibration.hpp>
#include <wiks/distributions.hpp>
#include <wiks/dp_posterior.hpp>
#include <wiks/errors.hpp>
#include <wiks/io.hpp>
#include <wiks/seed.hpp>
#include <wiks/wiks.hpp>

namespace {

using namespace wiks;

struct CommonOptions {
  double concentration = 1.0;
  std::string base = "normal(0,1)";
  std::string base_y;  // bivariate product base; defaults to `base`
  double lambda = 4.0;
  std::string weight;  // full weight spec; overrides lambda when set
  std::size_t s_draws = 1000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  double trunc_eps = 1e-4;
  std::size_t max_atoms = 100000;
};

void add_common_options(CLI::App& cmd, CommonOptions& opt) {
  cmd.add_option("--k", opt.concentration, "DP concentration parameter")
      ->capture_default_str();
  cmd.add_option("--base", opt.base, "base measure, e.g. normal(0,1) or gamma(3,2)")
      ->capture_default_str();
  cmd.add_option("--base-y", opt.base_y,
                 "second coordinate of a bivariate product base (defaults to --base)");
  cmd.add_option("--lambda", opt.lambda, "power-complement weight exponent")
      ->capture_default_str();
  cmd.add_option("--weight", opt.weight,
                 "full weight spec (uniform, power_complement(L), tabulated(k:v,...)); "
                 "overrides --lambda");
  cmd.add_option("--s-draws", opt.s_draws, "posterior draw pairs per index evaluation")
      ->capture_default_str();
  cmd.add_option("--seed", opt.seed, "master RNG seed")->capture_default_str();
  cmd.add_option("--workers", opt.workers, "worker threads (results do not depend on this)")
      ->capture_default_str();
  cmd.add_option("--trunc-eps", opt.trunc_eps, "stick-breaking residual tolerance")
      ->capture_default_str();
  cmd.add_option("--max-atoms", opt.max_atoms, "stick-breaking atom cap")
      ->capture_default_str();
}

WeightSpec resolve_weight(const CommonOptions& opt) {
  if (!opt.weight.empty()) return parse_weight(opt.weight);
  return WeightSpec{PowerComplementWeight{opt.lambda}};
}

StickOptions resolve_stick(const CommonOptions& opt) {
  return StickOptions{opt.trunc_eps, opt.max_atoms};
}

DpPrior resolve_prior(const CommonOptions& opt) {
  return DpPrior{opt.concentration, parse_model(opt.base)};
}

BivariateDpPrior resolve_bivariate_prior(const CommonOptions& opt) {
  const std::string by = opt.base_y.empty() ? opt.base : opt.base_y;
  return BivariateDpPrior{opt.concentration, parse_model(opt.base), parse_model(by)};
}

// Accepts either a univariate family or binormal(...).
NullModel parse_null_model(const std::string& text) {
  try {
    return NullModel{parse_model(text)};
  } catch (const std::invalid_argument&) {
    return NullModel{parse_bivariate_model(text)};
  }
}

void warn_truncation(std::size_t flags, std::size_t total) {
  if (flags > 0) {
    std::fprintf(stderr,
                 "warning: %zu of %zu posterior draws hit the atom cap before the "
                 "truncation tolerance; consider raising --max-atoms\n",
                 flags, total);
  }
}

// ---------------------------------------------------------------------------
// wiks test

struct TestOptions {
  CommonOptions common;
  std::string x_path;
  std::string y_path;
  std::optional<double> threshold;
  std::string mode = "wiks_null_sim";
  std::string null_model;  // empty: standard normal of the data's dimension
  std::size_t replicates = 1000;
  double alpha = 0.05;
  std::string out = "report.json";
};

int run_test(const TestOptions& opt) {
  const auto xs = parse_samples(opt.x_path);
  const auto ys = parse_samples(opt.y_path);
  if (xs.dimension != ys.dimension) {
    throw std::invalid_argument("sample files disagree on dimension: " + opt.x_path + " is " +
                                std::to_string(xs.dimension) + "-d, " + opt.y_path + " is " +
                                std::to_string(ys.dimension) + "-d");
  }
  const bool bivariate = xs.dimension == 2;
  if (!bivariate && !opt.common.base_y.empty()) {
    throw std::invalid_argument("--base-y applies only to bivariate data");
  }

  const auto weight = resolve_weight(opt.common);
  const auto stick = resolve_stick(opt.common);
  const SeedSpec root{opt.common.seed, 0};

  PairTestReport report;
  report.dimension = xs.dimension;
  report.concentration = opt.common.concentration;
  report.weight = weight_to_string(weight);
  report.s_draws = opt.common.s_draws;
  report.seed = root;

  // Threshold: supplied, or calibrated against a null model matched to the
  // data sizes.
  double threshold = 0;
  if (opt.threshold.has_value()) {
    threshold = *opt.threshold;
    DecisionRule validate{threshold};  // reject bad values before the MC run
    (void)validate;
    report.threshold_source = "supplied";
  } else {
    report.threshold_source = "calibrated";
    CalibrationConfig cal;
    cal.replicates = opt.replicates;
    cal.alpha = opt.alpha;
    if (opt.null_model.empty()) {
      cal.null_model = bivariate ? NullModel{BivariateModel{0, 0, 1, 0, 1}}
                                 : NullModel{UnivariateModel{Normal{0, 1}}};
    } else {
      cal.null_model = parse_null_model(opt.null_model);
    }
    const auto mode = calibration_mode_from_string(opt.mode);
    std::fprintf(stderr, "calibrating threshold (%zu replicates)...\n", opt.replicates);
    if (bivariate) {
      cal.n = xs.bivariate.size();
      cal.m = ys.bivariate.size();
      if (mode != CalibrationMode::wiks_null_sim) {
        throw std::invalid_argument("z_quantile calibration is univariate only");
      }
      threshold = calibrate_wiks_null(cal, resolve_bivariate_prior(opt.common), weight,
                                      opt.common.s_draws, root.sub(2), stick,
                                      opt.common.workers)
                      .threshold;
    } else {
      cal.n = xs.univariate.size();
      cal.m = ys.univariate.size();
      threshold =
          mode == CalibrationMode::z_quantile
              ? calibrate_z_quantile(cal, opt.common.concentration, root.sub(2),
                                     opt.common.workers)
                    .threshold
              : calibrate_wiks_null(cal, resolve_prior(opt.common), weight, opt.common.s_draws,
                                    root.sub(2), stick, opt.common.workers)
                    .threshold;
    }
  }
  report.threshold = threshold;

  if (bivariate) {
    const auto prior = resolve_bivariate_prior(opt.common);
    report.n = xs.bivariate.size();
    report.m = ys.bivariate.size();
    report.base_models = {model_to_string(prior.base_x), model_to_string(prior.base_y)};
    report.estimate = wiks::wiks(xs.bivariate, ys.bivariate, prior, weight, opt.common.s_draws,
                                 root.sub(1), stick, opt.common.workers);
  } else {
    const auto prior = resolve_prior(opt.common);
    report.n = xs.univariate.size();
    report.m = ys.univariate.size();
    report.base_models = {model_to_string(prior.base)};
    report.estimate = wiks::wiks(xs.univariate, ys.univariate, prior, weight, opt.common.s_draws,
                                 root.sub(1), stick, opt.common.workers);
    report.ks = classical_ks_test(xs.univariate, ys.univariate);
    report.wilcoxon = wilcoxon_test(xs.univariate, ys.univariate);
  }
  warn_truncation(report.estimate.truncation_flag_count, 2 * opt.common.s_draws);

  const auto decision = decide(report.estimate, DecisionRule{threshold});
  report.reject_null = decision.reject_null;

  write_text_file(opt.out, to_json(report).dump(2) + "\n");

  std::printf("n = %zu, m = %zu (%s)\n", report.n, report.m,
              bivariate ? "bivariate" : "univariate");
  std::printf("index     = %.4f (mc se %.4f, S = %zu)\n", report.estimate.value,
              report.estimate.mc_std_error, report.s_draws);
  std::printf("threshold = %.4f (%s)\n", threshold, report.threshold_source.c_str());
  std::printf("decision  : %s\n", report.reject_null ? "reject H0" : "accept H0");
  if (report.ks.has_value()) {
    std::printf("ks        : D = %.4f, p = %.4g\n", report.ks->statistic, report.ks->p_value);
  }
  if (report.wilcoxon.has_value()) {
    std::printf("wilcoxon  : W = %.1f, p = %.4g%s\n", report.wilcoxon->statistic,
                report.wilcoxon->p_value, report.wilcoxon->exact_p ? " (exact)" : "");
  }
  std::printf("report written to %s\n", opt.out.c_str());
  return 0;
}

// ---------------------------------------------------------------------------
// wiks calibrate

struct CalibrateOptions {
  CommonOptions common;
  std::string mode = "wiks_null_sim";
  std::string null_model = "normal(0,1)";
  std::size_t n = 50;
  std::size_t m = 50;
  std::size_t replicates = 1000;
  double alpha = 0.05;
  std::string out = "calibration.json";
};

int run_calibrate(const CalibrateOptions& opt) {
  CalibrationConfig cfg;
  cfg.n = opt.n;
  cfg.m = opt.m;
  cfg.replicates = opt.replicates;
  cfg.alpha = opt.alpha;
  cfg.null_model = parse_null_model(opt.null_model);

  const auto mode = calibration_mode_from_string(opt.mode);
  const auto weight = resolve_weight(opt.common);
  const SeedSpec root{opt.common.seed, 0};

  CalibrationResult result;
  if (mode == CalibrationMode::z_quantile) {
    if (!std::holds_alternative<UnivariateModel>(cfg.null_model)) {
      throw std::invalid_argument("z_quantile calibration is univariate only");
    }
    result = calibrate_z_quantile(cfg, opt.common.concentration, root.sub(2),
                                  opt.common.workers);
  } else if (std::holds_alternative<BivariateModel>(cfg.null_model)) {
    result = calibrate_wiks_null(cfg, resolve_bivariate_prior(opt.common), weight,
                                 opt.common.s_draws, root.sub(2), resolve_stick(opt.common),
                                 opt.common.workers);
  } else {
    result = calibrate_wiks_null(cfg, resolve_prior(opt.common), weight, opt.common.s_draws,
                                 root.sub(2), resolve_stick(opt.common), opt.common.workers);
  }

  write_text_file(opt.out, to_json(result).dump(2) + "\n");
  std::printf("threshold = %.6f (%s, R = %zu, alpha = %g)\n", result.threshold,
              to_string(result.mode).c_str(), opt.replicates, opt.alpha);
  std::printf("calibration written to %s\n", opt.out.c_str());
  return 0;
}

// ---------------------------------------------------------------------------
// wiks power

struct PowerOptions {
  CommonOptions common;
  std::vector<int> scenarios;
  std::vector<double> thetas;  // empty: the default grid of each scenario
  std::vector<std::string> methods{"wiks", "ks", "wilcoxon"};
  std::size_t n = 50;
  std::size_t m = 50;
  std::size_t replicates = 1000;
  std::size_t cal_replicates = 1000;
  double alpha = 0.05;
  std::optional<double> threshold;
  std::optional<double> threshold_bivariate;
  std::string out = "power.csv";
};

int run_power(const PowerOptions& opt) {
  PowerStudyConfig cfg;
  cfg.replicates = opt.replicates;
  cfg.n = opt.n;
  cfg.m = opt.m;
  cfg.alpha = opt.alpha;
  cfg.s_draws = opt.common.s_draws;
  cfg.stick = resolve_stick(opt.common);
  cfg.workers = opt.common.workers;
  cfg.methods.clear();
  for (const auto& name : opt.methods) cfg.methods.push_back(method_from_string(name));

  bool any_univariate = false;
  bool any_bivariate = false;
  for (int id : opt.scenarios) {
    ScenarioSweep sweep;
    sweep.id = id;
    sweep.thetas = opt.thetas.empty() ? default_theta_grid(id) : opt.thetas;
    for (double theta : sweep.thetas) {
      if (scenario(id, theta).theta_outside_grid) {
        std::fprintf(stderr,
                     "warning: theta %g lies outside the standard grid of scenario %d\n",
                     theta, id);
      }
    }
    (scenario_is_bivariate(id) ? any_bivariate : any_univariate) = true;
    cfg.scenarios.push_back(std::move(sweep));
  }

  const auto weight = resolve_weight(opt.common);
  const SeedSpec root{opt.common.seed, 0};
  const bool wants_wiks =
      std::find(cfg.methods.begin(), cfg.methods.end(), Method::wiks) != cfg.methods.end();

  std::optional<DpPrior> prior;
  std::optional<BivariateDpPrior> bivariate_prior;
  if (any_univariate) prior = resolve_prior(opt.common);
  if (any_bivariate) bivariate_prior = resolve_bivariate_prior(opt.common);

  cfg.wiks_threshold = opt.threshold;
  cfg.wiks_threshold_bivariate = opt.threshold_bivariate;
  if (wants_wiks) {
    CalibrationConfig cal;
    cal.n = opt.n;
    cal.m = opt.m;
    cal.replicates = opt.cal_replicates;
    cal.alpha = opt.alpha;
    if (any_univariate && !cfg.wiks_threshold.has_value()) {
      std::fprintf(stderr, "calibrating univariate threshold (%zu replicates)...\n",
                   opt.cal_replicates);
      cal.null_model = NullModel{UnivariateModel{Normal{0, 1}}};
      cfg.wiks_threshold = calibrate_wiks_null(cal, *prior, weight, cfg.s_draws, root.sub(1),
                                               cfg.stick, cfg.workers)
                               .threshold;
      std::fprintf(stderr, "univariate threshold = %.6f\n", *cfg.wiks_threshold);
    }
    if (any_bivariate && !cfg.wiks_threshold_bivariate.has_value()) {
      std::fprintf(stderr, "calibrating bivariate threshold (%zu replicates)...\n",
                   opt.cal_replicates);
      cal.null_model = NullModel{BivariateModel{0, 0, 1, 0, 1}};
      cfg.wiks_threshold_bivariate =
          calibrate_wiks_null(cal, *bivariate_prior, weight, cfg.s_draws, root.sub(2), cfg.stick,
                              cfg.workers)
              .threshold;
      std::fprintf(stderr, "bivariate threshold = %.6f\n", *cfg.wiks_threshold_bivariate);
    }
  }

  const auto table = power_study(cfg, prior, bivariate_prior, weight, root.sub(3));
  write_text_file(opt.out, power_table_to_csv(table));

  for (const auto& row : table.rows) {
    std::printf("scenario %2d  theta %7.4f  %-8s power %.4f (se %.4f)\n", row.scenario_id,
                row.theta, to_string(row.method).c_str(), row.power, row.mc_std_error);
  }
  std::printf("table written to %s\n", opt.out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian nonparametric two-sample index"};
  app.require_subcommand(1);
  app.set_config("--config", "", "read options from an INI/TOML file");

  TestOptions test_opt;
  auto* test_cmd = app.add_subcommand("test", "compare two sample files");
  test_cmd->fallthrough();
  add_common_options(*test_cmd, test_opt.common);
  test_cmd->add_option("--x", test_opt.x_path, "CSV file with the first sample")->required();
  test_cmd->add_option("--y", test_opt.y_path, "CSV file with the second sample")->required();
  test_cmd->add_option("--threshold", test_opt.threshold,
                       "rejection threshold in (0,1); omit to calibrate one");
  test_cmd->add_option("--mode", test_opt.mode, "calibration mode: wiks_null_sim or z_quantile")
      ->capture_default_str();
  test_cmd->add_option("--null", test_opt.null_model,
                       "null model for calibration (default: standard normal)");
  test_cmd->add_option("--replicates", test_opt.replicates, "calibration replicates")
      ->capture_default_str();
  test_cmd->add_option("--alpha", test_opt.alpha, "calibration level")->capture_default_str();
  test_cmd->add_option("--out", test_opt.out, "report output path")->capture_default_str();

  CalibrateOptions cal_opt;
  auto* cal_cmd = app.add_subcommand("calibrate", "pick a rejection threshold");
  cal_cmd->fallthrough();
  add_common_options(*cal_cmd, cal_opt.common);
  cal_cmd->add_option("--mode", cal_opt.mode, "wiks_null_sim or z_quantile")
      ->capture_default_str();
  cal_cmd->add_option("--null", cal_opt.null_model, "null model to simulate")
      ->capture_default_str();
  cal_cmd->add_option("--n", cal_opt.n, "first sample size")->capture_default_str();
  cal_cmd->add_option("--m", cal_opt.m, "second sample size")->capture_default_str();
  cal_cmd->add_option("--replicates", cal_opt.replicates, "null replicates")
      ->capture_default_str();
  cal_cmd->add_option("--alpha", cal_opt.alpha, "level")->capture_default_str();
  cal_cmd->add_option("--out", cal_opt.out, "output path")->capture_default_str();

  PowerOptions pow_opt;
  auto* pow_cmd = app.add_subcommand("power", "scenario power study");
  pow_cmd->fallthrough();
  add_common_options(*pow_cmd, pow_opt.common);
  pow_cmd->add_option("--scenario", pow_opt.scenarios, "scenario ids (1-10), repeatable")
      ->required();
  pow_cmd->add_option("--theta", pow_opt.thetas,
                      "theta values (default: the scenario's standard grid)");
  pow_cmd->add_option("--methods", pow_opt.methods, "methods: wiks ks wilcoxon")
      ->capture_default_str();
  pow_cmd->add_option("--n", pow_opt.n, "first sample size")->capture_default_str();
  pow_cmd->add_option("--m", pow_opt.m, "second sample size")->capture_default_str();
  pow_cmd->add_option("--replicates", pow_opt.replicates, "replicates per cell")
      ->capture_default_str();
  pow_cmd->add_option("--cal-replicates", pow_opt.cal_replicates,
                      "replicates for automatic threshold calibration")
      ->capture_default_str();
  pow_cmd->add_option("--alpha", pow_opt.alpha, "level")->capture_default_str();
  pow_cmd->add_option("--threshold", pow_opt.threshold, "index threshold (univariate cells)");
  pow_cmd->add_option("--threshold-bivariate", pow_opt.threshold_bivariate,
                      "index threshold (bivariate cells)");
  pow_cmd->add_option("--out", pow_opt.out, "output CSV path")->capture_default_str();

  try {
    app.parse(argc, argv);
    if (test_cmd->parsed()) return run_test(test_opt);
    if (cal_cmd->parsed()) return run_calibrate(cal_opt);
    if (pow_cmd->parsed()) return run_power(pow_opt);
    return 64;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the message
    return 64;
  } catch (const wiks::parse_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const wiks::resource_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 64;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
