// Copyright 2026 The wiks authors.
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

#ifndef WIKS_CALIBRATION_HPP
#define WIKS_CALIBRATION_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "wiks/distributions.hpp"
#include "wiks/wiks.hpp"

namespace wiks {

enum class CalibrationMode { wiks_null_sim, z_quantile };

std::string to_string(CalibrationMode mode);
CalibrationMode calibration_mode_from_string(const std::string& text);

using NullModel = std::variant<UnivariateModel, BivariateModel>;

// Settings for picking a rejection threshold that holds the type I error at
// alpha: simulate R null replicates and take the empirical (1-alpha)
// quantile of the statistic.
struct CalibrationConfig {
  std::size_t n = 50;
  std::size_t m = 50;
  std::size_t replicates = 1000;
  double alpha = 0.05;
  NullModel null_model = UnivariateModel(Normal(0, 1));
  CalibrationMode mode = CalibrationMode::wiks_null_sim;
};

// The threshold plus everything needed to audit it: the full replicate
// vector (in replicate order), the settings, and the seed.
struct CalibrationResult {
  double threshold = 0;
  CalibrationMode mode = CalibrationMode::wiks_null_sim;
  std::vector<double> replicate_values;
  CalibrationConfig config;
  SeedSpec seed;
};

// The ceil((1-alpha)*R)-th order statistic (1-based) of the replicate
// values. No interpolation; R=1 returns the single value.
double empirical_upper_quantile(std::vector<double> values, double alpha);

// Simulate R null replicate pairs, compute the index per replicate, take the
// quantile. The config's null_model dimensionality must match the prior
// overload. Throws resource_error when R*S exceeds the draw-pair budget (see
// the WIKS_MAX_BUDGET environment variable).
CalibrationResult calibrate_wiks_null(const CalibrationConfig& config, const DpPrior& prior,
                                      const WeightSpec& weight, std::size_t s_draws,
                                      const SeedSpec& seed, const StickOptions& stick = {},
                                      unsigned workers = 1);
CalibrationResult calibrate_wiks_null(const CalibrationConfig& config,
                                      const BivariateDpPrior& prior, const WeightSpec& weight,
                                      std::size_t s_draws, const SeedSpec& seed,
                                      const StickOptions& stick = {}, unsigned workers = 1);

// Threshold from the null distribution of the Z statistic on Uniform(0,1)
// samples. An asymptotically valid, much cheaper alternative; needs the DP
// concentration because Z depends on it.
CalibrationResult calibrate_z_quantile(const CalibrationConfig& config, double concentration,
                                       const SeedSpec& seed, unsigned workers = 1);

// Baseline test outcome. p-values come from the standard asymptotic
// approximations except where exact_p notes otherwise.
struct TestReport {
  std::string method;
  double statistic = 0;
  double p_value = 1;
  bool exact_p = false;
  std::size_t n = 0;
  std::size_t m = 0;
  friend bool operator==(const TestReport&, const TestReport&) = default;
};

// Two-sample Kolmogorov-Smirnov: statistic D from the exact sweep, p-value
// from the asymptotic Kolmogorov series at sqrt(nm/(n+m)) * D.
TestReport classical_ks_test(std::span<const double> x, std::span<const double> y);

// Wilcoxon rank-sum with midranks. Exact p-value (tie-free, both sizes
// below 50), otherwise normal approximation with tie-corrected variance and
// continuity correction. Throws when the pooled sample is constant.
TestReport wilcoxon_test(std::span<const double> x, std::span<const double> y);

// Asymptotic CDF of the Kolmogorov statistic; exposed for verification.
double kolmogorov_cdf(double t);

enum class Method { wiks, ks, wilcoxon };

std::string to_string(Method method);
Method method_from_string(const std::string& text);

struct PowerCell {
  int scenario_id = 0;
  double theta = 0;
  Method method = Method::wiks;
  double power = 0;
  std::size_t replicates = 0;
  double mc_std_error = 0;
  friend bool operator==(const PowerCell&, const PowerCell&) = default;
};

struct PowerTable {
  std::vector<PowerCell> rows;
  friend bool operator==(const PowerTable&, const PowerTable&) = default;
};

// One scenario sweep: the scenario id plus the theta grid to walk.
struct ScenarioSweep {
  int id = 0;
  std::vector<double> thetas;
};

struct PowerStudyConfig {
  std::vector<ScenarioSweep> scenarios;
  std::vector<Method> methods{Method::wiks, Method::ks, Method::wilcoxon};
  std::size_t replicates = 1000;
  std::size_t n = 50;
  std::size_t m = 50;
  double alpha = 0.05;  // p-value baselines reject when p < alpha
  std::size_t s_draws = 1000;
  // Calibrated index thresholds, per data dimensionality. Required when the
  // wiks method meets a scenario of that dimensionality.
  std::optional<double> wiks_threshold;
  std::optional<double> wiks_threshold_bivariate;
  StickOptions stick{};
  unsigned workers = 1;
};

// Rejection-rate table over scenarios x theta x method. Each replicate draws
// one (x, y) data set that all methods share. Deterministic given the seed
// for any worker count. Priors may be omitted when no scenario of that
// dimensionality is requested.
PowerTable power_study(const PowerStudyConfig& config, const std::optional<DpPrior>& prior,
                       const std::optional<BivariateDpPrior>& bivariate_prior,
                       const WeightSpec& weight, const SeedSpec& seed);

}  // namespace wiks

#endif  // WIKS_CALIBRATION_HPP
