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

#include "wiks/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numbers>
#include <stdexcept>

#include "wiks/detail/numfmt.hpp"
#include "wiks/errors.hpp"
#include "wiks/metrics.hpp"
#include "wiks/parallel.hpp"

namespace wiks {

namespace {

constexpr std::uint64_t kDefaultDrawPairBudget = 100000000;  // 1e8

std::uint64_t draw_pair_budget() {
  const char* env = std::getenv("WIKS_MAX_BUDGET");
  if (env == nullptr || *env == '\0') return kDefaultDrawPairBudget;
  double value = 0;
  if (!detail::parse_double(env, value) || !(value > 0)) {
    throw std::invalid_argument("WIKS_MAX_BUDGET must be a positive number");
  }
  return static_cast<std::uint64_t>(value);
}

void check_draw_budget(std::uint64_t replicates, std::uint64_t s_draws) {
  const std::uint64_t budget = draw_pair_budget();
  if (replicates > 0 && s_draws > budget / replicates) {
    throw resource_error(
        "replicates * s_draws = " + std::to_string(replicates) + " * " +
        std::to_string(s_draws) + " posterior draw pairs exceeds the budget of " +
        std::to_string(budget) +
        "; reduce replicates or s_draws, or raise WIKS_MAX_BUDGET");
  }
}

void validate_calibration_config(const CalibrationConfig& config) {
  if (config.replicates < 1) throw std::invalid_argument("calibration needs replicates >= 1");
  if (!(config.alpha > 0 && config.alpha < 1)) {
    throw std::invalid_argument("calibration alpha must lie in (0,1)");
  }
  if (config.n < 1 || config.m < 1) {
    throw std::invalid_argument("calibration sample sizes must be at least 1");
  }
}

double normal_sf(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

// Survival function of the Kolmogorov distribution. The alternating series
// converges fast for large t; the theta-function form covers small t where
// the alternating series cancels badly.
double kolmogorov_sf(double t) {
  if (t <= 0) return 1.0;
  if (t < 1.0) {
    double sum = 0;
    const double f = -std::numbers::pi * std::numbers::pi / (8.0 * t * t);
    for (int k = 1; k < 40; k += 2) {
      const double term = std::exp(f * k * k);
      sum += term;
      if (term < 1e-18 * sum) break;
    }
    return 1.0 - std::sqrt(2.0 * std::numbers::pi) / t * sum;
  }
  double sum = 0;
  double sign = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double term = std::exp(-2.0 * k * k * t * t);
    sum += sign * term;
    if (term < 1e-18) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

// Counts of rank-sum subsets by U statistic: counts[k] is the number of
// n-subsets of {1..n+m} whose U statistic equals k, k in [0, nm]. Built from
// the recurrence c(k; n, m) = c(k-m; n-1, m) + c(k; n, m-1). Counts are
// exact in doubles up to the C(98,49) range needed here only as ratios.
std::vector<std::vector<double>> wilcox_counts(std::size_t n, std::size_t m) {
  const std::size_t kmax = n * m;
  std::vector<std::vector<double>> prev(n + 1, std::vector<double>(kmax + 1, 0.0));
  for (std::size_t nn = 0; nn <= n; ++nn) prev[nn][0] = 1.0;  // m = 0 base
  for (std::size_t mm = 1; mm <= m; ++mm) {
    std::vector<std::vector<double>> cur(n + 1, std::vector<double>(kmax + 1, 0.0));
    for (std::size_t k = 0; k <= kmax; ++k) cur[0][k] = (k == 0) ? 1.0 : 0.0;
    for (std::size_t nn = 1; nn <= n; ++nn) {
      for (std::size_t k = 0; k <= kmax; ++k) {
        cur[nn][k] = prev[nn][k] + (k >= mm ? cur[nn - 1][k - mm] : 0.0);
      }
    }
    prev = std::move(cur);
  }
  return prev;
}

struct RankInfo {
  double rank_sum_x = 0;       // sum of midranks of the first sample
  bool has_ties = false;
  double tie_correction = 0;   // sum over tie groups of (t^3 - t)
  bool constant_pool = false;
};

RankInfo midranks(std::span<const double> x, std::span<const double> y) {
  struct Tagged {
    double value;
    bool from_x;
  };
  std::vector<Tagged> pool;
  pool.reserve(x.size() + y.size());
  for (const double v : x) pool.push_back({v, true});
  for (const double v : y) pool.push_back({v, false});
  std::sort(pool.begin(), pool.end(),
            [](const Tagged& a, const Tagged& b) { return a.value < b.value; });

  RankInfo info;
  std::size_t i = 0;
  std::size_t groups = 0;
  while (i < pool.size()) {
    std::size_t j = i;
    while (j < pool.size() && pool[j].value == pool[i].value) ++j;
    const auto t = static_cast<double>(j - i);
    const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t r = i; r < j; ++r) {
      if (pool[r].from_x) info.rank_sum_x += midrank;
    }
    if (j - i > 1) {
      info.has_ties = true;
      info.tie_correction += t * t * t - t;
    }
    ++groups;
    i = j;
  }
  info.constant_pool = groups == 1 && pool.size() > 1;
  return info;
}

template <typename Sampler, typename Statistic>
CalibrationResult run_calibration(const CalibrationConfig& config, CalibrationMode mode,
                                  const SeedSpec& seed, unsigned workers, Sampler&& sample_pair,
                                  Statistic&& statistic) {
  CalibrationResult result;
  result.mode = mode;
  result.config = config;
  result.config.mode = mode;  // the routine, not the config, decides
  result.seed = seed;
  result.replicate_values.assign(config.replicates, 0.0);
  parallel_for(config.replicates, workers, [&](std::size_t rep) {
    const SeedSpec rep_seed = seed.sub(rep);
    auto [x, y] = sample_pair(rep_seed);
    result.replicate_values[rep] = statistic(x, y, rep_seed.sub(2));
  });
  result.threshold = empirical_upper_quantile(result.replicate_values, config.alpha);
  return result;
}

}  // namespace

std::string to_string(CalibrationMode mode) {
  return mode == CalibrationMode::wiks_null_sim ? "wiks_null_sim" : "z_quantile";
}

CalibrationMode calibration_mode_from_string(const std::string& text) {
  if (text == "wiks_null_sim" || text == "wiks") return CalibrationMode::wiks_null_sim;
  if (text == "z_quantile" || text == "z") return CalibrationMode::z_quantile;
  throw std::invalid_argument("unknown calibration mode '" + text + "'");
}

std::string to_string(Method method) {
  switch (method) {
    case Method::wiks: return "wiks";
    case Method::ks: return "ks";
    case Method::wilcoxon: return "wilcoxon";
  }
  throw std::invalid_argument("unknown method");
}

Method method_from_string(const std::string& text) {
  if (text == "wiks") return Method::wiks;
  if (text == "ks") return Method::ks;
  if (text == "wilcoxon" || text == "wilcox") return Method::wilcoxon;
  throw std::invalid_argument("unknown method '" + text + "'");
}

double empirical_upper_quantile(std::vector<double> values, double alpha) {
  if (values.empty()) throw std::invalid_argument("quantile of an empty sample");
  if (!(alpha > 0 && alpha < 1)) throw std::invalid_argument("alpha must lie in (0,1)");
  std::sort(values.begin(), values.end());
  const double r = static_cast<double>(values.size());
  auto index = static_cast<std::size_t>(std::ceil((1.0 - alpha) * r));
  index = std::clamp<std::size_t>(index, 1, values.size());
  return values[index - 1];
}

CalibrationResult calibrate_wiks_null(const CalibrationConfig& config, const DpPrior& prior,
                                      const WeightSpec& weight, std::size_t s_draws,
                                      const SeedSpec& seed, const StickOptions& stick,
                                      unsigned workers) {
  validate_calibration_config(config);
  const auto* null_model = std::get_if<UnivariateModel>(&config.null_model);
  if (null_model == nullptr) {
    throw std::invalid_argument("univariate calibration needs a univariate null model");
  }
  check_draw_budget(config.replicates, s_draws);

  return run_calibration(
      config, CalibrationMode::wiks_null_sim, seed, workers,
      [&](const SeedSpec& rep_seed) {
        return std::pair{sample_univariate(*null_model, config.n, rep_seed.sub(0)),
                         sample_univariate(*null_model, config.m, rep_seed.sub(1))};
      },
      [&](const std::vector<double>& x, const std::vector<double>& y, const SeedSpec& s) {
        return wiks(x, y, prior, weight, s_draws, s, stick, 1).value;
      });
}

CalibrationResult calibrate_wiks_null(const CalibrationConfig& config,
                                      const BivariateDpPrior& prior, const WeightSpec& weight,
                                      std::size_t s_draws, const SeedSpec& seed,
                                      const StickOptions& stick, unsigned workers) {
  validate_calibration_config(config);
  const auto* null_model = std::get_if<BivariateModel>(&config.null_model);
  if (null_model == nullptr) {
    throw std::invalid_argument("bivariate calibration needs a bivariate null model");
  }
  check_draw_budget(config.replicates, s_draws);

  return run_calibration(
      config, CalibrationMode::wiks_null_sim, seed, workers,
      [&](const SeedSpec& rep_seed) {
        return std::pair{sample_bivariate(*null_model, config.n, rep_seed.sub(0)),
                         sample_bivariate(*null_model, config.m, rep_seed.sub(1))};
      },
      [&](const std::vector<Point2>& x, const std::vector<Point2>& y, const SeedSpec& s) {
        return wiks(x, y, prior, weight, s_draws, s, stick, 1).value;
      });
}

CalibrationResult calibrate_z_quantile(const CalibrationConfig& config, double concentration,
                                       const SeedSpec& seed, unsigned workers) {
  validate_calibration_config(config);
  if (!(std::isfinite(concentration) && concentration > 0)) {
    throw std::invalid_argument("z-quantile calibration needs a positive concentration");
  }
  const UnivariateModel unit{Uniform(0, 1)};
  return run_calibration(
      config, CalibrationMode::z_quantile, seed, workers,
      [&](const SeedSpec& rep_seed) {
        return std::pair{sample_univariate(unit, config.n, rep_seed.sub(0)),
                         sample_univariate(unit, config.m, rep_seed.sub(1))};
      },
      [&](const std::vector<double>& x, const std::vector<double>& y, const SeedSpec&) {
        return z_statistic(x, y, concentration);
      });
}

double kolmogorov_cdf(double t) { return 1.0 - kolmogorov_sf(t); }

TestReport classical_ks_test(std::span<const double> x, std::span<const double> y) {
  if (x.empty() || y.empty()) {
    throw std::invalid_argument("ks test: samples must be nonempty");
  }
  const auto n = static_cast<double>(x.size());
  const auto m = static_cast<double>(y.size());
  AtomicDistribution fx{std::vector<double>(x.begin(), x.end()),
                        std::vector<double>(x.size(), 1.0 / n)};
  AtomicDistribution fy{std::vector<double>(y.begin(), y.end()),
                        std::vector<double>(y.size(), 1.0 / m)};
  TestReport report;
  report.method = "ks";
  report.n = x.size();
  report.m = y.size();
  report.statistic = ks_atomic(fx, fy);
  report.p_value = kolmogorov_sf(std::sqrt(n * m / (n + m)) * report.statistic);
  return report;
}

TestReport wilcoxon_test(std::span<const double> x, std::span<const double> y) {
  if (x.empty() || y.empty()) {
    throw std::invalid_argument("wilcoxon test: samples must be nonempty");
  }
  const std::size_t n = x.size();
  const std::size_t m = y.size();
  const RankInfo info = midranks(x, y);
  if (info.constant_pool) {
    throw std::invalid_argument("wilcoxon test: pooled sample is constant, variance degenerates");
  }

  // U statistic of the first sample: rank sum minus its minimum.
  const double w = info.rank_sum_x - static_cast<double>(n) * static_cast<double>(n + 1) / 2.0;

  TestReport report;
  report.method = "wilcoxon";
  report.n = n;
  report.m = m;
  report.statistic = w;

  const double mn = static_cast<double>(n) * static_cast<double>(m);
  if (!info.has_ties && n < 50 && m < 50) {
    const auto counts = wilcox_counts(n, m);
    const auto& dist = counts[n];
    double total = 0;
    for (const double c : dist) total += c;
    const auto k = static_cast<std::size_t>(std::llround(w));
    double tail = 0;
    if (w > mn / 2.0) {
      for (std::size_t i = k; i < dist.size(); ++i) tail += dist[i];
    } else {
      for (std::size_t i = 0; i <= k; ++i) tail += dist[i];
    }
    report.p_value = std::min(1.0, 2.0 * tail / total);
    report.exact_p = true;
    return report;
  }

  const double big_n = static_cast<double>(n + m);
  const double variance =
      (mn / 12.0) * (big_n + 1.0 - info.tie_correction / (big_n * (big_n - 1.0)));
  if (!(variance > 0)) {
    throw std::invalid_argument("wilcoxon test: tie-corrected variance degenerates");
  }
  double z = w - mn / 2.0;
  z -= z > 0 ? 0.5 : (z < 0 ? -0.5 : 0.0);  // continuity correction toward the center
  z /= std::sqrt(variance);
  report.p_value = std::min(1.0, 2.0 * normal_sf(std::abs(z)));
  return report;
}

PowerTable power_study(const PowerStudyConfig& config, const std::optional<DpPrior>& prior,
                       const std::optional<BivariateDpPrior>& bivariate_prior,
                       const WeightSpec& weight, const SeedSpec& seed) {
  if (config.scenarios.empty()) throw std::invalid_argument("power study: no scenarios given");
  if (config.methods.empty()) throw std::invalid_argument("power study: no methods given");
  if (config.replicates < 1) throw std::invalid_argument("power study: replicates must be >= 1");
  if (!(config.alpha > 0 && config.alpha < 1)) {
    throw std::invalid_argument("power study: alpha must lie in (0,1)");
  }

  const bool wants_wiks =
      std::find(config.methods.begin(), config.methods.end(), Method::wiks) !=
      config.methods.end();
  const bool wants_baselines =
      std::find_if(config.methods.begin(), config.methods.end(),
                   [](Method m) { return m != Method::wiks; }) != config.methods.end();

  std::uint64_t wiks_cells = 0;
  for (const auto& sweep : config.scenarios) {
    if (sweep.thetas.empty()) {
      throw std::invalid_argument("power study: scenario " + std::to_string(sweep.id) +
                                  " has an empty theta grid");
    }
    const bool biv = scenario_is_bivariate(sweep.id);
    if (biv && wants_baselines) {
      throw std::invalid_argument("power study: ks and wilcoxon baselines are univariate only");
    }
    if (wants_wiks) {
      if (biv && !bivariate_prior) {
        throw std::invalid_argument("power study: bivariate scenario needs a bivariate prior");
      }
      if (!biv && !prior) {
        throw std::invalid_argument("power study: univariate scenario needs a prior");
      }
      if (biv && !config.wiks_threshold_bivariate) {
        throw std::invalid_argument(
            "power study: missing calibrated bivariate threshold for the wiks method");
      }
      if (!biv && !config.wiks_threshold) {
        throw std::invalid_argument(
            "power study: missing calibrated threshold for the wiks method");
      }
      wiks_cells += sweep.thetas.size();
    }
  }
  if (wants_wiks) check_draw_budget(wiks_cells * config.replicates, config.s_draws);

  PowerTable table;
  std::uint64_t row_stream = 0;
  for (const auto& sweep : config.scenarios) {
    for (const double theta : sweep.thetas) {
      const Scenario sc = scenario(sweep.id, theta);
      const SeedSpec cell_seed = seed.sub(row_stream++);
      std::vector<std::vector<unsigned char>> rejected(
          config.methods.size(), std::vector<unsigned char>(config.replicates, 0));

      parallel_for(config.replicates, config.workers, [&](std::size_t rep) {
        const SeedSpec rep_seed = cell_seed.sub(rep);
        if (sc.bivariate) {
          // Only the wiks method reaches here; baselines were rejected above.
          const auto x = sample_bivariate(sc.bivariate_pair[0], config.n, rep_seed.sub(0));
          const auto y = sample_bivariate(sc.bivariate_pair[1], config.m, rep_seed.sub(1));
          const auto est = wiks(x, y, *bivariate_prior, weight, config.s_draws, rep_seed.sub(2),
                                config.stick, 1);
          for (auto& method_slots : rejected) {
            method_slots[rep] = est.value > *config.wiks_threshold_bivariate ? 1 : 0;
          }
          return;
        }
        const auto x = sample_univariate(sc.univariate_pair[0], config.n, rep_seed.sub(0));
        const auto y = sample_univariate(sc.univariate_pair[1], config.m, rep_seed.sub(1));
        for (std::size_t mi = 0; mi < config.methods.size(); ++mi) {
          switch (config.methods[mi]) {
            case Method::wiks: {
              const auto est = wiks(x, y, *prior, weight, config.s_draws, rep_seed.sub(2),
                                    config.stick, 1);
              rejected[mi][rep] = est.value > *config.wiks_threshold ? 1 : 0;
              break;
            }
            case Method::ks:
              rejected[mi][rep] = classical_ks_test(x, y).p_value < config.alpha ? 1 : 0;
              break;
            case Method::wilcoxon:
              rejected[mi][rep] = wilcoxon_test(x, y).p_value < config.alpha ? 1 : 0;
              break;
          }
        }
      });

      for (std::size_t mi = 0; mi < config.methods.size(); ++mi) {
        double count = 0;
        for (const unsigned char r : rejected[mi]) count += r;
        const double reps = static_cast<double>(config.replicates);
        const double power = count / reps;
        table.rows.push_back({sweep.id, theta, config.methods[mi], power, config.replicates,
                              std::sqrt(power * (1.0 - power) / reps)});
      }
    }
  }
  return table;
}

}  // namespace wiks
