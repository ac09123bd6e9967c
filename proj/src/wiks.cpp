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

#include "wiks/wiks.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wiks/detail/numfmt.hpp"
#include "wiks/parallel.hpp"

namespace wiks {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_unit_interval(double t, const char* what) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw std::invalid_argument(std::string(what) + " must lie in [0,1]");
  }
}

// Mean and sample standard deviation in one pass over W(d) values; the
// summation order is fixed by index, so results do not depend on how the
// draws were scheduled.
WiksEstimate summarize(const std::vector<double>& weighted) {
  WiksEstimate est;
  est.draws_used = weighted.size();
  double sum = 0;
  for (const double v : weighted) sum += v;
  const double n = static_cast<double>(weighted.size());
  est.value = sum / n;
  if (weighted.size() > 1) {
    double ss = 0;
    for (const double v : weighted) ss += (v - est.value) * (v - est.value);
    est.mc_std_error = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  return est;
}

template <typename State, typename Metric>
DistanceDraws distance_draws_impl(const State& post_x, const State& post_y, std::size_t s_draws,
                                  const SeedSpec& seed, const StickOptions& stick,
                                  unsigned workers, Metric&& metric) {
  if (s_draws == 0) throw std::invalid_argument("wiks: S must be at least 1");
  DistanceDraws out;
  out.distances.assign(s_draws, 0.0);
  std::vector<unsigned char> truncated(s_draws, 0);
  parallel_for(s_draws, workers, [&](std::size_t s) {
    const SeedSpec pair_seed = seed.sub(s);
    const auto p1 = draw(post_x, stick, pair_seed.sub(0));
    const auto p2 = draw(post_y, stick, pair_seed.sub(1));
    out.distances[s] = metric(p1, p2);
    truncated[s] = static_cast<unsigned char>((p1.truncated ? 1 : 0) + (p2.truncated ? 1 : 0));
  });
  for (const unsigned char t : truncated) out.truncation_flag_count += t;
  return out;
}

}  // namespace

PowerComplementWeight::PowerComplementWeight(double lambda) : lambda(lambda) {
  if (!(std::isfinite(lambda) && lambda > 0)) {
    throw std::invalid_argument("power-complement weight: lambda must be positive");
  }
}

TabulatedCdfWeight::TabulatedCdfWeight(std::vector<double> knots_in, std::vector<double> values_in)
    : knots(std::move(knots_in)), values(std::move(values_in)) {
  if (knots.size() != values.size() || knots.size() < 2) {
    throw std::invalid_argument("tabulated weight: need matching knot/value lists, length >= 2");
  }
  if (knots.front() != 0.0 || knots.back() != 1.0 || values.front() != 0.0 ||
      values.back() != 1.0) {
    throw std::invalid_argument("tabulated weight: must run from (0,0) to (1,1)");
  }
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (!(knots[i] > knots[i - 1])) {
      throw std::invalid_argument("tabulated weight: knots must be strictly increasing");
    }
    if (values[i] < values[i - 1]) {
      throw std::invalid_argument("tabulated weight: values must be nondecreasing");
    }
  }
}

double cumulative_weight(const WeightSpec& spec, double t) {
  check_unit_interval(t, "weight argument");
  return std::visit(
      overloaded{
          [&](const UniformWeight&) { return t; },
          [&](const PowerComplementWeight& w) { return 1.0 - std::pow(1.0 - t, w.lambda); },
          [&](const TabulatedCdfWeight& w) {
            const auto it = std::upper_bound(w.knots.begin(), w.knots.end(), t);
            if (it == w.knots.begin()) return w.values.front();
            if (it == w.knots.end()) return w.values.back();
            const auto i = static_cast<std::size_t>(it - w.knots.begin());
            const double frac = (t - w.knots[i - 1]) / (w.knots[i] - w.knots[i - 1]);
            return w.values[i - 1] + frac * (w.values[i] - w.values[i - 1]);
          },
      },
      spec);
}

double weight_density(const WeightSpec& spec, double t) {
  check_unit_interval(t, "weight argument");
  return std::visit(
      overloaded{
          [&](const UniformWeight&) { return 1.0; },
          [&](const PowerComplementWeight& w) {
            return w.lambda * std::pow(1.0 - t, w.lambda - 1.0);
          },
          [&](const TabulatedCdfWeight& w) {
            auto it = std::upper_bound(w.knots.begin(), w.knots.end(), t);
            if (it == w.knots.end()) --it;  // right edge: keep the last segment
            const auto i = static_cast<std::size_t>(it - w.knots.begin());
            return (w.values[i] - w.values[i - 1]) / (w.knots[i] - w.knots[i - 1]);
          },
      },
      spec);
}

std::string weight_to_string(const WeightSpec& spec) {
  using detail::format_double;
  return std::visit(
      overloaded{
          [](const UniformWeight&) { return std::string("uniform"); },
          [](const PowerComplementWeight& w) {
            return "power_complement(" + format_double(w.lambda) + ")";
          },
          [](const TabulatedCdfWeight& w) {
            std::string out = "tabulated(";
            for (std::size_t i = 0; i < w.knots.size(); ++i) {
              if (i) out += ",";
              out += format_double(w.knots[i]) + ":" + format_double(w.values[i]);
            }
            return out + ")";
          },
      },
      spec);
}

WeightSpec parse_weight(const std::string& text) {
  if (text == "uniform") return UniformWeight{};
  auto params_of = [&](const std::string& name) -> std::string {
    const auto open = text.find('(');
    if (text.rfind(name, 0) != 0) return {};
    if (open == std::string::npos || text.back() != ')') {
      throw std::invalid_argument("weight '" + text + "': malformed parameter list");
    }
    return text.substr(open + 1, text.size() - open - 2);
  };
  if (text.rfind("power_complement", 0) == 0) {
    double lambda = 0;
    if (!detail::parse_double(params_of("power_complement"), lambda)) {
      throw std::invalid_argument("weight '" + text + "': bad lambda");
    }
    return PowerComplementWeight(lambda);
  }
  if (text.rfind("tabulated", 0) == 0) {
    const std::string params = params_of("tabulated");
    std::vector<double> knots;
    std::vector<double> values;
    std::size_t start = 0;
    while (start <= params.size()) {
      const auto comma = params.find(',', start);
      const auto end = comma == std::string::npos ? params.size() : comma;
      const auto pair = params.substr(start, end - start);
      const auto colon = pair.find(':');
      double k = 0;
      double v = 0;
      if (colon == std::string::npos ||
          !detail::parse_double(std::string_view(pair).substr(0, colon), k) ||
          !detail::parse_double(std::string_view(pair).substr(colon + 1), v)) {
        throw std::invalid_argument("weight '" + text + "': bad knot:value pair");
      }
      knots.push_back(k);
      values.push_back(v);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return TabulatedCdfWeight(std::move(knots), std::move(values));
  }
  throw std::invalid_argument("unknown weight '" + text + "'");
}

DistanceDraws posterior_distance_draws(std::span<const double> x, std::span<const double> y,
                                       const DpPrior& prior, std::size_t s_draws,
                                       const SeedSpec& seed, const StickOptions& stick,
                                       unsigned workers) {
  const PosteriorState post_x = posterior(prior, x);
  const PosteriorState post_y = posterior(prior, y);
  return distance_draws_impl(post_x, post_y, s_draws, seed, stick, workers,
                             [](const AtomicDistribution& a, const AtomicDistribution& b) {
                               return ks_atomic(a, b);
                             });
}

DistanceDraws posterior_distance_draws(std::span<const Point2> x, std::span<const Point2> y,
                                       const BivariateDpPrior& prior, std::size_t s_draws,
                                       const SeedSpec& seed, const StickOptions& stick,
                                       unsigned workers) {
  const BivariatePosteriorState post_x = posterior(prior, x);
  const BivariatePosteriorState post_y = posterior(prior, y);
  return distance_draws_impl(
      post_x, post_y, s_draws, seed, stick, workers,
      [](const BivariateAtomicDistribution& a, const BivariateAtomicDistribution& b) {
        return ks_atomic_bivariate(a, b);
      });
}

WiksEstimate wiks_from_distances(std::span<const double> distances, const WeightSpec& weight) {
  if (distances.empty()) throw std::invalid_argument("wiks: need at least one distance draw");
  std::vector<double> weighted;
  weighted.reserve(distances.size());
  for (const double d : distances) {
    check_unit_interval(d, "distance draw");
    weighted.push_back(cumulative_weight(weight, d));
  }
  return summarize(weighted);
}

WiksEstimate wiks(std::span<const double> x, std::span<const double> y, const DpPrior& prior,
                  const WeightSpec& weight, std::size_t s_draws, const SeedSpec& seed,
                  const StickOptions& stick, unsigned workers) {
  const DistanceDraws draws = posterior_distance_draws(x, y, prior, s_draws, seed, stick, workers);
  WiksEstimate est = wiks_from_distances(draws.distances, weight);
  est.truncation_flag_count = draws.truncation_flag_count;
  return est;
}

WiksEstimate wiks(std::span<const Point2> x, std::span<const Point2> y,
                  const BivariateDpPrior& prior, const WeightSpec& weight, std::size_t s_draws,
                  const SeedSpec& seed, const StickOptions& stick, unsigned workers) {
  const DistanceDraws draws = posterior_distance_draws(x, y, prior, s_draws, seed, stick, workers);
  WiksEstimate est = wiks_from_distances(draws.distances, weight);
  est.truncation_flag_count = draws.truncation_flag_count;
  return est;
}

double wiks_survival_form(std::span<const double> draw_distances, const WeightSpec& weight) {
  if (draw_distances.empty()) {
    throw std::invalid_argument("wiks: need at least one distance draw");
  }
  std::vector<double> sorted(draw_distances.begin(), draw_distances.end());
  for (const double d : sorted) check_unit_interval(d, "distance draw");
  std::sort(sorted.begin(), sorted.end());

  // The empirical survival steps only at the distinct distances, so the
  // integral of w(t) * survival(t) is a finite Stieltjes sum: each constant
  // piece contributes survival * (W(piece end) - W(piece start)). Evaluating
  // it this way is exact for every weight family, including densities that
  // are unbounded at t = 1.
  std::vector<double> breaks{0.0, 1.0};
  breaks.insert(breaks.end(), sorted.begin(), sorted.end());
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  const double total = static_cast<double>(sorted.size());
  double integral = 0;
  for (std::size_t b = 1; b < breaks.size(); ++b) {
    const double lo = breaks[b - 1];
    const double hi = breaks[b];
    // Fraction of draws strictly greater than every t in (lo, hi).
    const auto leq = std::upper_bound(sorted.begin(), sorted.end(), lo) - sorted.begin();
    const double surv = (total - static_cast<double>(leq)) / total;
    if (surv == 0.0) break;  // survival never recovers
    integral += surv * (cumulative_weight(weight, hi) - cumulative_weight(weight, lo));
  }
  return integral;
}

double threshold_from_losses(double c0, double c1) {
  if (!(std::isfinite(c0) && std::isfinite(c1) && c0 > 0 && c1 > 0)) {
    throw std::invalid_argument("losses must be positive");
  }
  return c1 / (c1 + c0);
}

DecisionRule::DecisionRule(double threshold) : threshold(threshold) {
  if (!(threshold > 0 && threshold < 1)) {
    throw std::invalid_argument("decision threshold must lie in (0,1)");
  }
}

DecisionRule DecisionRule::from_losses(double c0, double c1) {
  return DecisionRule(threshold_from_losses(c0, c1));
}

Decision decide(const WiksEstimate& estimate, const DecisionRule& rule) {
  return Decision{estimate.value > rule.threshold, estimate.value, rule.threshold};
}

}  // namespace wiks
