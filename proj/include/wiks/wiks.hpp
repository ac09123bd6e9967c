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

#ifndef WIKS_WIKS_HPP
#define WIKS_WIKS_HPP

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "wiks/dp_posterior.hpp"
#include "wiks/metrics.hpp"
#include "wiks/seed.hpp"

namespace wiks {

// Weight families. Each defines a CDF W on [0,1] with W(0)=0, W(1)=1,
// nondecreasing; its density w is how distance regions are emphasized.

struct UniformWeight {
  friend bool operator==(const UniformWeight&, const UniformWeight&) = default;
};

// W(t) = 1 - (1-t)^lambda, the Beta(1, lambda) CDF. Larger lambda moves
// weight toward small distances.
struct PowerComplementWeight {
  double lambda;
  explicit PowerComplementWeight(double lambda);
  friend bool operator==(const PowerComplementWeight&, const PowerComplementWeight&) = default;
};

// User-supplied W as a piecewise-linear CDF through (knot, value) pairs.
// Knots run strictly increasing from 0 to 1; values nondecreasing from 0 to 1.
struct TabulatedCdfWeight {
  std::vector<double> knots;
  std::vector<double> values;
  TabulatedCdfWeight(std::vector<double> knots, std::vector<double> values);
  friend bool operator==(const TabulatedCdfWeight&, const TabulatedCdfWeight&) = default;
};

using WeightSpec = std::variant<UniformWeight, PowerComplementWeight, TabulatedCdfWeight>;

// W(t); throws std::invalid_argument outside [0,1].
double cumulative_weight(const WeightSpec& spec, double t);

// w(t) = dW/dt (the right derivative for the tabulated family).
double weight_density(const WeightSpec& spec, double t);

std::string weight_to_string(const WeightSpec& spec);
WeightSpec parse_weight(const std::string& text);

// Monte Carlo estimate of the index: value = mean of W(d) over the posterior
// draw-pairs, mc_std_error = sample sd of the W(d) draws / sqrt(S).
// truncation_flag_count counts posterior draws (out of 2S) that hit the
// max_atoms cap before reaching the truncation tolerance.
struct WiksEstimate {
  double value = 0;
  double mc_std_error = 0;
  std::size_t draws_used = 0;
  std::size_t truncation_flag_count = 0;
  friend bool operator==(const WiksEstimate&, const WiksEstimate&) = default;
};

// Kolmogorov distances of S independent posterior draw-pairs. This is the
// sampling half of the estimator; wiks_from_distances is the weighting half.
// Exposed separately so properties of the weighting can be tested against
// injected distance vectors.
struct DistanceDraws {
  std::vector<double> distances;
  std::size_t truncation_flag_count = 0;
};

DistanceDraws posterior_distance_draws(std::span<const double> x, std::span<const double> y,
                                       const DpPrior& prior, std::size_t s_draws,
                                       const SeedSpec& seed, const StickOptions& stick = {},
                                       unsigned workers = 1);
DistanceDraws posterior_distance_draws(std::span<const Point2> x, std::span<const Point2> y,
                                       const BivariateDpPrior& prior, std::size_t s_draws,
                                       const SeedSpec& seed, const StickOptions& stick = {},
                                       unsigned workers = 1);

WiksEstimate wiks_from_distances(std::span<const double> distances, const WeightSpec& weight);

// The full estimator: draw S posterior pairs, take the mean of W(distance).
// Deterministic given (inputs, seed) for any worker count.
WiksEstimate wiks(std::span<const double> x, std::span<const double> y, const DpPrior& prior,
                  const WeightSpec& weight, std::size_t s_draws, const SeedSpec& seed,
                  const StickOptions& stick = {}, unsigned workers = 1);
WiksEstimate wiks(std::span<const Point2> x, std::span<const Point2> y,
                  const BivariateDpPrior& prior, const WeightSpec& weight, std::size_t s_draws,
                  const SeedSpec& seed, const StickOptions& stick = {}, unsigned workers = 1);

// The survival-integral form of the index: the integral over [0,1] of
// w(t) * S_hat(t), where S_hat is the empirical survival of the supplied
// distances. S_hat is a step function, so the integral reduces to an exact
// Stieltjes sum over its constant pieces. Equal to the direct weighted mean
// only through summation by parts; computing both verifies that identity.
double wiks_survival_form(std::span<const double> draw_distances, const WeightSpec& weight);

double threshold_from_losses(double c0, double c1);

// Rejection threshold c in (0,1): reject the null when the index exceeds c
// strictly. Under losses c0 (false rejection) and c1 (false acceptance) the
// optimal threshold is c1/(c1+c0).
struct DecisionRule {
  double threshold;
  explicit DecisionRule(double threshold);
  static DecisionRule from_losses(double c0, double c1);
};

struct Decision {
  bool reject_null = false;
  double value = 0;
  double threshold = 0;
};

Decision decide(const WiksEstimate& estimate, const DecisionRule& rule);

}  // namespace wiks

#endif  // WIKS_WIKS_HPP
