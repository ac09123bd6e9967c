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

#ifndef WIKS_DP_POSTERIOR_HPP
#define WIKS_DP_POSTERIOR_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "wiks/distributions.hpp"
#include "wiks/seed.hpp"

namespace wiks {

// Dirichlet process prior DP(concentration, base). Conjugacy gives the
// posterior after n observations as DP(concentration + n, base'), where
// base' mixes the prior base with point masses at the data.
struct DpPrior {
  double concentration;
  UnivariateModel base;
  DpPrior(double concentration, UnivariateModel base);
};

// Prior for bivariate data; the base measure is the product of two
// independent univariate bases.
struct BivariateDpPrior {
  double concentration;
  UnivariateModel base_x;
  UnivariateModel base_y;
  BivariateDpPrior(double concentration, UnivariateModel base_x, UnivariateModel base_y);
};

// Truncation controls for stick-breaking draws. Generation stops once the
// residual stick mass falls below trunc_eps or max_atoms is reached; the
// residual is then assigned to one final atom.
struct StickOptions {
  double trunc_eps = 1e-4;
  std::size_t max_atoms = 100000;
};

// A finitely supported probability measure: one truncated posterior draw.
// weights are all positive and sum to 1 within 1e-12. truncated marks draws
// that hit max_atoms while the residual was still >= trunc_eps.
struct AtomicDistribution {
  std::vector<double> atoms;
  std::vector<double> weights;
  bool truncated = false;
};

struct BivariateAtomicDistribution {
  std::vector<Point2> atoms;
  std::vector<double> weights;
  bool truncated = false;
};

// Immutable posterior representation DP(K + n, base'). Data is stored sorted,
// so permuting the input sample changes nothing downstream.
class PosteriorState {
 public:
  PosteriorState(DpPrior prior, std::vector<double> data);

  const DpPrior& prior() const { return prior_; }
  const std::vector<double>& data() const { return data_; }
  double concentration() const { return prior_.concentration + static_cast<double>(data_.size()); }

 private:
  DpPrior prior_;
  std::vector<double> data_;  // sorted
};

class BivariatePosteriorState {
 public:
  BivariatePosteriorState(BivariateDpPrior prior, std::vector<Point2> data);

  const BivariateDpPrior& prior() const { return prior_; }
  const std::vector<Point2>& data() const { return data_; }
  double concentration() const { return prior_.concentration + static_cast<double>(data_.size()); }

 private:
  BivariateDpPrior prior_;
  std::vector<Point2> data_;  // sorted lexicographically
};

PosteriorState posterior(const DpPrior& prior, std::span<const double> data);
BivariatePosteriorState posterior(const BivariateDpPrior& prior, std::span<const Point2> data);

// One stick-breaking draw from the posterior, deterministic given the seed.
AtomicDistribution draw(const PosteriorState& state, const StickOptions& options,
                        const SeedSpec& seed);
BivariateAtomicDistribution draw(const BivariatePosteriorState& state, const StickOptions& options,
                                 const SeedSpec& seed);

// CDF of the posterior expected measure:
// (K * G(x) + #{i: data_i <= x}) / (K + n), componentwise <= in 2-D.
double posterior_mean_cdf(const PosteriorState& state, double x);
double posterior_mean_cdf(const BivariatePosteriorState& state, const Point2& p);

}  // namespace wiks

#endif  // WIKS_DP_POSTERIOR_HPP
