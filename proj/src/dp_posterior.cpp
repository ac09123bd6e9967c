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

#include "wiks/dp_posterior.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wiks {

namespace {

void validate_stick_options(const StickOptions& options) {
  if (!(options.trunc_eps > 0 && options.trunc_eps < 1)) {
    throw std::invalid_argument("stick-breaking: trunc_eps must lie in (0,1)");
  }
  if (options.max_atoms < 1) {
    throw std::invalid_argument("stick-breaking: max_atoms must be at least 1");
  }
}

void check_finite_point(bool ok, std::size_t index) {
  if (!ok) {
    throw std::invalid_argument("posterior: data point " + std::to_string(index) +
                                " is not finite");
  }
}

std::size_t expected_atom_count(double concentration, double trunc_eps) {
  const double expected = concentration * std::log(1.0 / trunc_eps) + 8.0;
  return static_cast<std::size_t>(expected * 1.25);
}

// Shared stick-breaking skeleton. emit_location appends one atom location
// using the engine; the weight bookkeeping is identical in 1-D and 2-D.
template <typename EmitLocation>
bool break_sticks(double concentration, const StickOptions& options, std::mt19937_64& rng,
                  std::vector<double>& weights, EmitLocation&& emit_location) {
  std::uniform_real_distribution<double> unif01(0.0, 1.0);
  double residual = 1.0;
  while (residual >= options.trunc_eps && weights.size() + 1 < options.max_atoms) {
    // Stick proportion V ~ Beta(1, concentration), via inverse CDF of 1-(1-v)^c.
    const double v = -std::expm1(std::log1p(-unif01(rng)) / concentration);
    const double w = residual * v;
    if (w > 0) {
      emit_location(rng);
      weights.push_back(w);
    }
    residual -= w;
  }
  // The leftover mass becomes one final atom, so weights always sum to 1.
  emit_location(rng);
  weights.push_back(residual);
  return residual >= options.trunc_eps;
}

}  // namespace

DpPrior::DpPrior(double concentration, UnivariateModel base)
    : concentration(concentration), base(std::move(base)) {
  if (!(std::isfinite(concentration) && concentration > 0)) {
    throw std::invalid_argument("DP prior: concentration must be positive");
  }
}

BivariateDpPrior::BivariateDpPrior(double concentration, UnivariateModel base_x,
                                   UnivariateModel base_y)
    : concentration(concentration), base_x(std::move(base_x)), base_y(std::move(base_y)) {
  if (!(std::isfinite(concentration) && concentration > 0)) {
    throw std::invalid_argument("DP prior: concentration must be positive");
  }
}

PosteriorState::PosteriorState(DpPrior prior, std::vector<double> data)
    : prior_(std::move(prior)), data_(std::move(data)) {
  for (std::size_t i = 0; i < data_.size(); ++i) check_finite_point(std::isfinite(data_[i]), i);
  std::sort(data_.begin(), data_.end());
}

BivariatePosteriorState::BivariatePosteriorState(BivariateDpPrior prior, std::vector<Point2> data)
    : prior_(std::move(prior)), data_(std::move(data)) {
  for (std::size_t i = 0; i < data_.size(); ++i) {
    check_finite_point(std::isfinite(data_[i].x) && std::isfinite(data_[i].y), i);
  }
  std::sort(data_.begin(), data_.end(), [](const Point2& a, const Point2& b) {
    return a.x != b.x ? a.x < b.x : a.y < b.y;
  });
}

PosteriorState posterior(const DpPrior& prior, std::span<const double> data) {
  return PosteriorState(prior, std::vector<double>(data.begin(), data.end()));
}

BivariatePosteriorState posterior(const BivariateDpPrior& prior, std::span<const Point2> data) {
  return BivariatePosteriorState(prior, std::vector<Point2>(data.begin(), data.end()));
}

AtomicDistribution draw(const PosteriorState& state, const StickOptions& options,
                        const SeedSpec& seed) {
  validate_stick_options(options);
  auto rng = make_engine(seed);
  const double k = state.prior().concentration;
  const double concentration = state.concentration();
  const auto& data = state.data();

  AtomicDistribution out;
  const std::size_t reserve =
      std::min(options.max_atoms, expected_atom_count(concentration, options.trunc_eps));
  out.atoms.reserve(reserve);
  out.weights.reserve(reserve);

  std::uniform_real_distribution<double> unif01(0.0, 1.0);
  auto emit_location = [&](std::mt19937_64& engine) {
    // Location ~ posterior base: fresh prior-base draw with probability
    // K/(K+n), otherwise a uniformly chosen observed point.
    const double v = unif01(engine) * concentration;
    if (v < k || data.empty()) {
      out.atoms.push_back(sample_one(state.prior().base, engine));
    } else {
      const auto index = std::min(data.size() - 1, static_cast<std::size_t>(v - k));
      out.atoms.push_back(data[index]);
    }
  };

  out.truncated = break_sticks(concentration, options, rng, out.weights, emit_location);
  return out;
}

BivariateAtomicDistribution draw(const BivariatePosteriorState& state, const StickOptions& options,
                                 const SeedSpec& seed) {
  validate_stick_options(options);
  auto rng = make_engine(seed);
  const double k = state.prior().concentration;
  const double concentration = state.concentration();
  const auto& data = state.data();

  BivariateAtomicDistribution out;
  const std::size_t reserve =
      std::min(options.max_atoms, expected_atom_count(concentration, options.trunc_eps));
  out.atoms.reserve(reserve);
  out.weights.reserve(reserve);

  std::uniform_real_distribution<double> unif01(0.0, 1.0);
  auto emit_location = [&](std::mt19937_64& engine) {
    const double v = unif01(engine) * concentration;
    if (v < k || data.empty()) {
      const double x = sample_one(state.prior().base_x, engine);
      const double y = sample_one(state.prior().base_y, engine);
      out.atoms.push_back({x, y});
    } else {
      const auto index = std::min(data.size() - 1, static_cast<std::size_t>(v - k));
      out.atoms.push_back(data[index]);
    }
  };

  out.truncated = break_sticks(concentration, options, rng, out.weights, emit_location);
  return out;
}

double posterior_mean_cdf(const PosteriorState& state, double x) {
  const double k = state.prior().concentration;
  const auto& data = state.data();
  const auto leq =
      static_cast<double>(std::upper_bound(data.begin(), data.end(), x) - data.begin());
  return (k * cdf_univariate(state.prior().base, x) + leq) / state.concentration();
}

double posterior_mean_cdf(const BivariatePosteriorState& state, const Point2& p) {
  const double k = state.prior().concentration;
  double leq = 0;
  for (const auto& d : state.data()) {
    if (d.x <= p.x && d.y <= p.y) leq += 1;
  }
  const double base_cdf = cdf_univariate(state.prior().base_x, p.x) *
                          cdf_univariate(state.prior().base_y, p.y);
  return (k * base_cdf + leq) / state.concentration();
}

}  // namespace wiks
