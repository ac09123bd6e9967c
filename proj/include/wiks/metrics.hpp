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

#ifndef WIKS_METRICS_HPP
#define WIKS_METRICS_HPP

#include <cstddef>
#include <span>

#include "wiks/dp_posterior.hpp"

namespace wiks {

// Kolmogorov (uniform) distance between two atomic measures: the exact sup
// over the real line of |F_P - F_Q|, obtained by sweeping the merged sorted
// atom supports. Atoms at equal locations contribute their combined mass
// before the comparison (CDFs are right-continuous). Returns a value in [0,1].
double ks_atomic(const AtomicDistribution& p, const AtomicDistribution& q);

// Bivariate counterpart: sup of |F_P - F_Q| over the grid of all
// (x-coordinate, y-coordinate) pairs drawn from the atoms of P and Q, which
// is where the sup of a difference of two 2-D atomic CDFs is attained.
// Throws resource_error when the combined atom count exceeds
// max_combined_atoms; coarser stick-breaking truncation shrinks the input.
double ks_atomic_bivariate(const BivariateAtomicDistribution& p,
                           const BivariateAtomicDistribution& q,
                           std::size_t max_combined_atoms = 200000);

// sup over x of |sum_i I(x_i <= x)/(K+n) - sum_j I(y_j <= x)/(K+m)|.
// The shrunk empirical CDFs never reach 1, so the sup accounts for the
// plateau beyond the largest observation. K is the DP concentration; the
// K -> 0 limit recovers the classical two-sample statistic.
double z_statistic(std::span<const double> x, std::span<const double> y, double concentration);

// sup of |posterior mean CDF of state_x - posterior mean CDF of state_y|,
// evaluated at every data jump point of both states (from the left and from
// the right) plus `grid` quantile points of each state's base measure. When
// the two states share a base and concentration the jump-point evaluation is
// exact; the quantile grid covers differing bases with O(1/grid) error.
double ks_mean_measures(const PosteriorState& state_x, const PosteriorState& state_y,
                        std::size_t grid = 1024);

}  // namespace wiks

#endif  // WIKS_METRICS_HPP
