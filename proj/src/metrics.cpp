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

#include "wiks/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wiks/errors.hpp"

namespace wiks {

namespace {

std::vector<std::pair<double, double>> sorted_atoms(const AtomicDistribution& d) {
  std::vector<std::pair<double, double>> v;
  v.reserve(d.atoms.size());
  for (std::size_t i = 0; i < d.atoms.size(); ++i) v.emplace_back(d.atoms[i], d.weights[i]);
  std::sort(v.begin(), v.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return v;
}

}  // namespace

double ks_atomic(const AtomicDistribution& p, const AtomicDistribution& q) {
  const auto a = sorted_atoms(p);
  const auto b = sorted_atoms(q);
  std::size_t i = 0;
  std::size_t j = 0;
  double fp = 0;
  double fq = 0;
  double best = 0;
  while (i < a.size() || j < b.size()) {
    const double x = (j == b.size() || (i < a.size() && a[i].first <= b[j].first))
                         ? a[i].first
                         : b[j].first;
    while (i < a.size() && a[i].first == x) fp += a[i++].second;
    while (j < b.size() && b[j].first == x) fq += b[j++].second;
    best = std::max(best, std::abs(fp - fq));
  }
  return best;
}

double ks_atomic_bivariate(const BivariateAtomicDistribution& p,
                           const BivariateAtomicDistribution& q,
                           std::size_t max_combined_atoms) {
  const std::size_t total = p.atoms.size() + q.atoms.size();
  if (total > max_combined_atoms) {
    throw resource_error("bivariate distance: " + std::to_string(total) +
                         " combined atoms exceed the cap of " +
                         std::to_string(max_combined_atoms) +
                         "; draw with a larger trunc_eps or raise the cap");
  }

  // Unique x coordinates across both measures form the sweep bins.
  std::vector<double> xs;
  xs.reserve(total);
  for (const auto& a : p.atoms) xs.push_back(a.x);
  for (const auto& a : q.atoms) xs.push_back(a.x);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  struct Entry {
    double y;
    std::uint32_t xi;
    double signed_weight;
  };
  std::vector<Entry> entries;
  entries.reserve(total);
  auto add = [&](const BivariateAtomicDistribution& d, double sign) {
    for (std::size_t i = 0; i < d.atoms.size(); ++i) {
      const auto it = std::lower_bound(xs.begin(), xs.end(), d.atoms[i].x);
      entries.push_back({d.atoms[i].y, static_cast<std::uint32_t>(it - xs.begin()),
                         sign * d.weights[i]});
    }
  };
  add(p, +1.0);
  add(q, -1.0);
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.y < b.y; });

  // Sweep y levels upward. After ingesting all mass at one level, the prefix
  // sums of diff along x give F_P - F_Q on that horizontal grid line.
  std::vector<double> diff(xs.size(), 0.0);
  double best = 0;
  std::size_t i = 0;
  while (i < entries.size()) {
    const double level = entries[i].y;
    for (; i < entries.size() && entries[i].y == level; ++i) {
      diff[entries[i].xi] += entries[i].signed_weight;
    }
    double running = 0;
    for (const double d : diff) {
      running += d;
      best = std::max(best, std::abs(running));
    }
  }
  return best;
}

double z_statistic(std::span<const double> x, std::span<const double> y, double concentration) {
  if (x.empty() || y.empty()) {
    throw std::invalid_argument("z_statistic: samples must be nonempty");
  }
  if (!(std::isfinite(concentration) && concentration > 0)) {
    throw std::invalid_argument("z_statistic: concentration must be positive");
  }
  std::vector<double> xs(x.begin(), x.end());
  std::vector<double> ys(y.begin(), y.end());
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());

  const double den_x = concentration + static_cast<double>(xs.size());
  const double den_y = concentration + static_cast<double>(ys.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double best = 0;
  while (i < xs.size() || j < ys.size()) {
    const double t = (j == ys.size() || (i < xs.size() && xs[i] <= ys[j])) ? xs[i] : ys[j];
    while (i < xs.size() && xs[i] == t) ++i;
    while (j < ys.size() && ys[j] == t) ++j;
    best = std::max(best, std::abs(static_cast<double>(i) / den_x -
                                   static_cast<double>(j) / den_y));
  }
  return best;
}

double ks_mean_measures(const PosteriorState& state_x, const PosteriorState& state_y,
                        std::size_t grid) {
  // The mean measures mix a continuous base with data jumps, so the sup is
  // probed at every jump from both sides plus a quantile grid of each base.
  std::vector<double> pts;
  pts.reserve(state_x.data().size() + state_y.data().size() + 2 * grid);
  pts.insert(pts.end(), state_x.data().begin(), state_x.data().end());
  pts.insert(pts.end(), state_y.data().begin(), state_y.data().end());
  for (std::size_t j = 1; j <= grid; ++j) {
    const double prob = static_cast<double>(j) / (static_cast<double>(grid) + 1.0);
    pts.push_back(quantile_univariate(state_x.prior().base, prob));
    pts.push_back(quantile_univariate(state_y.prior().base, prob));
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  const double kx = state_x.prior().concentration;
  const double ky = state_y.prior().concentration;
  const double den_x = state_x.concentration();
  const double den_y = state_y.concentration();
  const auto& dx = state_x.data();
  const auto& dy = state_y.data();

  double best = 0;
  for (const double t : pts) {
    const double gx = kx * cdf_univariate(state_x.prior().base, t);
    const double gy = ky * cdf_univariate(state_y.prior().base, t);
    const auto leq_x = static_cast<double>(std::upper_bound(dx.begin(), dx.end(), t) - dx.begin());
    const auto leq_y = static_cast<double>(std::upper_bound(dy.begin(), dy.end(), t) - dy.begin());
    const auto lt_x = static_cast<double>(std::lower_bound(dx.begin(), dx.end(), t) - dx.begin());
    const auto lt_y = static_cast<double>(std::lower_bound(dy.begin(), dy.end(), t) - dy.begin());
    const double from_right = (gx + leq_x) / den_x - (gy + leq_y) / den_y;
    const double from_left = (gx + lt_x) / den_x - (gy + lt_y) / den_y;
    best = std::max({best, std::abs(from_right), std::abs(from_left)});
  }
  return best;
}

}  // namespace wiks
