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

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include <wiks/errors.hpp>
#include <wiks/metrics.hpp>

#include "oracles.hpp"

using namespace wiks;

namespace {

// Random atomic measure whose weights are multiples of 1/64. Partial sums of
// such weights are exact in binary, so the sweep and the brute-force oracle
// must agree bit for bit, not just approximately. Duplicate locations are
// allowed on purpose.
AtomicDistribution random_dyadic(std::mt19937_64& rng, std::span<const double> locations) {
  std::uniform_int_distribution<std::size_t> natoms(1, 10);
  const std::size_t k = natoms(rng);
  std::uniform_int_distribution<std::size_t> pick(0, locations.size() - 1);
  std::vector<int> units(k, 0);
  std::uniform_int_distribution<std::size_t> slot(0, k - 1);
  for (int u = 0; u < 64; ++u) units[slot(rng)] += 1;
  AtomicDistribution d;
  for (std::size_t i = 0; i < k; ++i) {
    if (units[i] == 0) continue;
    d.atoms.push_back(locations[pick(rng)]);
    d.weights.push_back(units[i] / 64.0);
  }
  return d;
}

BivariateAtomicDistribution random_dyadic_2d(std::mt19937_64& rng,
                                             std::span<const double> coords) {
  std::uniform_int_distribution<std::size_t> natoms(1, 12);
  const std::size_t k = natoms(rng);
  std::uniform_int_distribution<std::size_t> pick(0, coords.size() - 1);
  std::vector<int> units(k, 0);
  std::uniform_int_distribution<std::size_t> slot(0, k - 1);
  for (int u = 0; u < 64; ++u) units[slot(rng)] += 1;
  BivariateAtomicDistribution d;
  for (std::size_t i = 0; i < k; ++i) {
    if (units[i] == 0) continue;
    d.atoms.push_back({coords[pick(rng)], coords[pick(rng)]});
    d.weights.push_back(units[i] / 64.0);
  }
  return d;
}

std::vector<double> random_lattice_sample(std::mt19937_64& rng, std::size_t max_n) {
  std::uniform_int_distribution<std::size_t> len(2, max_n);
  std::uniform_int_distribution<int> val(-8, 8);
  std::vector<double> out(len(rng));
  for (auto& v : out) v = val(rng) / 4.0;
  return out;
}

}  // namespace

TEST_CASE("distance between atomic measures: hand-built cases") {
  const AtomicDistribution d0{{0.0}, {1.0}, false};
  const AtomicDistribution d1{{1.0}, {1.0}, false};
  CHECK(ks_atomic(d0, d1) == 1.0);
  CHECK(ks_atomic(d0, d0) == 0.0);

  const AtomicDistribution two{{0.0, 1.0}, {0.5, 0.5}, false};
  const AtomicDistribution mid{{0.5}, {1.0}, false};
  CHECK(ks_atomic(two, mid) == 0.5);

  // Same measure written with atoms split and reordered.
  const AtomicDistribution split{{1.0, 0.0, 0.0}, {0.5, 0.25, 0.25}, false};
  CHECK(ks_atomic(two, split) == 0.0);
}

TEST_CASE("distance between atomic measures matches brute force bit for bit") {
  const std::vector<double> locations{-1.0, -0.5, 0.0, 0.25, 0.5, 1.0, 2.0};
  std::mt19937_64 rng(2024);
  for (int rep = 0; rep < 2000; ++rep) {
    const auto p = random_dyadic(rng, locations);
    const auto q = random_dyadic(rng, locations);
    const double got = ks_atomic(p, q);
    const double want = oracle::ks_atomic(p, q);
    REQUIRE_MESSAGE(got == want, "rep ", rep);
  }
}

TEST_CASE("bivariate distance matches brute force bit for bit") {
  const std::vector<double> coords{0.0, 0.5, 1.0, 1.5};
  std::mt19937_64 rng(77);
  for (int rep = 0; rep < 600; ++rep) {
    const auto p = random_dyadic_2d(rng, coords);
    const auto q = random_dyadic_2d(rng, coords);
    const double got = ks_atomic_bivariate(p, q);
    const double want = oracle::ks_atomic_bivariate(p, q);
    REQUIRE_MESSAGE(got == want, "rep ", rep);
  }
}

TEST_CASE("bivariate distance agrees with univariate on degenerate data") {
  // All y coordinates equal: the 2-D sup reduces to the 1-D one.
  const std::vector<double> locations{-1.0, 0.0, 1.0, 2.0};
  std::mt19937_64 rng(31);
  for (int rep = 0; rep < 200; ++rep) {
    const auto p = random_dyadic(rng, locations);
    const auto q = random_dyadic(rng, locations);
    BivariateAtomicDistribution p2;
    BivariateAtomicDistribution q2;
    for (std::size_t i = 0; i < p.atoms.size(); ++i) {
      p2.atoms.push_back({p.atoms[i], 0.0});
      p2.weights.push_back(p.weights[i]);
    }
    for (std::size_t i = 0; i < q.atoms.size(); ++i) {
      q2.atoms.push_back({q.atoms[i], 0.0});
      q2.weights.push_back(q.weights[i]);
    }
    REQUIRE(ks_atomic_bivariate(p2, q2) == ks_atomic(p, q));
  }
}

TEST_CASE("bivariate distance enforces the atom cap") {
  BivariateAtomicDistribution big;
  for (int i = 0; i < 60; ++i) {
    big.atoms.push_back({static_cast<double>(i), static_cast<double>(-i)});
    big.weights.push_back(1.0 / 60.0);
  }
  CHECK_THROWS_AS(ks_atomic_bivariate(big, big, 100), resource_error);
  CHECK_NOTHROW(ks_atomic_bivariate(big, big, 200));
}

TEST_CASE("shrunk two-sample statistic matches brute force bit for bit") {
  std::mt19937_64 rng(5150);
  for (int rep = 0; rep < 1500; ++rep) {
    const auto x = random_lattice_sample(rng, 30);
    const auto y = random_lattice_sample(rng, 30);
    for (double k : {1e-9, 0.5, 1.0, 5.0}) {
      REQUIRE(z_statistic(x, y, k) == oracle::z_statistic(x, y, k));
    }
  }
}

TEST_CASE("shrunk statistic: plateau beyond the data and the K to 0 limit") {
  const std::vector<double> x{1.0, 2.0};
  const std::vector<double> y{10.0, 20.0};
  // With K = 1 the x side plateaus at 2/3 before any y mass appears.
  CHECK(z_statistic(x, y, 1.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

  // K -> 0 recovers the classical two-sample statistic.
  const auto xs = sample_univariate(UnivariateModel{Normal{0.0, 1.0}}, 40, SeedSpec{21, 0});
  const auto ys = sample_univariate(UnivariateModel{Normal{0.5, 1.0}}, 25, SeedSpec{21, 1});
  AtomicDistribution ex;
  for (double v : xs) {
    ex.atoms.push_back(v);
    ex.weights.push_back(1.0 / 40.0);
  }
  AtomicDistribution ey;
  for (double v : ys) {
    ey.atoms.push_back(v);
    ey.weights.push_back(1.0 / 25.0);
  }
  CHECK(z_statistic(xs, ys, 1e-12) == doctest::Approx(ks_atomic(ex, ey)).epsilon(1e-9));
}

TEST_CASE("mean-measure distance equals the shrunk statistic for equal sizes") {
  // Same base, same concentration, n = m: the base terms cancel at every
  // point, leaving exactly the shrunk two-sample statistic.
  const DpPrior prior{1.0, UnivariateModel{Normal{0.0, 1.0}}};
  std::mt19937_64 rng(88);
  for (int rep = 0; rep < 50; ++rep) {
    const auto x = sample_univariate(UnivariateModel{Normal{0.0, 1.0}}, 20,
                                     SeedSpec{22, static_cast<std::uint64_t>(2 * rep)});
    const auto y = sample_univariate(UnivariateModel{Normal{1.0, 1.0}}, 20,
                                     SeedSpec{22, static_cast<std::uint64_t>(2 * rep + 1)});
    const auto sx = posterior(prior, x);
    const auto sy = posterior(prior, y);
    CHECK(ks_mean_measures(sx, sy) ==
          doctest::Approx(z_statistic(x, y, 1.0)).epsilon(1e-12));
  }
}

TEST_CASE("mean-measure distance stays within the unequal-size band") {
  // For shared bases and n != m the distance differs from the shrunk
  // statistic by at most K |m - n| / ((K + m)(K + n)).
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::size_t> len(3, 60);
  const std::vector<double> ks{0.5, 1.0, 5.0};
  std::uint64_t stream = 0;
  for (int rep = 0; rep < 200; ++rep) {
    const double k = ks[rep % ks.size()];
    const DpPrior prior{k, UnivariateModel{Normal{0.0, 1.0}}};
    const std::size_t n = len(rng);
    const std::size_t m = len(rng);
    const auto x = sample_univariate(UnivariateModel{Normal{0.0, 1.0}}, n, SeedSpec{23, stream++});
    const auto y =
        sample_univariate(UnivariateModel{Normal{0.5, 1.5}}, m, SeedSpec{23, stream++});
    const double d = ks_mean_measures(posterior(prior, x), posterior(prior, y));
    const double z = z_statistic(x, y, k);
    const double band = k * std::abs(static_cast<double>(m) - static_cast<double>(n)) /
                        ((k + static_cast<double>(m)) * (k + static_cast<double>(n)));
    REQUIRE(std::abs(d - z) <= band + 1e-12);
  }
}

TEST_CASE("mean-measure distance with no data recovers the base distance") {
  const DpPrior pa{1.0, UnivariateModel{Normal{0.0, 1.0}}};
  const DpPrior pb{1.0, UnivariateModel{Normal{1.0, 1.0}}};
  const auto sa = posterior(pa, std::span<const double>{});
  const auto sb = posterior(pb, std::span<const double>{});
  const double want = true_ks_distance(UnivariateModel{Normal{0.0, 1.0}},
                                       UnivariateModel{Normal{1.0, 1.0}});
  CHECK(ks_mean_measures(sa, sb) == doctest::Approx(want).epsilon(2e-3));
  // A finer quantile grid tightens the answer.
  CHECK(ks_mean_measures(sa, sb, 1 << 16) == doctest::Approx(want).epsilon(1e-4));
}
