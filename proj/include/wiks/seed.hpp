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

#ifndef WIKS_SEED_HPP
#define WIKS_SEED_HPP

#include <cstdint>
#include <random>

namespace wiks {

namespace detail {

// SplitMix64 finalizer. Used as a strong 64-bit mixer when deriving
// sub-stream keys, so that nearby stream indices land far apart.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

// Names one independent random stream. Work that fans out (replicates,
// posterior draw pairs, the two sides of a pair) derives child streams with
// sub(), so every leaf computation owns a stream determined only by the
// master seed and its logical position, never by scheduling order.
struct SeedSpec {
  std::uint64_t master = 1;
  std::uint64_t stream = 0;

  [[nodiscard]] constexpr SeedSpec sub(std::uint64_t index) const noexcept {
    return SeedSpec{master, detail::mix64(stream ^ detail::mix64(index + 0x2545f4914f6cdd1dULL))};
  }

  friend constexpr bool operator==(const SeedSpec&, const SeedSpec&) = default;
};

inline std::uint64_t engine_seed(const SeedSpec& s) noexcept {
  return detail::mix64(detail::mix64(s.master) ^ s.stream);
}

inline std::mt19937_64 make_engine(const SeedSpec& s) {
  return std::mt19937_64(engine_seed(s));
}

}  // namespace wiks

#endif  // WIKS_SEED_HPP
