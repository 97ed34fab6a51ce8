//
// Copyright 2026 The dpepi Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef DPEPI_RANDOM_H_
#define DPEPI_RANDOM_H_

#include <cstdint>
#include <random>

namespace dpepi {

using Rng = std::mt19937_64;

// SplitMix64 finalizer; used to decorrelate nearby seeds.
constexpr std::uint64_t Mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Independent deterministic stream for (seed, stream_id). Streams with
// different ids never share state, so work keyed by id can be computed in
// any order (or in parallel) with identical results.
inline Rng SubstreamRng(std::uint64_t seed, std::uint64_t stream_id) {
  std::uint64_t a = Mix64(seed ^ Mix64(stream_id));
  std::uint64_t b = Mix64(a ^ 0xD1B54A32D192ED03ull);
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return Rng(seq);
}

}  // namespace dpepi

#endif  // DPEPI_RANDOM_H_
