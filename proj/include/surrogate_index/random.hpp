// Copyright 2026 The Surrogate Index Authors. All Rights Reserved.
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

#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace surrogate_index {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Order-sensitive mix of a sequence of integers into one seed.
inline constexpr std::uint64_t hash_combine(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x6A09E667F3BCC909ULL;
  for (std::uint64_t part : parts) h = splitmix64(h ^ splitmix64(part));
  return h;
}

// Independent random streams derived from one master seed. Each stream feeds
// exactly one kind of draw so that, e.g., changing k (more proxy-noise draws)
// leaves the surrogate draws untouched.
enum class Stream : std::uint64_t {
  kLoadings = 1,
  kExpTreatment = 10,
  kExpSurrogate = 11,
  kExpProxyNoise = 12,
  kExpOutcomeNoise = 13,
  kObsTreatment = 20,
  kObsSurrogate = 21,
  kObsProxyNoise = 22,
  kObsOutcomeNoise = 23,
};

using Engine = std::mt19937_64;

inline Engine make_stream(std::uint64_t master_seed, Stream stream) {
  return Engine(hash_combine({master_seed, static_cast<std::uint64_t>(stream)}));
}

}  // namespace surrogate_index
