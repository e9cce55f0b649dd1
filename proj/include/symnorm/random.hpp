//
// Copyright 2026 The symnorm Authors
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

#ifndef SYMNORM_RANDOM_HPP_
#define SYMNORM_RANDOM_HPP_

#include <cstdint>
#include <initializer_list>

namespace symnorm {

// SplitMix64 finalizer. Used as a stateless mixing function so that every
// random quantity in the library is a pure function of (seed, tags, counter).
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives an independent child seed from a parent seed and a list of tags,
// e.g. derive_seed(seed, {instance, component}).
constexpr std::uint64_t derive_seed(std::uint64_t seed,
                                    std::initializer_list<std::uint64_t> tags) {
  std::uint64_t h = mix64(seed ^ 0x5851f42d4c957f2dULL);
  for (std::uint64_t t : tags) h = mix64(h ^ mix64(t + 0x2545f4914f6cdd1dULL));
  return h;
}

// Uniform double in [0, 1) from the top 53 bits.
constexpr double to_unit_interval(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace symnorm

#endif  // SYMNORM_RANDOM_HPP_
