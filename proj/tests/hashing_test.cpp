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

#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "symnorm/hashing.hpp"
#include "symnorm/median.hpp"
#include "symnorm/random.hpp"

namespace symnorm {
namespace {

TEST(Mix64, MatchesSplitMix64Reference) {
  EXPECT_EQ(mix64(0), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(mix64(1), 0x910a2dec89025cc1ULL);
}

TEST(DeriveSeed, DependsOnEveryTag) {
  EXPECT_EQ(derive_seed(7, {1, 2}), derive_seed(7, {1, 2}));
  EXPECT_NE(derive_seed(7, {1, 2}), derive_seed(7, {2, 1}));
  EXPECT_NE(derive_seed(7, {1}), derive_seed(8, {1}));
}

TEST(KWiseHash, IdentityCoefficientsModSeven) {
  const KWiseHash h({0, 1}, 7, 7);
  EXPECT_EQ(h(3), 3u);
  EXPECT_EQ(h(3), h(3));
  EXPECT_EQ(h(10), 3u);
}

TEST(KWiseHash, EvaluatesPolynomialGenericPrime) {
  // 2 + 3x + 5x^2 mod 11 at x = 4: 2 + 12 + 80 = 94 = 6 mod 11.
  const KWiseHash h({2, 3, 5}, 11, 100);
  EXPECT_EQ(h.raw(4), 6u);
  EXPECT_EQ(h(4), 6u);
}

TEST(KWiseHash, MersenneArithmeticMatchesWideReference) {
  const auto h = KWiseHash::Random(4, kMersenne61, 99);
  const auto& c = h.coefficients();
  for (std::uint64_t x : std::vector<std::uint64_t>{0, 1, 12345, (1ULL << 40) + 17, kMersenne61 - 1}) {
    unsigned __int128 acc = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
      acc = (acc * (x % kMersenne61) + *it) % kMersenne61;
    }
    EXPECT_EQ(h.raw(x), static_cast<std::uint64_t>(acc)) << x;
  }
}

TEST(KWiseHash, RejectsBadShapes) {
  EXPECT_THROW(KWiseHash({1}, 7, 7), std::invalid_argument);
  EXPECT_THROW(KWiseHash({1, 9}, 7, 7), std::invalid_argument);
  EXPECT_THROW(KWiseHash({1, 2}, 7, 0), std::invalid_argument);
  EXPECT_THROW(KWiseHash::Random(1, 8, 1), std::invalid_argument);
}

TEST(KWiseHash, PairwiseCollisionRate) {
  constexpr std::uint64_t kRange = 1 << 10;
  constexpr int kPairs = 100000;
  std::mt19937_64 rng(5);
  int collisions = 0;
  for (int t = 0; t < kPairs; ++t) {
    const auto h = KWiseHash::Random(2, kRange, rng());
    const std::uint64_t x = rng() % 100000, y = x + 1 + rng() % 100000;
    collisions += h(x) == h(y);
  }
  const double p = 1.0 / kRange;
  const double sigma = std::sqrt(kPairs * p * (1 - p));
  EXPECT_NEAR(collisions, kPairs * p, 3 * sigma);
}

TEST(Subsampler, LevelZeroContainsEverything) {
  const auto sub = Subsampler::Random(4, 10, 3);
  for (std::uint64_t x = 0; x < 1000; ++x) EXPECT_TRUE(sub.member(0, x));
}

TEST(Subsampler, LowBitsDecideMembership) {
  // h(x) = 4 + 0*x over a large prime: raw value 0b100 for every x.
  const Subsampler sub(KWiseHash({4, 0}, kMersenne61, kMersenne61), 5);
  EXPECT_TRUE(sub.member(1, 9));
  EXPECT_TRUE(sub.member(2, 9));
  EXPECT_FALSE(sub.member(3, 9));
  EXPECT_EQ(sub.depth(9), 2);
  EXPECT_THROW(sub.member(6, 9), std::out_of_range);
}

TEST(Subsampler, NestedLevels) {
  const auto sub = Subsampler::Random(8, 12, 17);
  for (std::uint64_t x = 0; x < 5000; ++x) {
    for (int j = 1; j <= 12; ++j) {
      if (sub.member(j, x)) {
        EXPECT_TRUE(sub.member(j - 1, x));
      }
    }
  }
}

TEST(Subsampler, LevelFiveRate) {
  constexpr std::uint64_t n = 1 << 14;
  const auto sub = Subsampler::Random(8, 10, 2024);
  std::uint64_t count = 0;
  for (std::uint64_t x = 0; x < n; ++x) count += sub.member(5, x);
  const double rate = static_cast<double>(count) / n;
  EXPECT_GT(rate, std::ldexp(1.0, -5) * 0.9);
  EXPECT_LT(rate, std::ldexp(1.0, -5) * 1.1);
}

TEST(Median, OddAndEvenCounts) {
  const std::vector<double> odd{5, 1, 3};
  EXPECT_EQ(median(std::span<const double>(odd)), 3);
  const std::vector<double> even{4, 1, 3, 2};
  EXPECT_EQ(median(std::span<const double>(even)), 2);
  const std::vector<double> empty;
  EXPECT_THROW(median(std::span<const double>(empty)), std::invalid_argument);
}

}  // namespace
}  // namespace symnorm
