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

#ifndef SYMNORM_HASHING_HPP_
#define SYMNORM_HASHING_HPP_

#include <bit>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "symnorm/random.hpp"

namespace symnorm {

inline constexpr std::uint64_t kMersenne61 = (std::uint64_t{1} << 61) - 1;

// Polynomial hash h(x) = sum_i c_i x^i mod p, reduced into [0, range).
// With coefficients drawn uniformly from [0, p) the family is k-wise
// independent, k = number of coefficients.
class KWiseHash {
 public:
  KWiseHash() = default;

  KWiseHash(std::vector<std::uint64_t> coefficients, std::uint64_t prime,
            std::uint64_t range)
      : prime_(prime), range_(range), coefficients_(std::move(coefficients)) {
    if (coefficients_.size() < 2) {
      throw std::invalid_argument("KWiseHash: degree must be at least 2");
    }
    if (prime_ < 2 || range_ == 0) {
      throw std::invalid_argument("KWiseHash: bad modulus or range");
    }
    for (std::uint64_t c : coefficients_) {
      if (c >= prime_) {
        throw std::invalid_argument("KWiseHash: coefficient not below prime");
      }
    }
  }

  // Draws k coefficients over the Mersenne prime 2^61 - 1.
  static KWiseHash Random(int k, std::uint64_t range, std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("KWiseHash: degree must be >= 2");
    std::mt19937_64 rng(mix64(seed));
    std::uniform_int_distribution<std::uint64_t> coef(0, kMersenne61 - 1);
    std::vector<std::uint64_t> c(static_cast<std::size_t>(k));
    for (auto& v : c) v = coef(rng);
    // A zero leading coefficient silently lowers the degree; redraw it.
    while (c.back() == 0) c.back() = coef(rng);
    return KWiseHash(std::move(c), kMersenne61, range);
  }

  int degree() const { return static_cast<int>(coefficients_.size()); }
  std::uint64_t prime() const { return prime_; }
  std::uint64_t range() const { return range_; }
  const std::vector<std::uint64_t>& coefficients() const {
    return coefficients_;
  }

  // Polynomial value in [0, prime).
  std::uint64_t raw(std::uint64_t x) const {
    x %= prime_;
    std::uint64_t acc = 0;
    for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) {
      acc = add_mod(mul_mod(acc, x), *it);
    }
    return acc;
  }

  std::uint64_t operator()(std::uint64_t x) const { return raw(x) % range_; }

 private:
  std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b) const {
    const unsigned __int128 prod = static_cast<unsigned __int128>(a) * b;
    if (prime_ == kMersenne61) {
      std::uint64_t r = (static_cast<std::uint64_t>(prod) & kMersenne61) +
                        static_cast<std::uint64_t>(prod >> 61);
      if (r >= kMersenne61) r -= kMersenne61;
      return r;
    }
    return static_cast<std::uint64_t>(prod % prime_);
  }

  std::uint64_t add_mod(std::uint64_t a, std::uint64_t b) const {
    const std::uint64_t r = a + b;  // both < 2^63, no overflow
    return r >= prime_ ? r - prime_ : r;
  }

  std::uint64_t prime_ = kMersenne61;
  std::uint64_t range_ = 1;
  std::vector<std::uint64_t> coefficients_;
};

// Nested universe subsampling: item x belongs to substream S_j iff the j
// lowest-order bits of h(x) are zero. One hash serves every level, so
// S_0 (the full universe) contains S_1 contains ... contains S_s.
class Subsampler {
 public:
  Subsampler() = default;
  Subsampler(KWiseHash hash, int max_level)
      : hash_(std::move(hash)), max_level_(max_level) {
    if (max_level_ < 0 || max_level_ > 60) {
      throw std::invalid_argument("Subsampler: max level out of range");
    }
  }

  static Subsampler Random(int degree, int max_level, std::uint64_t seed) {
    return Subsampler(KWiseHash::Random(degree, kMersenne61, seed), max_level);
  }

  int max_level() const { return max_level_; }
  const KWiseHash& hash() const { return hash_; }

  bool member(int j, std::uint64_t x) const {
    if (j < 0 || j > max_level_) {
      throw std::out_of_range("Subsampler: level exceeds max level");
    }
    return depth(x) >= j;
  }

  // Deepest level that contains x (capped at max_level).
  int depth(std::uint64_t x) const {
    const std::uint64_t v = hash_.raw(x);
    if (v == 0) return max_level_;
    const int tz = std::countr_zero(v);
    return tz < max_level_ ? tz : max_level_;
  }

 private:
  KWiseHash hash_;
  int max_level_ = 0;
};

}  // namespace symnorm

#endif  // SYMNORM_HASHING_HPP_
