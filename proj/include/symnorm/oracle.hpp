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

#ifndef SYMNORM_ORACLE_HPP_
#define SYMNORM_ORACLE_HPP_

#include <algorithm>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "symnorm/hashing.hpp"
#include "symnorm/level_vector.hpp"
#include "symnorm/levels.hpp"
#include "symnorm/norms.hpp"

namespace symnorm {

// Exact dense frequency vector, the ground truth for everything else.
class FrequencyVector {
 public:
  static constexpr std::uint64_t kMaxDimension = 1'000'000;

  explicit FrequencyVector(std::uint64_t n) : counts_(n, 0) {
    if (n < 1 || n > kMaxDimension) {
      throw std::invalid_argument("FrequencyVector: dimension must lie in [1, 1e6]");
    }
  }

  void ingest(std::uint64_t item) {
    if (item >= counts_.size()) throw std::out_of_range("FrequencyVector: item >= n");
    ++counts_[item];
    ++total_;
  }

  std::uint64_t n() const { return counts_.size(); }
  std::uint64_t total() const { return total_; }
  std::uint64_t operator[](std::uint64_t k) const { return counts_[k]; }
  std::span<const std::uint64_t> counts() const { return counts_; }

  std::vector<double> as_doubles() const { return {counts_.begin(), counts_.end()}; }

  long double f2() const {
    long double s = 0;
    for (auto c : counts_) s += static_cast<long double>(c) * c;
    return s;
  }

  std::uint64_t support() const {
    return static_cast<std::uint64_t>(std::count_if(counts_.begin(), counts_.end(),
                                                    [](std::uint64_t c) { return c > 0; }));
  }

 private:
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

inline double oracle_norm(const FrequencyVector& v, const NormSpec& norm) {
  const auto x = v.as_doubles();
  return eval_dense(norm, x);
}

// Exact level sizes of the nonzero coordinates.
inline LevelVector oracle_levels(const FrequencyVector& v, double xi, double gamma) {
  LevelVector out(xi, gamma);
  for (auto c : v.counts()) {
    if (c > 0) out.add(level_of(static_cast<double>(c), xi, gamma), 1.0);
  }
  return out;
}

struct LevelClassification {
  int level = 0;
  double size = 0.0;
  bool important = false;
  bool contributing = false;
  LevelCase label;
};

inline std::vector<LevelClassification> oracle_classify(const LevelVector& levels,
                                                        const NormSpec& norm, double beta,
                                                        double f2,
                                                        const CaseThresholds& thresholds) {
  std::vector<LevelClassification> out;
  for (const auto& e : levels.entries()) {
    out.push_back({e.level, e.size, is_important(levels, e.level, beta),
                   is_contributing(norm, levels, e.level, beta),
                   detect_case(e.level, f2, thresholds)});
  }
  return out;
}

// F2 of the substream S_j after zeroing its drop_top largest entries.
inline long double tail_f2(const FrequencyVector& v, const Subsampler& sub, int j,
                           std::uint64_t drop_top) {
  std::vector<std::uint64_t> sampled;
  for (std::uint64_t k = 0; k < v.n(); ++k) {
    if (v[k] > 0 && sub.member(j, k)) sampled.push_back(v[k]);
  }
  std::sort(sampled.begin(), sampled.end(), std::greater<>());
  long double s = 0;
  for (std::size_t i = std::min<std::size_t>(sampled.size(), drop_top); i < sampled.size(); ++i) {
    s += static_cast<long double>(sampled[i]) * sampled[i];
  }
  return s;
}

}  // namespace symnorm

#endif  // SYMNORM_ORACLE_HPP_
