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

#ifndef SYMNORM_AMS_SKETCH_HPP_
#define SYMNORM_AMS_SKETCH_HPP_

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "symnorm/hashing.hpp"
#include "symnorm/median.hpp"
#include "symnorm/random.hpp"

namespace symnorm {

// AMS second-moment sketch: groups x reps accumulators <sigma, x>, each with
// its own 4-wise independent sign vector. Within a group Z^2 is the mean of
// the squared accumulators; the reported Z is the median over groups.
class AmsSketch {
 public:
  AmsSketch() = default;

  AmsSketch(int reps, int groups, std::uint64_t seed)
      : reps_(reps), groups_(groups % 2 == 0 ? groups + 1 : groups), seed_(seed) {
    if (reps < 1 || groups < 1) {
      throw std::invalid_argument("AmsSketch: reps and groups must be >= 1");
    }
    const auto total = static_cast<std::size_t>(reps_) * static_cast<std::size_t>(groups_);
    acc_.assign(total, 0);
    signs_.reserve(total);
    for (std::size_t i = 0; i < total; ++i) {
      signs_.push_back(KWiseHash::Random(4, 2, derive_seed(seed_, {i})));
    }
  }

  int reps() const { return reps_; }
  int groups() const { return groups_; }
  std::span<const std::int64_t> accumulators() const { return acc_; }

  void update(std::uint64_t item) { update(item, 1); }

  void update(std::uint64_t item, std::uint64_t count) {
    const auto c = static_cast<std::int64_t>(count);
    for (std::size_t i = 0; i < acc_.size(); ++i) {
      acc_[i] += (signs_[i].raw(item) & 1) ? c : -c;
    }
  }

  double estimate() const {
    std::vector<double> per_group(static_cast<std::size_t>(groups_));
    for (int g = 0; g < groups_; ++g) {
      long double sq = 0;
      for (int r = 0; r < reps_; ++r) {
        const auto a = static_cast<long double>(acc_[static_cast<std::size_t>(g * reps_ + r)]);
        sq += a * a;
      }
      per_group[static_cast<std::size_t>(g)] =
          static_cast<double>(std::sqrt(sq / static_cast<long double>(reps_)));
    }
    return median(std::span<const double>(per_group));
  }

  std::size_t memory_bytes() const { return acc_.size() * sizeof(std::int64_t); }

 private:
  int reps_ = 1;
  int groups_ = 1;
  std::uint64_t seed_ = 0;
  std::vector<std::int64_t> acc_;
  std::vector<KWiseHash> signs_;
};

}  // namespace symnorm

#endif  // SYMNORM_AMS_SKETCH_HPP_
