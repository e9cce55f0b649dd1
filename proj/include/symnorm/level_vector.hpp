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

#ifndef SYMNORM_LEVEL_VECTOR_HPP_
#define SYMNORM_LEVEL_VECTOR_HPP_

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace symnorm {

// Level of a positive value: the unique i with gamma*xi^(i-1) <= v <
// gamma*xi^i. Values below gamma land in level 0. The logarithm gives a first
// guess which is then corrected against the two boundaries.
inline int level_of(double value, double xi, double gamma) {
  if (!(value > 0)) throw std::invalid_argument("level_of: value must be > 0");
  if (!(xi > 1)) throw std::invalid_argument("level_of: xi must be > 1");
  if (value < gamma) return 0;
  int i = static_cast<int>(std::floor(std::log(value / gamma) / std::log(xi))) + 1;
  auto boundary = [&](int e) { return gamma * std::pow(xi, e); };
  while (i > 0 && value < boundary(i - 1)) --i;
  while (value >= boundary(i)) ++i;
  return i;
}

struct LevelEntry {
  int level = 0;
  double size = 0.0;

  bool operator==(const LevelEntry&) const = default;
};

// Compressed vector holding b_i copies of the representative weight
// gamma * xi^i for each present level i. Absent levels are zero. Sizes are
// real because noisy estimates are fractional; they are never rounded here.
class LevelVector {
 public:
  LevelVector() = default;
  explicit LevelVector(double xi, double gamma = 1.0) : xi_(xi), gamma_(gamma) {
    if (!(xi > 1)) throw std::invalid_argument("LevelVector: xi must be > 1");
    if (!(gamma > 0)) throw std::invalid_argument("LevelVector: gamma must be > 0");
  }

  double xi() const { return xi_; }
  double gamma() const { return gamma_; }
  const std::vector<LevelEntry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  double weight(int level) const { return gamma_ * std::pow(xi_, level); }
  double log_weight(int level) const { return std::log(gamma_) + level * std::log(xi_); }

  double size_at(int level) const {
    auto it = find(level);
    return it != entries_.end() && it->level == level ? it->size : 0.0;
  }

  void add(int level, double amount) {
    auto it = find(level);
    if (it != entries_.end() && it->level == level) {
      it->size += amount;
    } else {
      entries_.insert(it, {level, amount});
    }
  }

  void set(int level, double size) {
    auto it = find(level);
    if (it != entries_.end() && it->level == level) {
      it->size = size;
    } else {
      entries_.insert(it, {level, size});
    }
  }

  void erase(int level) {
    auto it = find(level);
    if (it != entries_.end() && it->level == level) entries_.erase(it);
  }

  double total_size() const {
    double t = 0;
    for (const auto& e : entries_) t += e.size;
    return t;
  }

  // The single-bucket vector V_i.
  LevelVector bucket(int level) const {
    LevelVector v(xi_, gamma_);
    if (double b = size_at(level); b != 0) v.set(level, b);
    return v;
  }

  bool operator==(const LevelVector&) const = default;

 private:
  std::vector<LevelEntry>::iterator find(int level) {
    return std::lower_bound(entries_.begin(), entries_.end(), level,
                            [](const LevelEntry& e, int l) { return e.level < l; });
  }
  std::vector<LevelEntry>::const_iterator find(int level) const {
    return std::lower_bound(entries_.begin(), entries_.end(), level,
                            [](const LevelEntry& e, int l) { return e.level < l; });
  }

  double xi_ = 2.0;
  double gamma_ = 1.0;
  std::vector<LevelEntry> entries_;
};

}  // namespace symnorm

#endif  // SYMNORM_LEVEL_VECTOR_HPP_
