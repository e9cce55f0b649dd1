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

#ifndef SYMNORM_LEVELS_HPP_
#define SYMNORM_LEVELS_HPP_

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "symnorm/level_vector.hpp"
#include "symnorm/norms.hpp"

namespace symnorm {

// Level i is beta-important when
//   b_i > beta * sum_{j>i} b_j   and   b_i xi^{2i} >= beta * sum_{j<=i} b_j xi^{2j}.
// Squared masses are taken relative to xi^{2i} to avoid overflow.
inline bool is_important(const LevelVector& v, int level, double beta) {
  const double bi = v.size_at(level);
  double above = 0;
  double below = 0;  // sum_{j<=i} b_j xi^{2(j-i)}
  const double log_xi = std::log(v.xi());
  for (const auto& e : v.entries()) {
    if (e.level > level) {
      above += e.size;
    } else {
      below += e.size * std::exp(2.0 * (e.level - level) * log_xi);
    }
  }
  return bi > beta * above && bi >= beta * below;
}

inline bool is_contributing(const NormSpec& norm, const LevelVector& v, int level,
                            double beta) {
  if (v.size_at(level) <= 0) return false;
  return eval_on_levels(norm, v.bucket(level)) >= beta * eval_on_levels(norm, v);
}

// Drops every level that is not beta-contributing.
inline LevelVector prune_non_contributing(const NormSpec& norm, const LevelVector& v,
                                          double beta) {
  LevelVector out(v.xi(), v.gamma());
  const double total = eval_on_levels(norm, v);
  for (const auto& e : v.entries()) {
    if (e.size > 0 && eval_on_levels(norm, v.bucket(e.level)) >= beta * total) {
      out.set(e.level, e.size);
    }
  }
  return out;
}

// The weaker importance parameter that every beta-contributing level is
// guaranteed to satisfy: lambda beta^2 / (mmc^2 log^2 n log_xi n).
inline double implied_importance(double beta, double mmc, std::uint64_t n, double xi,
                                 double lambda = 1.0) {
  const double nd = std::max(2.0, static_cast<double>(n));
  const double log_n = std::log2(nd);
  const double log_xi_n = std::max(1.0, std::log(nd) / std::log(xi));
  return lambda * beta * beta / (mmc * mmc * log_n * log_n * log_xi_n);
}

struct LevelCase {
  enum class Kind { kHigh, kMedium, kLow };
  Kind kind = Kind::kHigh;
  int witness = 0;  // substream index j; 0 for high levels

  bool operator==(const LevelCase&) const = default;
};

struct CaseThresholds {
  double xi = 2.0;
  double gamma = 1.0;
  double beta_high = 0.5;  // high iff xi^{2i} >= beta_high * F2
  double t2 = 1.0;         // medium iff every value of the level exceeds t2
  int s = 0;               // deepest substream
};

// Sorts a level into the high / medium / low pipelines. A level whose squared
// representative reaches beta_high * F2 is high. Otherwise its witness is the
// dyadic window j with xi^{2i} in [beta_high F2 / 2^j, beta_high F2 / 2^{j-1}),
// clamped to [0, s], and the level is medium when its lower boundary
// gamma xi^{i-1} exceeds t2, low otherwise.
inline LevelCase detect_case(int level, double f2, const CaseThresholds& t) {
  const double log_xi2i = 2.0 * level * std::log(t.xi);
  if (!(f2 > 0) || !(t.beta_high > 0)) return {LevelCase::Kind::kHigh, 0};
  const double log_threshold = std::log(t.beta_high) + std::log(f2);
  if (log_xi2i >= log_threshold) return {LevelCase::Kind::kHigh, 0};
  const double ratio_log2 = (log_threshold - log_xi2i) / std::log(2.0);
  int j = static_cast<int>(std::ceil(ratio_log2));
  if (j < 1) j = 1;
  if (j > t.s) j = t.s;
  const double lower = t.gamma * std::pow(t.xi, level - 1);
  return {lower > t.t2 ? LevelCase::Kind::kMedium : LevelCase::Kind::kLow, j};
}

}  // namespace symnorm

#endif  // SYMNORM_LEVELS_HPP_
