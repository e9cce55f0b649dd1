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

#ifndef SYMNORM_QUERY_HPP_
#define SYMNORM_QUERY_HPP_

#include <algorithm>
#include <cstddef>
#include <span>
#include <sstream>
#include <vector>

#include "symnorm/errors.hpp"
#include "symnorm/level_vector.hpp"
#include "symnorm/levels.hpp"
#include "symnorm/median.hpp"
#include "symnorm/norms.hpp"
#include "symnorm/release_set.hpp"

namespace symnorm {

struct QueryResult {
  double estimate = 0.0;
  std::vector<double> per_instance;
};

// Level vector of one instance: released high frequencies are bucketed with
// level_of, medium and low sizes are clamped at zero. The total size is then
// capped at n by trimming the lowest levels.
inline LevelVector reconstruct(const ReleaseSet& c, std::size_t instance) {
  const auto& inst = c.instances.at(instance);
  const auto t = c.thresholds(instance);
  LevelVector v(c.derived.xi, inst.gamma);
  for (const auto& h : inst.high) {
    if (!(h.frequency >= 1.0)) continue;
    const int lvl = level_of(h.frequency, t.xi, t.gamma);
    if (detect_case(lvl, inst.noisy_f2, t).kind == LevelCase::Kind::kHigh) v.add(lvl, 1.0);
  }
  for (const auto* list : {&inst.medium, &inst.low}) {
    for (const auto& e : *list) {
      if (e.size > 0) v.add(e.level, e.size);
    }
  }
  double excess = v.total_size() - static_cast<double>(c.params.n);
  while (excess > 0 && !v.empty()) {
    const auto lowest = v.entries().front();
    if (lowest.size <= excess) {
      v.erase(lowest.level);
      excess -= lowest.size;
    } else {
      v.set(lowest.level, lowest.size - excess);
      excess = 0;
    }
  }
  return v;
}

inline double query_mmc(const ReleaseSet& c, const NormSpec& norm) {
  return mmc_bound(norm, c.params.n, c.params.constants.get("c_mmc"));
}

// Post-processing only: the release set is the sole input.
inline QueryResult query(const ReleaseSet& c, const NormSpec& norm) {
  const double mmc = query_mmc(c, norm);
  if (mmc > c.params.M) {
    std::ostringstream msg;
    msg << norm.to_string() << " has mmc " << mmc << " > M = " << c.params.M;
    throw CalibrationError(msg.str());
  }
  if (c.instances.empty()) throw FormatError("release set has no instances");
  QueryResult r;
  for (std::size_t i = 0; i < c.instances.size(); ++i) {
    const LevelVector v = prune_non_contributing(norm, reconstruct(c, i), c.derived.beta);
    r.per_instance.push_back(eval_on_levels(norm, v));
  }
  r.estimate = median(std::span<const double>(r.per_instance));
  return r;
}

}  // namespace symnorm

#endif  // SYMNORM_QUERY_HPP_
