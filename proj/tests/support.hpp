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

#ifndef SYMNORM_TESTS_SUPPORT_HPP_
#define SYMNORM_TESTS_SUPPORT_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "symnorm/params.hpp"
#include "symnorm/pipeline.hpp"

namespace symnorm::testing {

// Desk-scale targets, mapped back onto the constant knobs.
struct Tuning {
  std::uint64_t n = 4096;
  std::uint64_t m = 100000;
  double alpha = 0.3;
  double epsilon = 1.0;
  double delta = 1e-6;
  double M = 16;
  int instances = 1;
  int s = 0;
  double beta = 1e-3;
  double beta_high = 1e-4;  // high iff xi^{2i} >= beta_high * F2
  double t2 = 1e12;         // medium/low cut
  double top_k = 64;
  double medium_cap = 64;
  double width = 1 << 16;
  double rows = 7;
  double ams_reps = 60;
  double ams_groups = 5;
  double c_xi = 1.0;
  double c_div = 1.0;
};

inline PublicParams tuned_params(const Tuning& t) {
  PublicParams p;
  p.n = t.n;
  p.m = t.m;
  p.alpha = t.alpha;
  p.epsilon = t.epsilon;
  p.delta = t.delta;
  p.M = t.M;
  p.instances = t.instances;
  p.subsample_levels = t.s;
  auto& c = p.constants;
  c.set("max_cells", 1e300).set("c_xi", t.c_xi).set("c_div", t.c_div);
  c.set("c_b", 1e-300);
  const double log_m = std::max(1.0, std::log2(static_cast<double>(t.m)));
  c.set("c_r", t.rows / log_m);
  c.set("c_ams", t.ams_reps * t.alpha * t.alpha / 6.0);
  c.set("c_ams_groups", t.ams_groups / log_m);

  auto d = derive(p, 0);
  c.set("c_beta", t.beta / d.beta);
  d = derive(p, 0);
  c.set("c_h", t.beta_high / d.beta_high);
  d = derive(p, 0);
  c.set("c_k", t.top_k * d.phi_high);
  // phi_med = c_k / medium_cap, reached through beta_med.
  const double phi_med = c.get("c_k") / t.medium_cap;
  c.set("c_m", c.get("c_m") * phi_med / d.phi_med);
  d = derive(p, 0);
  c.set("c_t2", t.t2 / d.t2);
  d = derive(p, 0);
  const double phi_min = std::min({d.phi_high, d.phi_med, d.phi_low});
  c.set("c_b", t.width * phi_min * d.nu * d.nu * (1 - 1e-12));
  return p;
}

inline void ingest_all(Pipeline& p, std::span<const std::uint64_t> items) {
  constexpr std::size_t kChunk = 1 << 16;
  for (std::size_t i = 0; i < items.size(); i += kChunk) {
    p.ingest_batch(items.subspan(i, std::min(kChunk, items.size() - i)));
  }
}

}  // namespace symnorm::testing

#endif  // SYMNORM_TESTS_SUPPORT_HPP_
