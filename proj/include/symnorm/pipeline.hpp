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

#ifndef SYMNORM_PIPELINE_HPP_
#define SYMNORM_PIPELINE_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "symnorm/ams_sketch.hpp"
#include "symnorm/count_sketch.hpp"
#include "symnorm/hashing.hpp"
#include "symnorm/level_vector.hpp"
#include "symnorm/levels.hpp"
#include "symnorm/params.hpp"
#include "symnorm/privacy.hpp"
#include "symnorm/random.hpp"
#include "symnorm/release_set.hpp"

namespace symnorm {

// Per-instance budget: a quarter each for partition (noisy F2 + top-K), high,
// medium (split over the s+1 substreams) and low.
inline BudgetLedger budget_ledger(const DerivedParams& d) {
  BudgetLedger ledger;
  const double q = d.eps_instance / 4.0;
  const double dq = d.delta_instance / 4.0;
  const auto top_k = static_cast<double>(d.top_k);
  const auto med = static_cast<double>(d.medium_cap);
  for (int i = 0; i < d.r_instances; ++i) {
    ledger.add({"partition/f2", i, kAmsSensitivity, d.noise_scale_f2, q / 2, dq / 2});
    ledger.add({"partition/topk", i, kEstimateSensitivity * top_k, d.noise_scale_topk, q / 2,
                dq / 2});
    ledger.add({"high", i, kEstimateSensitivity * top_k, d.noise_scale_high, q, dq});
    for (int j = 0; j <= d.s; ++j) {
      ledger.add({"medium/" + std::to_string(j), i, kEstimateSensitivity * med,
                  d.noise_scale_med, q / (d.s + 1), dq / (d.s + 1)});
    }
    ledger.add({"low", i, kLowCountSensitivity, d.noise_scale_low, q, dq});
  }
  return ledger;
}

enum class NoiseComponent : std::uint64_t {
  kF2 = 1,
  kTopK = 2,
  kHigh = 3,
  kMedium = 4,
  kLow = 5,
};

struct PipelineOptions {
  bool pin_noise = false;
  unsigned threads = 0;  // 0: one per instance, up to hardware concurrency
};

// Sketches of one repetition instance: one CountSketch per substream S_0..S_s
// (S_0 is the full stream), an AMS sketch and the subsampler.
struct InstanceState {
  std::uint64_t seed = 0;
  double gamma = 0.75;
  Subsampler sub;
  std::vector<CountSketch> sketches;
  AmsSketch ams;

  void update(std::uint64_t item, std::uint64_t count) {
    const int d = sub.depth(item);
    for (int j = 0; j <= d; ++j) sketches[static_cast<std::size_t>(j)].update(item, count);
    ams.update(item, count);
  }

  std::size_t memory_bytes() const {
    std::size_t b = ams.memory_bytes();
    for (const auto& cs : sketches) b += cs.memory_bytes();
    return b;
  }
};

class Pipeline {
 public:
  Pipeline(PublicParams pub, std::uint64_t seed, PipelineOptions options = {})
      : pub_(std::move(pub)), seed_(seed), options_(options), derived_(derive(pub_, seed)) {
    const auto& d = derived_;
    instances_.reserve(static_cast<std::size_t>(d.r_instances));
    for (int i = 0; i < d.r_instances; ++i) {
      InstanceState st;
      st.seed = derive_seed(seed, {static_cast<std::uint64_t>(i), 0x696e7374ULL});
      st.gamma = instance_gamma(seed, i);
      st.sub = Subsampler::Random(d.sub_degree, d.s, derive_seed(st.seed, {0x737562ULL}));
      for (int j = 0; j <= d.s; ++j) {
        st.sketches.emplace_back(d.rows, d.width,
                                 derive_seed(st.seed, {0x6373ULL, static_cast<std::uint64_t>(j)}));
      }
      st.ams = AmsSketch(d.ams_reps, d.ams_groups, derive_seed(st.seed, {0x616d73ULL}));
      instances_.push_back(std::move(st));
    }
  }

  const PublicParams& params() const { return pub_; }
  const DerivedParams& derived() const { return derived_; }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t updates() const { return updates_; }
  int instance_count() const { return static_cast<int>(instances_.size()); }
  const InstanceState& instance(int i) const { return instances_.at(static_cast<std::size_t>(i)); }

  std::size_t memory_bytes() const {
    std::size_t b = 0;
    for (const auto& st : instances_) b += st.memory_bytes();
    return b;
  }

  void ingest(std::uint64_t item) {
    check_item(item);
    check_room(1);
    for (auto& st : instances_) st.update(item, 1);
    ++updates_;
  }

  // Sketches are linear, so a batch is aggregated per item first and every
  // instance then applies the weighted updates on its own thread.
  void ingest_batch(std::span<const std::uint64_t> items) {
    if (items.empty()) return;
    for (auto it : items) check_item(it);
    check_room(items.size());
    std::vector<std::uint64_t> sorted(items.begin(), items.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::pair<std::uint64_t, std::uint64_t>> agg;
    for (std::size_t i = 0; i < sorted.size();) {
      std::size_t k = i;
      while (k < sorted.size() && sorted[k] == sorted[i]) ++k;
      agg.emplace_back(sorted[i], k - i);
      i = k;
    }
    auto work = [&agg](InstanceState& st) {
      for (const auto& [item, count] : agg) st.update(item, count);
    };
    unsigned threads = options_.threads;
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(instances_.size()));
    if (threads <= 1) {
      for (auto& st : instances_) work(st);
    } else {
      std::vector<std::jthread> pool;
      for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
          for (std::size_t i = t; i < instances_.size(); i += threads) work(instances_[i]);
        });
      }
    }
    updates_ += items.size();
  }

  CaseThresholds thresholds(int inst) const {
    return {derived_.xi, instance(inst).gamma, derived_.beta_high, derived_.t2, derived_.s};
  }

  NoiseSource noise(int inst, NoiseComponent c, double scale, std::uint64_t sub = 0) const {
    if (options_.pin_noise) return NoiseSource::Pinned(scale);
    return NoiseSource::Seeded(
        scale, derive_seed(instance(inst).seed,
                           {0x6e6f697365ULL, static_cast<std::uint64_t>(c), sub}));
  }

  // max(Z + Lap, 0)^2 with Z the AMS estimate of the L2 norm.
  double noisy_f2(int inst) const {
    const double z = instance(inst).ams.estimate() +
                     noise(inst, NoiseComponent::kF2, derived_.noise_scale_f2).at(0);
    return z > 0 ? z * z : 0.0;
  }

  // Noisy top-K over the full stream sketch.
  PrivateHeavyHitterReport partition_coordinates(int inst) const {
    const auto& d = derived_;
    std::vector<std::uint64_t> all(pub_.n);
    std::iota(all.begin(), all.end(), std::uint64_t{0});
    return priv_top_k_release(instance(inst).sketches[0], all, d.top_k, std::sqrt(d.phi_high),
                              noise(inst, NoiseComponent::kTopK, d.noise_scale_topk),
                              pub_.constants.get("c_k"));
  }

  // Coordinates of the partition whose noisy value falls in a high level get
  // a fresh noisy estimate.
  std::vector<HighRelease> estimate_high(int inst, const PrivateHeavyHitterReport& partition,
                                         double f2) const {
    const auto& d = derived_;
    const auto t = thresholds(inst);
    const auto src = noise(inst, NoiseComponent::kHigh, d.noise_scale_high);
    const double eps_high = d.eps_instance / 4.0 / static_cast<double>(d.top_k);
    std::vector<HighRelease> out;
    for (const auto& e : partition.entries) {
      if (!(e.estimate >= 1.0)) continue;
      const int lvl = level_of(e.estimate, d.xi, t.gamma);
      if (detect_case(lvl, f2, t).kind != LevelCase::Kind::kHigh) continue;
      out.push_back({e.index, priv_estimate(instance(inst).sketches[0], e.index,
                                            d.noise_scale_high, src, eps_high)});
    }
    return out;
  }

  std::vector<LevelRelease> estimate_medium(int inst, double f2) const {
    const auto& d = derived_;
    const auto t = thresholds(inst);
    const auto& st = instance(inst);
    const auto members = members_by_depth(inst);
    std::vector<LevelRelease> out;
    for (int j : witnesses(inst, f2, LevelCase::Kind::kMedium)) {
      std::vector<std::uint64_t> cand;
      for (std::uint64_t k = 0; k < pub_.n; ++k) {
        if (members[k] >= j) cand.push_back(k);
      }
      const double zj = std::sqrt(f2 / std::ldexp(1.0, j));
      const auto report = priv_threshold_release(
          st.sketches[static_cast<std::size_t>(j)], cand, zj, std::sqrt(d.phi_med),
          noise(inst, NoiseComponent::kMedium, d.noise_scale_med, static_cast<std::uint64_t>(j)),
          pub_.constants.get("exclusion_c"), pub_.constants.get("c_k"),
          "medium-" + std::to_string(j));
      std::map<int, double> counts;
      for (const auto& e : report.entries) {
        if (!(e.estimate > d.t2)) continue;
        const int lvl = level_of(e.estimate, d.xi, t.gamma);
        const auto lc = detect_case(lvl, f2, t);
        if (lc.kind == LevelCase::Kind::kMedium && lc.witness == j) counts[lvl] += 1;
      }
      for (const auto& [lvl, c] : counts) out.push_back({lvl, rescale(j) * c, j});
    }
    return out;
  }

  // Pre-noise window counts of every low level: coordinates of the witness
  // substream whose rounded estimate lands in the level.
  std::map<int, double> low_window_counts(int inst, double f2) const {
    const auto& d = derived_;
    const auto t = thresholds(inst);
    const auto& st = instance(inst);
    std::map<int, double> counts;
    for (int lvl : low_levels(inst, f2)) counts[lvl] = 0.0;
    if (counts.empty()) return counts;
    const auto members = members_by_depth(inst);
    for (std::uint64_t k = 0; k < pub_.n; ++k) {
      for (int j = 0; j <= members[k]; ++j) {
        const std::int64_t e = st.sketches[static_cast<std::size_t>(j)].estimate(k);
        if (e < 1) continue;
        const int lvl = level_of(static_cast<double>(e), d.xi, t.gamma);
        const auto lc = detect_case(lvl, f2, t);
        if (lc.kind == LevelCase::Kind::kLow && lc.witness == j) counts[lvl] += 1;
      }
    }
    return counts;
  }

  std::vector<LevelRelease> estimate_low(int inst, double f2) const {
    const auto t = thresholds(inst);
    const auto src = noise(inst, NoiseComponent::kLow, derived_.noise_scale_low);
    std::vector<LevelRelease> out;
    for (const auto& [lvl, c] : low_window_counts(inst, f2)) {
      const int j = detect_case(lvl, f2, t).witness;
      out.push_back({lvl, rescale(j) * (c + src.at(static_cast<std::uint64_t>(lvl - min_level(inst)))), j});
    }
    return out;
  }

  InstanceRelease release_instance(int inst) const {
    InstanceRelease r;
    r.gamma = instance(inst).gamma;
    r.noisy_f2 = noisy_f2(inst);
    r.high = estimate_high(inst, partition_coordinates(inst), r.noisy_f2);
    r.medium = estimate_medium(inst, r.noisy_f2);
    r.low = estimate_low(inst, r.noisy_f2);
    return r;
  }

  BudgetLedger ledger() const { return budget_ledger(derived_); }

  ReleaseSet release() const {
    ReleaseSet c;
    c.params = pub_;
    c.derived = derived_;
    c.seed = seed_;
    c.pinned_noise = options_.pin_noise;
    c.memory_bytes = memory_bytes();
    c.ledger = ledger();
    if (!c.ledger.sums_to(pub_.epsilon, pub_.delta) || !c.ledger.scales_cover_sensitivity()) {
      throw std::logic_error("budget ledger does not balance");
    }
    c.instances.resize(instances_.size());
    for (int i = 0; i < instance_count(); ++i) c.instances[static_cast<std::size_t>(i)] = release_instance(i);
    return c;
  }

  double rescale(int j) const {
    if (j == 0) return 1.0;
    return std::ldexp(1.0, j) / (1.0 + pub_.constants.get("c_div") * pub_.alpha);
  }

  // Level range a frequency in [1, m] can occupy.
  int min_level(int inst) const { return level_of(1.0, derived_.xi, instance(inst).gamma); }
  int max_level(int inst) const {
    return level_of(static_cast<double>(std::max<std::uint64_t>(pub_.m, 1)), derived_.xi,
                    instance(inst).gamma);
  }

  std::vector<int> low_levels(int inst, double f2) const {
    const auto t = thresholds(inst);
    std::vector<int> out;
    for (int i = min_level(inst); i <= max_level(inst); ++i) {
      if (detect_case(i, f2, t).kind == LevelCase::Kind::kLow) out.push_back(i);
    }
    return out;
  }

 private:
  void check_item(std::uint64_t item) const {
    if (item >= pub_.n) throw std::out_of_range("stream item out of range");
  }
  void check_room(std::uint64_t count) const {
    if (updates_ + count > pub_.m) throw std::length_error("stream longer than m updates");
  }

  std::vector<int> members_by_depth(int inst) const {
    const auto& sub = instance(inst).sub;
    std::vector<int> depth(pub_.n);
    for (std::uint64_t k = 0; k < pub_.n; ++k) depth[k] = sub.depth(k);
    return depth;
  }

  std::vector<int> witnesses(int inst, double f2, LevelCase::Kind kind) const {
    const auto t = thresholds(inst);
    std::vector<int> js;
    for (int i = min_level(inst); i <= max_level(inst); ++i) {
      const auto lc = detect_case(i, f2, t);
      if (lc.kind == kind) js.push_back(lc.witness);
    }
    std::sort(js.begin(), js.end());
    js.erase(std::unique(js.begin(), js.end()), js.end());
    return js;
  }

  PublicParams pub_;
  std::uint64_t seed_;
  PipelineOptions options_;
  DerivedParams derived_;
  std::vector<InstanceState> instances_;
  std::uint64_t updates_ = 0;
};

}  // namespace symnorm

#endif  // SYMNORM_PIPELINE_HPP_
