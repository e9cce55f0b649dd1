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

#ifndef SYMNORM_PRIVACY_HPP_
#define SYMNORM_PRIVACY_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "symnorm/count_sketch.hpp"
#include "symnorm/params.hpp"
#include "symnorm/random.hpp"

namespace symnorm {

// Counter-based Laplace source. Draw number i is a pure function of
// (key, i), so a component can ask for "the noise of coordinate k" without
// caring about iteration order, and parallel components never share state.
// A pinned source returns 0 for every draw (test mode).
//
// Floating-point inverse-CDF sampling is used as-is; it is not hardened
// against the known low-order-bit side channels.
class NoiseSource {
 public:
  NoiseSource() = default;

  static NoiseSource Seeded(double scale, std::uint64_t key) {
    if (!(scale > 0) || !std::isfinite(scale)) {
      throw std::invalid_argument("NoiseSource: scale must be positive");
    }
    NoiseSource src;
    src.scale_ = scale;
    src.key_ = key;
    return src;
  }

  static NoiseSource FromEntropy(double scale) {
    std::random_device rd;
    const std::uint64_t key = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    return Seeded(scale, key);
  }

  static NoiseSource Pinned(double scale = 1.0) {
    NoiseSource src;
    src.scale_ = scale;
    src.pinned_ = true;
    return src;
  }

  double scale() const { return scale_; }
  bool pinned() const { return pinned_; }

  // x = -s * sgn(u) * ln(1 - 2|u|) for u in (-1/2, 1/2).
  static double laplace_from_uniform(double u, double scale) {
    if (u == 0.0) return 0.0;
    const double mag = -scale * std::log1p(-2.0 * std::fabs(u));
    return u < 0 ? -mag : mag;
  }

  double at(std::uint64_t index) const {
    if (pinned_) return 0.0;
    const std::uint64_t bits = mix64(key_ ^ mix64(index ^ 0xa0761d6478bd642fULL));
    // Midpoint of one of 2^53 cells, so u never reaches +-1/2.
    const double u = (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53 - 0.5;
    return laplace_from_uniform(u, scale_);
  }

  double sample() { return at(counter_++); }

 private:
  double scale_ = 1.0;
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
  bool pinned_ = false;
};

struct BudgetEntry {
  std::string component;
  int instance = 0;
  double sensitivity = 0.0;
  double scale = 0.0;
  double epsilon = 0.0;
  double delta = 0.0;

  bool operator==(const BudgetEntry&) const = default;
};

// Sequential-composition ledger: the total privacy cost is the sum of the
// entries.
class BudgetLedger {
 public:
  void add(BudgetEntry entry) { entries_.push_back(std::move(entry)); }
  const std::vector<BudgetEntry>& entries() const { return entries_; }

  double total_epsilon() const {
    long double s = 0;
    for (const auto& e : entries_) s += e.epsilon;
    return static_cast<double>(s);
  }
  double total_delta() const {
    long double s = 0;
    for (const auto& e : entries_) s += e.delta;
    return static_cast<double>(s);
  }

  bool sums_to(double epsilon, double delta, double rel_tol = 1e-9) const {
    return std::fabs(total_epsilon() - epsilon) <= rel_tol * epsilon &&
           std::fabs(total_delta() - delta) <= rel_tol * std::max(delta, 1e-300);
  }

  // Every Laplace entry must carry at least sensitivity / epsilon noise.
  bool scales_cover_sensitivity() const {
    for (const auto& e : entries_) {
      if (e.scale * e.epsilon < e.sensitivity * (1 - 1e-12)) return false;
    }
    return true;
  }

  bool operator==(const BudgetLedger&) const = default;

 private:
  std::vector<BudgetEntry> entries_;
};

struct PrivateHeavyHitterReport {
  std::vector<HeavyHitter> entries;  // noisy estimates, descending
  double noise_scale = 0.0;
  double threshold = 0.0;
  std::string provenance;  // "high", "medium-<j>", "low-<j>", "partition"
};

// CountSketch estimate of coordinate k plus Laplace noise. The estimate has
// sensitivity 2, so the scale must be at least 2 / eps_prime.
inline double priv_estimate(const CountSketch& cs, std::uint64_t k, double scale,
                            const NoiseSource& noise, double eps_prime) {
  if (!(eps_prime > 0) || scale < kEstimateSensitivity / eps_prime * (1 - 1e-12)) {
    throw std::invalid_argument("priv_estimate: scale below the 2/eps floor");
  }
  return static_cast<double>(cs.estimate(k)) + noise.at(k);
}

namespace internal {

inline void sort_desc(std::vector<HeavyHitter>& v) {
  std::sort(v.begin(), v.end(), [](const HeavyHitter& a, const HeavyHitter& b) {
    return a.estimate != b.estimate ? a.estimate > b.estimate : a.index < b.index;
  });
}

}  // namespace internal

// Private thresholding: releases the candidates whose noisy estimates reach
// a noisy threshold ((1 + C/2) / 2) * eta * Z + Lap(scale). The list is capped
// at ceil(capacity / eta^2) entries, largest first.
inline PrivateHeavyHitterReport priv_threshold_release(
    const CountSketch& cs, std::span<const std::uint64_t> candidates, double ams_z,
    double eta, const NoiseSource& noise, double exclusion_c = 0.5,
    double capacity = 4.0, std::string provenance = "high") {
  if (!(eta > 0 && eta < 1)) throw std::invalid_argument("eta must lie in (0,1)");
  PrivateHeavyHitterReport report;
  report.noise_scale = noise.scale();
  report.provenance = std::move(provenance);
  report.threshold = 0.5 * (1.0 + exclusion_c / 2.0) * eta * ams_z +
                     noise.at(std::numeric_limits<std::uint64_t>::max());
  for (std::uint64_t k : candidates) {
    const double noisy = static_cast<double>(cs.estimate(k)) + noise.at(k);
    if (noisy >= report.threshold) report.entries.push_back({k, noisy});
  }
  internal::sort_desc(report.entries);
  const auto cap = static_cast<std::size_t>(std::ceil(capacity / (eta * eta)));
  if (report.entries.size() > cap) report.entries.resize(cap);
  return report;
}

// Noisy top-K: adds Lap(scale) to every candidate's estimate and releases the
// K largest noisy values with their indices.
inline PrivateHeavyHitterReport priv_top_k_release(
    const CountSketch& cs, std::span<const std::uint64_t> candidates, std::uint64_t k_top,
    double eta, const NoiseSource& noise, double capacity = 1.0) {
  const double cap = std::ceil(capacity / (eta * eta) * (1 - 1e-9));
  if (!(eta > 0 && eta < 1)) throw std::invalid_argument("eta must lie in (0,1)");
  if (static_cast<double>(k_top) > cap) {
    throw std::invalid_argument("priv_top_k_release: K exceeds candidate capacity");
  }
  PrivateHeavyHitterReport report;
  report.noise_scale = noise.scale();
  report.provenance = "partition";
  std::vector<HeavyHitter> all;
  all.reserve(candidates.size());
  for (std::uint64_t k : candidates) {
    all.push_back({k, static_cast<double>(cs.estimate(k)) + noise.at(k)});
  }
  const std::size_t keep = std::min<std::size_t>(all.size(), k_top);
  auto cmp = [](const HeavyHitter& a, const HeavyHitter& b) {
    return a.estimate != b.estimate ? a.estimate > b.estimate : a.index < b.index;
  };
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(keep), all.end(), cmp);
  all.resize(keep);
  report.entries = std::move(all);
  report.threshold = report.entries.empty() ? 0.0 : report.entries.back().estimate;
  return report;
}

struct HistogramAuditResult {
  bool pass = true;
  int bins_checked = 0;
  double worst_ratio = 0.0;      // largest observed count ratio
  double worst_allowance = 0.0;  // e^eps (1 + 3 sqrt(1/count)) at that bin
};

// Two-run histogram audit: bins both sample sets on a shared equal-width grid
// and checks count_a/count_b and count_b/count_a against
// e^eps * (1 + 3 sqrt(1/count)) on every bin where both runs have at least
// min_count samples (count = the smaller of the two).
inline HistogramAuditResult histogram_audit(std::span<const double> a,
                                            std::span<const double> b, double epsilon,
                                            int bins = 50, int min_count = 100) {
  HistogramAuditResult res;
  if (a.empty() || b.empty()) return res;
  double lo = std::min(*std::min_element(a.begin(), a.end()), *std::min_element(b.begin(), b.end()));
  double hi = std::max(*std::max_element(a.begin(), a.end()), *std::max_element(b.begin(), b.end()));
  if (hi <= lo) hi = lo + 1;
  const double w = (hi - lo) / bins;
  std::vector<int> ca(static_cast<std::size_t>(bins)), cb(static_cast<std::size_t>(bins));
  auto bin_of = [&](double v) {
    auto i = static_cast<int>((v - lo) / w);
    return static_cast<std::size_t>(std::clamp(i, 0, bins - 1));
  };
  for (double v : a) ++ca[bin_of(v)];
  for (double v : b) ++cb[bin_of(v)];
  for (std::size_t i = 0; i < ca.size(); ++i) {
    const int lo_count = std::min(ca[i], cb[i]);
    if (lo_count < min_count) continue;
    ++res.bins_checked;
    const double ratio = static_cast<double>(std::max(ca[i], cb[i])) / lo_count;
    const double allowance = std::exp(epsilon) * (1.0 + 3.0 * std::sqrt(1.0 / lo_count));
    if (ratio / allowance > res.worst_ratio / std::max(res.worst_allowance, 1e-300) ||
        res.bins_checked == 1) {
      res.worst_ratio = ratio;
      res.worst_allowance = allowance;
    }
    if (ratio > allowance) res.pass = false;
  }
  return res;
}

}  // namespace symnorm

#endif  // SYMNORM_PRIVACY_HPP_
