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

// Acceptance run: one PASS/FAIL line per criterion. Exit status is nonzero
// when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"
#include "symnorm/symnorm.hpp"

namespace symnorm {
namespace {

using testing::ingest_all;
using testing::tuned_params;
using testing::Tuning;

struct Outcome {
  bool pass = false;
  std::string detail;
};

template <typename... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

FrequencyVector frequencies(std::uint64_t n, const std::vector<std::uint64_t>& items) {
  FrequencyVector v(n);
  for (auto it : items) v.ingest(it);
  return v;
}

Outcome countsketch_sensitivity() {
  const auto r = countsketch_sensitivity_audit(7, 256, 1 << 10, 10000, 100, 1);
  return {r.max_delta <= 2, fmt("pairs=%d max_delta=%lld bound=2", r.pairs, static_cast<long long>(r.max_delta))};
}

Outcome median_sensitivity() {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-100, 100), unit(-1, 1);
  double worst = 0;
  bool ok = true;
  for (double c : {0.5, 1.0, 2.0}) {
    for (int t = 0; t < 1000; ++t) {
      std::vector<double> x(1 + rng() % 64), y;
      for (auto& e : x) e = u(rng);
      y = x;
      for (auto& e : y) e += c * unit(rng);
      const double shift = std::fabs(median(std::span<const double>(x)) - median(std::span<const double>(y)));
      worst = std::max(worst, shift / c);
      ok &= shift <= c;
    }
  }
  return {ok, fmt("vectors=3000 worst_shift/C=%.6f", worst)};
}

Outcome low_size_sensitivity() {
  Tuning t;
  t.n = 1024;
  t.m = 10000;
  t.s = 4;
  t.width = 1 << 15;
  const auto params = tuned_params(t);
  std::mt19937_64 rng(3);
  int worst_windows = 0;
  double worst_change = 0;
  for (int pair = 0; pair < 100; ++pair) {
    auto items = gen_zipf(t.n, t.m, 1.1, rng()).items;
    const std::uint64_t seed = rng();
    Pipeline a(params, seed, {true, 1}), b(params, seed, {true, 1});
    a.ingest_batch(items);
    items.erase(items.begin() + static_cast<std::ptrdiff_t>(rng() % items.size()));
    b.ingest_batch(items);
    const double f2 = a.noisy_f2(0);
    const auto ca = a.low_window_counts(0, f2), cb = b.low_window_counts(0, f2);
    int windows = 0;
    for (const auto& [lvl, c] : ca) {
      const double d = std::fabs(c - cb.at(lvl));
      worst_change = std::max(worst_change, d);
      windows += d != 0;
    }
    worst_windows = std::max(worst_windows, windows);
  }
  return {worst_windows <= 2 && worst_change <= 1,
          fmt("pairs=100 max_windows_changed=%d max_change=%g", worst_windows, worst_change)};
}

Outcome exact_regime() {
  Tuning t;
  t.n = 1 << 12;
  t.m = 100000;
  t.s = 0;
  t.M = 1000;
  t.width = 1 << 17;
  // every coordinate fits the partition; beta near its formula value (~2e-15)
  t.top_k = t.n;
  t.beta = 1e-12;
  const auto params = tuned_params(t);
  const std::vector<NormSpec> norms = {NormSpec::Lp(0.5), NormSpec::Lp(1),    NormSpec::Lp(1.5),
                                       NormSpec::Lp(2),   NormSpec::TopK(1),  NormSpec::TopK(10),
                                       NormSpec::TopK(t.n)};
  double worst = 0;
  std::string worst_norm;
  for (int trial = 0; trial < 20; ++trial) {
    const double exponent = 0.6 + 0.05 * trial;
    const auto items = gen_zipf(t.n, t.m, exponent, 100 + static_cast<std::uint64_t>(trial)).items;
    const auto v = frequencies(t.n, items);
    Pipeline p(params, 200 + static_cast<std::uint64_t>(trial), {true, 0});
    ingest_all(p, items);
    const auto c = p.release();
    for (const auto& norm : norms) {
      const double err = std::fabs(query(c, norm).estimate / oracle_norm(v, norm) - 1);
      if (err > worst) {
        worst = err;
        worst_norm = norm.to_string();
      }
    }
  }
  return {worst <= t.alpha, fmt("streams=20 norms=7 worst_rel_error=%.4f (%s) tol=0.3", worst, worst_norm.c_str())};
}

Outcome private_accuracy() {
  Tuning t;
  t.n = 1 << 14;
  t.m = 1000000;
  t.epsilon = 2;
  t.delta = 1e-6;
  t.instances = 3;
  t.s = 0;
  t.c_xi = 1.0 / 3;
  t.beta_high = 1e-4;
  t.top_k = 100;
  t.t2 = 1e12;
  t.width = 1 << 16;
  const auto params = tuned_params(t);
  int good_l1 = 0, good_l2 = 0;
  std::vector<double> e1, e2;
  for (int trial = 0; trial < 20; ++trial) {
    const auto items = gen_zipf(t.n, t.m, 1.1, 300 + static_cast<std::uint64_t>(trial)).items;
    const auto v = frequencies(t.n, items);
    Pipeline p(params, 400 + static_cast<std::uint64_t>(trial));
    ingest_all(p, items);
    const auto c = p.release();
    const double a = std::fabs(query(c, NormSpec::Lp(1)).estimate / oracle_norm(v, NormSpec::Lp(1)) - 1);
    const double b = std::fabs(query(c, NormSpec::Lp(2)).estimate / oracle_norm(v, NormSpec::Lp(2)) - 1);
    good_l1 += a <= 0.5;
    good_l2 += b <= 0.5;
    e1.push_back(a);
    e2.push_back(b);
  }
  const double max1 = *std::max_element(e1.begin(), e1.end());
  const double max2 = *std::max_element(e2.begin(), e2.end());
  return {good_l1 >= 16 && good_l2 >= 16,
          fmt("trials=20 L1_within_0.5=%d L2_within_0.5=%d need=16 max_err_L1=%.3f max_err_L2=%.3f",
              good_l1, good_l2, max1, max2)};
}

Outcome tail_f2_bound() {
  const std::uint64_t n = 1 << 14, m = 100000;
  const int s = 14;
  const double log_m = std::log2(static_cast<double>(m));
  const std::uint64_t drop = 64;
  int violations = 0;
  double worst = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto v = frequencies(n, gen_zipf(n, m, 1.1, 500 + static_cast<std::uint64_t>(trial)).items);
    const auto sub = Subsampler::Random(17, s, 600 + static_cast<std::uint64_t>(trial));
    const long double f2 = v.f2();
    for (int j = 0; j <= s; ++j) {
      const long double bound = 200.0L * log_m / std::ldexp(1.0L, j) * f2;
      const long double tail = tail_f2(v, sub, j, drop);
      worst = std::max(worst, static_cast<double>(tail / bound));
      violations += tail > bound;
    }
  }
  return {violations == 0, fmt("trials=50 levels=0..%d drop_top=%llu violations=%d worst_tail/bound=%.3g", s,
                               static_cast<unsigned long long>(drop), violations, worst)};
}

Outcome contributing_implies_important() {
  std::mt19937_64 rng(7);
  const double xi = 1.3, beta = 0.1;
  int counterexamples = 0, checked = 0;
  for (int t = 0; t < 1000; ++t) {
    LevelVector v(xi);
    const int levels = 1 + static_cast<int>(rng() % 30);
    for (int i = 0; i < levels; ++i) {
      v.set(static_cast<int>(rng() % 60), std::floor(std::exp(std::uniform_real_distribution<double>(0, 9)(rng))));
    }
    const auto n = static_cast<std::uint64_t>(std::max(2.0, v.total_size()));
    for (const auto& norm : {NormSpec::Lp(1), NormSpec::Lp(2), NormSpec::TopK(std::min<std::uint64_t>(10, n))}) {
      const double weaker = implied_importance(beta, mmc_bound(norm, n), n, xi);
      for (const auto& e : v.entries()) {
        if (!is_contributing(norm, v, e.level, beta)) continue;
        ++checked;
        counterexamples += !is_important(v, e.level, weaker);
      }
    }
  }
  return {counterexamples == 0 && checked > 0,
          fmt("vectors=1000 contributing_levels_checked=%d counterexamples=%d", checked, counterexamples)};
}

Outcome multi_query() {
  Tuning t;
  t.n = 2048;
  t.m = 50000;
  t.instances = 3;
  t.M = 1e6;
  t.width = 1 << 14;
  Pipeline p(tuned_params(t), 8);
  p.ingest_batch(gen_zipf(t.n, t.m, 1.1, 9).items);
  const auto c = p.release();
  const std::string frozen = to_json(c);
  std::vector<NormSpec> norms;
  for (int i = 1; i <= 60; ++i) norms.push_back(NormSpec::Lp(0.05 * i));
  for (int k = 1; k <= 40; ++k) norms.push_back(NormSpec::TopK(static_cast<std::uint64_t>(k * 50)));
  std::vector<double> batch;
  for (const auto& norm : norms) batch.push_back(query(c, norm).estimate);
  int mismatches = 0;
  for (std::size_t i = 0; i < norms.size(); ++i) {
    const auto fresh = from_json(frozen);
    mismatches += query(fresh, norms[i]).estimate != batch[i];
  }
  const bool unchanged = to_json(c) == frozen && c.ledger == from_json(frozen).ledger;
  return {mismatches == 0 && unchanged,
          fmt("queries=%zu mismatches=%d release_unchanged=%s", norms.size(), mismatches, unchanged ? "yes" : "no")};
}

Outcome laplace_statistics() {
  const auto src = NoiseSource::Seeded(1.0, 10);
  constexpr int kDraws = 1000000;
  long double sum = 0, sq = 0;
  int tail = 0;
  for (int i = 0; i < kDraws; ++i) {
    const double x = src.at(static_cast<std::uint64_t>(i));
    sum += x;
    sq += static_cast<long double>(x) * x;
    tail += std::fabs(x) > std::log(100.0);
  }
  const double mean = static_cast<double>(sum / kDraws);
  const double var = static_cast<double>(sq / kDraws) - mean * mean;
  const double p = static_cast<double>(tail) / kDraws;
  return {std::fabs(mean) <= 0.01 && std::fabs(var - 2) <= 0.05 && std::fabs(p - 0.01) <= 0.003,
          fmt("draws=1e6 mean=%.5f var=%.5f tail=%.5f", mean, var, p)};
}

Outcome dp_audit() {
  const double eps = 1.0;
  const auto r = scalar_release_audit(1000.0, 2.0, 8.0 / eps, eps, 10000, 11);
  return {r.pass && r.bins_checked > 0, fmt("runs=10000x2 bins_checked=%d worst_ratio=%.4f allowance=%.4f",
                                            r.bins_checked, r.worst_ratio, r.worst_allowance)};
}

Outcome norm_properties() {
  std::vector<NormSpec> norms = {NormSpec::Lp(0.5), NormSpec::Lp(1), NormSpec::Lp(1.5), NormSpec::Lp(2),
                                 NormSpec::Lp(3), NormSpec::TopK(1), NormSpec::TopK(10), NormSpec::TopK(100)};
  bool ok = true;
  std::ostringstream detail;
  detail << "vectors=1000 dim=1000";
  for (const auto& norm : norms) {
    const auto r = property_check(norm, 1000, 1000, 12);
    if (!r.ok) {
      ok = false;
      detail << " " << norm.to_string() << ":" << r.property << "(lhs=" << r.lhs << ",rhs=" << r.rhs << ")";
    }
  }
  if (ok) detail << " all norms pass";
  return {ok, detail.str()};
}

}  // namespace
}  // namespace symnorm

int main() {
  using Check = std::function<symnorm::Outcome()>;
  const std::vector<std::pair<const char*, Check>> checks = {
      {"countsketch neighbor sensitivity", symnorm::countsketch_sensitivity},
      {"median sensitivity", symnorm::median_sensitivity},
      {"low window count sensitivity", symnorm::low_size_sensitivity},
      {"exact regime oracle equivalence", symnorm::exact_regime},
      {"private end-to-end accuracy", symnorm::private_accuracy},
      {"subsampled tail F2 bound", symnorm::tail_f2_bound},
      {"contributing implies important", symnorm::contributing_implies_important},
      {"multi-query post-processing", symnorm::multi_query},
      {"laplace sampler statistics", symnorm::laplace_statistics},
      {"empirical DP histogram audit", symnorm::dp_audit},
      {"norm evaluator property suite", symnorm::norm_properties},
  };
  int failed = 0;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    const auto r = checks[i].second();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %2zu %s: %s  %s  [%.1fs]\n", i + 1, r.pass ? "PASS" : "FAIL", checks[i].first,
                r.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !r.pass;
  }
  std::printf("%zu criteria, %d failed\n", checks.size(), failed);
  return failed == 0 ? 0 : 1;
}
