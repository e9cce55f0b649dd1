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

#ifndef SYMNORM_AUDIT_HPP_
#define SYMNORM_AUDIT_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <random>
#include <vector>

#include "symnorm/count_sketch.hpp"
#include "symnorm/privacy.hpp"
#include "symnorm/random.hpp"

namespace symnorm {

struct SensitivityAuditResult {
  int pairs = 0;
  std::int64_t max_delta = 0;  // over all pairs and coordinates
};

// Neighboring pairs: a random stream of the given length over [0, n) and the
// same stream with one update removed. Both are sketched with the same seed
// and every coordinate's estimate is compared.
inline SensitivityAuditResult countsketch_sensitivity_audit(int rows, std::uint64_t width,
                                                            std::uint64_t n,
                                                            std::uint64_t length, int pairs,
                                                            std::uint64_t seed) {
  SensitivityAuditResult res;
  std::mt19937_64 rng(mix64(seed));
  std::uniform_int_distribution<std::uint64_t> pick(0, n - 1);
  for (int t = 0; t < pairs; ++t) {
    std::vector<std::uint64_t> items(length);
    for (auto& v : items) v = pick(rng);
    const std::uint64_t sketch_seed = rng();
    CountSketch a(rows, width, sketch_seed);
    CountSketch b(rows, width, sketch_seed);
    const std::size_t drop = length == 0 ? 0 : std::uniform_int_distribution<std::size_t>(0, length - 1)(rng);
    for (std::size_t i = 0; i < items.size(); ++i) {
      a.update(items[i]);
      if (i != drop) b.update(items[i]);
    }
    for (std::uint64_t k = 0; k < n; ++k) {
      res.max_delta = std::max<std::int64_t>(res.max_delta, std::llabs(a.estimate(k) - b.estimate(k)));
    }
    ++res.pairs;
  }
  return res;
}

// Two-run audit of a noisy count: runs releases of count and of count +
// sensitivity, each with fresh Laplace(scale) noise, and compares histograms.
inline HistogramAuditResult scalar_release_audit(double count, double sensitivity, double scale,
                                                 double epsilon, int runs, std::uint64_t seed,
                                                 int bins = 50, int min_count = 100) {
  std::vector<double> a(static_cast<std::size_t>(runs)), b(static_cast<std::size_t>(runs));
  const auto na = NoiseSource::Seeded(scale, derive_seed(seed, {1}));
  const auto nb = NoiseSource::Seeded(scale, derive_seed(seed, {2}));
  for (int i = 0; i < runs; ++i) {
    a[static_cast<std::size_t>(i)] = count + na.at(static_cast<std::uint64_t>(i));
    b[static_cast<std::size_t>(i)] = count + sensitivity + nb.at(static_cast<std::uint64_t>(i));
  }
  return histogram_audit(a, b, epsilon, bins, min_count);
}

}  // namespace symnorm

#endif  // SYMNORM_AUDIT_HPP_
