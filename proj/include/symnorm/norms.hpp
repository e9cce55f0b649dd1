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

#ifndef SYMNORM_NORMS_HPP_
#define SYMNORM_NORMS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "symnorm/level_vector.hpp"

namespace symnorm {

// A symmetric norm to evaluate: L_p, top-k (sum of the k largest magnitudes)
// or a user callback. Custom evaluators receive the raw vector in dense
// evaluation and the nonincreasing materialized multiset on level vectors;
// they must declare their own mmc bound.
struct NormSpec {
  enum class Family { kLp, kTopK, kCustom };
  using Evaluator = std::function<double(std::span<const double>)>;

  Family family = Family::kLp;
  double p = 2.0;
  std::uint64_t k = 1;
  Evaluator custom;
  std::string name;
  std::optional<double> declared_mmc;

  static NormSpec Lp(double p) {
    if (!(p > 0) || !std::isfinite(p)) throw std::invalid_argument("L_p needs p > 0");
    NormSpec s;
    s.family = Family::kLp;
    s.p = p;
    return s;
  }
  static NormSpec TopK(std::uint64_t k) {
    if (k < 1) throw std::invalid_argument("top-k needs k >= 1");
    NormSpec s;
    s.family = Family::kTopK;
    s.k = k;
    return s;
  }
  static NormSpec Custom(std::string name, Evaluator fn, std::optional<double> mmc) {
    NormSpec s;
    s.family = Family::kCustom;
    s.name = std::move(name);
    s.custom = std::move(fn);
    s.declared_mmc = mmc;
    return s;
  }

  // "lp:<p>", "topk:<k>" or "custom:<name>".
  std::string to_string() const {
    std::ostringstream os;
    switch (family) {
      case Family::kLp: os << "lp:" << p; break;
      case Family::kTopK: os << "topk:" << k; break;
      case Family::kCustom: os << "custom:" << name; break;
    }
    return os.str();
  }

  static NormSpec Parse(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("norm spec needs family:param");
    const std::string fam = text.substr(0, colon);
    const std::string arg = text.substr(colon + 1);
    std::size_t used = 0;
    try {
      if (fam == "lp") {
        const double p = std::stod(arg, &used);
        if (used == arg.size()) return Lp(p);
      } else if (fam == "topk") {
        const auto k = std::stoull(arg, &used);
        if (used == arg.size()) return TopK(k);
      }
    } catch (const std::logic_error&) {
    }
    throw std::invalid_argument("unsupported norm spec: " + text);
  }
};

// Upper bounds on the maximum modulus of concentration, logs base 2:
// c log n for L_p with p <= 2, c n^(1/2 - 1/p) for p > 2, c sqrt(n/k) log n
// for top-k. Custom norms must carry a declared bound.
inline double mmc_bound(const NormSpec& norm, std::uint64_t n, double c = 1.0) {
  const double nd = static_cast<double>(n);
  const double log_n = std::max(1.0, std::log2(nd));
  switch (norm.family) {
    case NormSpec::Family::kLp:
      if (norm.p <= 2) return c * log_n;
      return c * std::pow(nd, 0.5 - 1.0 / norm.p);
    case NormSpec::Family::kTopK:
      if (norm.k > n) throw std::invalid_argument("top-k needs k <= n");
      return c * std::sqrt(nd / static_cast<double>(norm.k)) * log_n;
    case NormSpec::Family::kCustom:
      if (norm.declared_mmc) return *norm.declared_mmc;
      break;
  }
  throw std::invalid_argument("mmc unknown, supply M manually");
}

// Dense evaluation. L_p and top-k sort magnitudes before summing, which makes
// them exactly invariant under permutations and sign flips.
inline double eval_dense(const NormSpec& norm, std::span<const double> x) {
  if (norm.family == NormSpec::Family::kCustom) return norm.custom(x);
  std::vector<double> mag(x.size());
  std::transform(x.begin(), x.end(), mag.begin(), [](double v) { return std::fabs(v); });
  std::sort(mag.begin(), mag.end(), std::greater<>());
  if (norm.family == NormSpec::Family::kTopK) {
    long double s = 0;
    const auto k = std::min<std::size_t>(mag.size(), norm.k);
    for (std::size_t i = 0; i < k; ++i) s += mag[i];
    return static_cast<double>(s);
  }
  if (mag.empty() || mag.front() == 0) return 0.0;
  // Factor out the largest magnitude to stay in range.
  const long double top = mag.front();
  long double s = 0;
  for (double v : mag) s += std::pow(static_cast<long double>(v) / top, static_cast<long double>(norm.p));
  return static_cast<double>(top * std::pow(s, 1.0L / static_cast<long double>(norm.p)));
}

// L applied to the multiset holding b_i copies of gamma*xi^i. Negative sizes
// are treated as zero.
inline double eval_on_levels(const NormSpec& norm, const LevelVector& v) {
  const auto& es = v.entries();
  switch (norm.family) {
    case NormSpec::Family::kLp: {
      if (!(norm.p > 0)) throw std::invalid_argument("L_p needs p > 0");
      if (norm.p == 1) {
        // Same summation order as top-k, so top-n and L_1 agree bit for bit.
        long double s = 0;
        for (auto it = es.rbegin(); it != es.rend(); ++it) {
          if (it->size > 0) s += static_cast<long double>(it->size) * v.weight(it->level);
        }
        return static_cast<double>(s);
      }
      double max_term = -std::numeric_limits<double>::infinity();
      std::vector<double> terms;
      for (const auto& e : es) {
        if (e.size <= 0) continue;
        terms.push_back(std::log(e.size) + norm.p * v.log_weight(e.level));
        max_term = std::max(max_term, terms.back());
      }
      if (terms.empty()) return 0.0;
      long double acc = 0;
      for (double t : terms) acc += std::exp(static_cast<long double>(t - max_term));
      return std::exp((max_term + static_cast<double>(std::log(acc))) / norm.p);
    }
    case NormSpec::Family::kTopK: {
      double remaining = static_cast<double>(norm.k);
      long double s = 0;
      for (auto it = es.rbegin(); it != es.rend() && remaining > 0; ++it) {
        if (it->size <= 0) continue;
        const double take = std::min(remaining, it->size);
        s += static_cast<long double>(take) * v.weight(it->level);
        remaining -= take;
      }
      return static_cast<double>(s);
    }
    case NormSpec::Family::kCustom: {
      std::vector<double> multiset;
      for (auto it = es.rbegin(); it != es.rend(); ++it) {
        const auto copies = static_cast<std::size_t>(std::llround(std::max(0.0, it->size)));
        multiset.insert(multiset.end(), copies, v.weight(it->level));
      }
      return norm.custom(multiset);
    }
  }
  return 0.0;
}

struct PropertyReport {
  bool ok = true;
  std::string property;  // "permutation", "sign", "homogeneity", "triangle"
  std::vector<double> x;
  std::vector<double> y;  // second vector (triangle) or transformed x
  double lhs = 0.0;
  double rhs = 0.0;
};

// Spot-checks the symmetric-norm axioms on random vectors: permutation and
// sign invariance exactly, homogeneity and the triangle inequality up to a
// relative 1e-9. Stops at the first counterexample.
inline PropertyReport property_check(const NormSpec& norm, std::size_t dim, int trials,
                                     std::uint64_t seed = 1) {
  constexpr double kRel = 1e-9;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> expo(-3.0, 3.0);
  std::uniform_real_distribution<double> factor(-10.0, 10.0);
  std::uniform_int_distribution<int> density(0, 2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  // mix of dense, 10% and single-entry supports
  auto random_vector = [&] {
    std::vector<double> v(dim);
    const double scale = std::pow(10.0, expo(rng));
    const int d = density(rng);
    const double keep = d == 0 ? 1.0 : d == 1 ? 0.1 : 1.0 / static_cast<double>(dim);
    for (auto& e : v) e = unit(rng) < keep ? gauss(rng) * scale : 0.0;
    return v;
  };
  auto fail = [](std::string what, std::vector<double> x, std::vector<double> y, double l,
                 double r) {
    return PropertyReport{false, std::move(what), std::move(x), std::move(y), l, r};
  };

  for (int t = 0; t < trials; ++t) {
    const auto x = random_vector();
    const auto y = random_vector();
    const double lx = eval_dense(norm, x);

    auto perm = x;
    std::shuffle(perm.begin(), perm.end(), rng);
    if (double lp = eval_dense(norm, perm); lp != lx) return fail("permutation", x, perm, lp, lx);

    auto flipped = x;
    for (auto& e : flipped) {
      if (rng() & 1) e = -e;
    }
    if (double ls = eval_dense(norm, flipped); ls != lx) return fail("sign", x, flipped, ls, lx);

    const double c = factor(rng);
    auto scaled = x;
    for (auto& e : scaled) e *= c;
    const double lc = eval_dense(norm, scaled);
    if (std::fabs(lc - std::fabs(c) * lx) > kRel * std::fabs(c) * lx) {
      return fail("homogeneity", x, scaled, lc, std::fabs(c) * lx);
    }

    auto sum = x;
    for (std::size_t i = 0; i < dim; ++i) sum[i] += y[i];
    const double lsum = eval_dense(norm, sum);
    const double bound = lx + eval_dense(norm, y);
    if (lsum > bound * (1 + kRel)) return fail("triangle", x, y, lsum, bound);
  }
  return {};
}

}  // namespace symnorm

#endif  // SYMNORM_NORMS_HPP_
