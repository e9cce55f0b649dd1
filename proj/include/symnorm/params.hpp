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

#ifndef SYMNORM_PARAMS_HPP_
#define SYMNORM_PARAMS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "symnorm/errors.hpp"
#include "symnorm/random.hpp"

namespace symnorm {

// Every hidden constant of the construction, by name. All default to 1 except
// where noted. Unknown names are rejected so that typos in config files fail
// loudly.
//
//   c_xi          level base xi = 1 + c_xi * alpha
//   c_beta        importance beta = c_beta * alpha^5 / (M^2 log^5 m)
//   c_h, c_m      high / medium thresholds beta_high, beta_med
//   c_l, c_d      low thresholds beta_low, beta_dblprime
//   c_s           subsampling levels s = ceil(c_s log n)
//   c_r           CountSketch rows ceil(c_r log m), forced odd
//   c_b           CountSketch width ceil(c_b / (phi nu^2))
//   c_nu          heavy-hitter accuracy nu = c_nu * alpha
//   c_inst        repetitions ceil(c_inst log m)
//   c_t2          medium/low frequency cut T2 = c_t2 log n / (beta_med alpha eps)
//   c_k           candidate capacity K = ceil(c_k / phi)
//   c_div         sampled-count divisor (1 + c_div alpha)
//   c_ams         AMS repetitions ceil(c_ams * 6 / alpha^2)
//   c_ams_groups  AMS median groups ceil(c_ams_groups log m), forced odd
//   c_sub_degree  subsampler independence ceil(c_sub_degree log m)
//   c_mmc         constant in the mmc bounds of L_p and top-k
//   lambda        constant of the contributing => important implication
//   exclusion_c   heavy-hitter exclusion constant C (default 0.5)
//   max_cells     memory cap in sketch counters (default 2^28)
class Constants {
 public:
  Constants() = default;

  static const std::map<std::string, double>& defaults() {
    static const std::map<std::string, double> kDefaults = {
        {"c_xi", 1},         {"c_beta", 1},      {"c_h", 1},
        {"c_m", 1},          {"c_l", 1},         {"c_d", 1},
        {"c_s", 1},          {"c_r", 1},         {"c_b", 1},
        {"c_nu", 1},         {"c_inst", 1},      {"c_t2", 1},
        {"c_k", 1},          {"c_div", 1},       {"c_ams", 1},
        {"c_ams_groups", 1}, {"c_sub_degree", 1}, {"c_mmc", 1},
        {"lambda", 1},       {"exclusion_c", 0.5}, {"max_cells", 268435456.0},
    };
    return kDefaults;
  }

  static bool known(const std::string& name) {
    return defaults().count(name) != 0;
  }

  double get(const std::string& name) const {
    if (auto it = overrides_.find(name); it != overrides_.end()) return it->second;
    if (auto it = defaults().find(name); it != defaults().end()) return it->second;
    throw std::out_of_range("unknown constant: " + name);
  }

  Constants& set(const std::string& name, double value) {
    if (!known(name)) throw std::invalid_argument("unknown constant: " + name);
    if (!(value > 0) || !std::isfinite(value)) {
      throw std::invalid_argument("constant " + name + " must be positive");
    }
    overrides_[name] = value;
    return *this;
  }

  // Every knob with its effective value.
  std::map<std::string, double> all() const {
    std::map<std::string, double> out = defaults();
    for (const auto& [k, v] : overrides_) out[k] = v;
    return out;
  }

  bool operator==(const Constants& other) const { return all() == other.all(); }

 private:
  std::map<std::string, double> overrides_;
};

struct PublicParams {
  std::uint64_t n = 1 << 14;
  std::uint64_t m = 1 << 20;
  double alpha = 0.3;
  double epsilon = 1.0;
  double delta = 1e-6;
  double M = 16.0;
  Constants constants;
  // Explicit overrides of the repetition count and of s; unset means "use
  // the formula". subsample_levels = 0 disables subsampling entirely.
  std::optional<int> instances;
  std::optional<int> subsample_levels;

  void validate() const {
    if (!(alpha > 0 && alpha < 1)) throw std::invalid_argument("alpha must lie in (0,1)");
    if (!(epsilon > 0) || !std::isfinite(epsilon)) throw std::invalid_argument("epsilon must be > 0");
    if (!(delta > 0 && delta < 1)) throw std::invalid_argument("delta must lie in (0,1)");
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    if (m < n) throw std::invalid_argument("m must be >= n");
    if (!(M >= 1)) throw std::invalid_argument("M must be >= 1");
    if (instances && *instances < 1) throw std::invalid_argument("instances must be >= 1");
    if (subsample_levels && (*subsample_levels < 0 || *subsample_levels > 60)) {
      throw std::invalid_argument("subsample_levels must lie in [0, 60]");
    }
  }
};

struct DerivedParams {
  double xi = 2.0;
  double beta = 1.0;
  double beta_high = 0.5;
  double beta_med = 0.5;
  double beta_low = 0.5;
  double beta_dblprime = 0.5;
  // Heavy-hitter thresholds (fractions of F2) of the three pipelines.
  double phi_high = 0.5;
  double phi_med = 0.5;
  double phi_low = 0.5;
  double nu = 0.5;
  int s = 0;
  int ell = 1;
  double gamma = 0.75;  // boundary randomizer of instance 0
  int r_instances = 1;
  int rows = 1;
  std::uint64_t width = 1;
  int ams_reps = 1;
  int ams_groups = 1;
  int sub_degree = 2;
  std::uint64_t top_k = 1;       // partition / high candidate capacity
  std::uint64_t medium_cap = 1;  // released medium candidates per substream
  double t2 = 1.0;               // medium/low frequency cut
  // Per-instance privacy shares and the Laplace scales they imply.
  double eps_instance = 1.0;
  double delta_instance = 0.0;
  double noise_scale_f2 = 1.0;
  double noise_scale_topk = 1.0;
  double noise_scale_high = 1.0;
  double noise_scale_med = 1.0;
  double noise_scale_low = 1.0;
  double total_cells = 0.0;
  bool clamped = false;
};

// Sensitivities of the released statistics under a single substituted update.
inline constexpr double kEstimateSensitivity = 2.0;  // CountSketch estimate
inline constexpr double kAmsSensitivity = 2.0;       // AMS Z
inline constexpr double kLowCountSensitivity = 4.0;  // all low window counts

inline double log2_at_least_one(double v) { return std::max(1.0, std::log2(v)); }

// Uniform draw from the open interval (1/2, 1).
inline double draw_gamma(std::uint64_t seed) {
  double u = to_unit_interval(mix64(seed ^ 0x67616d6d61ULL));
  if (u == 0.0) u = 0x1.0p-53;
  return 0.5 + 0.5 * u;
}

inline double instance_gamma(std::uint64_t seed, int instance) {
  return draw_gamma(derive_seed(seed, {static_cast<std::uint64_t>(instance), 0x67ULL}));
}

inline DerivedParams derive(const PublicParams& pub, std::uint64_t seed) {
  pub.validate();
  const Constants& c = pub.constants;
  DerivedParams d;
  const double alpha = pub.alpha;
  const double eps = pub.epsilon;
  const double log_m = log2_at_least_one(static_cast<double>(pub.m));
  const double log_n = log2_at_least_one(static_cast<double>(pub.n));

  auto clamp_unit = [&d](double v) {
    constexpr double kLo = 1e-300;
    constexpr double kHi = 1.0 - 0x1.0p-20;
    if (v < kLo) { d.clamped = true; return kLo; }
    if (v > kHi) { d.clamped = true; return kHi; }
    return v;
  };

  d.xi = 1.0 + c.get("c_xi") * alpha;
  d.beta = c.get("c_beta") * std::pow(alpha, 5) / (pub.M * pub.M * std::pow(log_m, 5));
  if (d.beta > 1.0) { d.clamped = true; d.beta = 1.0; }
  d.beta_high = clamp_unit(c.get("c_h") * alpha * alpha * d.beta * eps * eps / (log_m * log_m));
  d.beta_med = clamp_unit(c.get("c_m") * std::pow(alpha, 3) * d.beta * eps * eps / (log_m * log_m));
  d.beta_low = clamp_unit(c.get("c_l") * alpha * alpha * d.beta * eps / log_n);
  d.beta_dblprime = clamp_unit(c.get("c_d") * d.beta_low * alpha * alpha * std::pow(eps, 3) / (log_n * log_n));
  d.phi_high = clamp_unit(alpha * alpha * d.beta_high);
  d.phi_med = clamp_unit(alpha * alpha * d.beta_med * eps * eps);
  d.phi_low = clamp_unit(d.beta_dblprime);
  d.nu = std::min(c.get("c_nu") * alpha, 1.0 - 0x1.0p-20);

  d.ell = static_cast<int>(std::ceil(std::log(2.0 * static_cast<double>(pub.m)) / std::log(d.xi)));
  d.s = pub.subsample_levels ? *pub.subsample_levels
                             : std::min(60, static_cast<int>(std::ceil(c.get("c_s") * log_n)));
  d.gamma = instance_gamma(seed, 0);
  d.r_instances = pub.instances ? *pub.instances
                                : std::max(1, static_cast<int>(std::ceil(c.get("c_inst") * log_m)));

  int rows = std::max(1, static_cast<int>(std::ceil(c.get("c_r") * log_m)));
  d.rows = rows % 2 == 0 ? rows + 1 : rows;
  const double phi_min = std::min({d.phi_high, d.phi_med, d.phi_low});
  const double raw_width = std::ceil(c.get("c_b") / (phi_min * d.nu * d.nu));
  const double ams_reps = std::ceil(c.get("c_ams") * 6.0 / (alpha * alpha));
  int groups = std::max(1, static_cast<int>(std::ceil(c.get("c_ams_groups") * log_m)));
  d.ams_groups = groups % 2 == 0 ? groups + 1 : groups;
  d.total_cells = static_cast<double>(d.r_instances) *
                  (static_cast<double>(d.s + 1) * d.rows * raw_width + ams_reps * d.ams_groups);
  if (!std::isfinite(d.total_cells) || d.total_cells > c.get("max_cells") ||
      raw_width > 0x1.0p62) {
    std::ostringstream msg;
    msg << "sketches need " << d.total_cells << " counters, cap is " << c.get("max_cells");
    throw InfeasibleParams(msg.str());
  }
  d.width = static_cast<std::uint64_t>(raw_width);
  d.ams_reps = static_cast<int>(ams_reps);
  d.sub_degree = std::max(2, static_cast<int>(std::ceil(c.get("c_sub_degree") * log_m)));

  const double n_d = static_cast<double>(pub.n);
  d.top_k = static_cast<std::uint64_t>(std::min(n_d, std::ceil(c.get("c_k") / d.phi_high)));
  d.medium_cap = static_cast<std::uint64_t>(std::min(n_d, std::ceil(c.get("c_k") / d.phi_med)));
  d.t2 = c.get("c_t2") * log_n / (d.beta_med * alpha * eps);

  // Budget: eps/r per instance, split evenly over partition, high, medium and
  // low. The partition share is split between the noisy F2 and the top-K.
  d.eps_instance = eps / d.r_instances;
  d.delta_instance = pub.delta / d.r_instances;
  const double quarter = d.eps_instance / 4.0;
  d.noise_scale_f2 = kAmsSensitivity / (quarter / 2.0);
  d.noise_scale_topk = kEstimateSensitivity * static_cast<double>(d.top_k) / (quarter / 2.0);
  d.noise_scale_high = kEstimateSensitivity * static_cast<double>(d.top_k) / quarter;
  d.noise_scale_med = kEstimateSensitivity * static_cast<double>(d.medium_cap) * (d.s + 1) / quarter;
  d.noise_scale_low = kLowCountSensitivity / quarter;
  return d;
}

}  // namespace symnorm

#endif  // SYMNORM_PARAMS_HPP_
