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

#ifndef SYMNORM_RELEASE_SET_HPP_
#define SYMNORM_RELEASE_SET_HPP_

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "symnorm/errors.hpp"
#include "symnorm/levels.hpp"
#include "symnorm/params.hpp"
#include "symnorm/privacy.hpp"

namespace symnorm {

struct HighRelease {
  std::uint64_t coordinate = 0;
  double frequency = 0.0;

  bool operator==(const HighRelease&) const = default;
};

struct LevelRelease {
  int level = 0;
  double size = 0.0;
  int witness = 0;

  bool operator==(const LevelRelease&) const = default;
};

struct InstanceRelease {
  double gamma = 0.75;
  double noisy_f2 = 0.0;
  std::vector<HighRelease> high;
  std::vector<LevelRelease> medium;
  std::vector<LevelRelease> low;

  bool operator==(const InstanceRelease&) const = default;
};

// The private artifact. Everything a query needs is in here; queries never
// see the stream.
struct ReleaseSet {
  static constexpr int kFormatVersion = 1;

  PublicParams params;
  DerivedParams derived;
  std::uint64_t seed = 0;
  bool pinned_noise = false;
  std::uint64_t memory_bytes = 0;
  BudgetLedger ledger;
  std::vector<InstanceRelease> instances;

  CaseThresholds thresholds(std::size_t instance) const {
    return {derived.xi, instances.at(instance).gamma, derived.beta_high, derived.t2, derived.s};
  }
};

namespace internal {

using nlohmann::ordered_json;

inline ordered_json params_to_json(const PublicParams& p) {
  ordered_json j;
  j["n"] = p.n;
  j["m"] = p.m;
  j["alpha"] = p.alpha;
  j["epsilon"] = p.epsilon;
  j["delta"] = p.delta;
  j["M"] = p.M;
  j["instances"] = p.instances ? ordered_json(*p.instances) : ordered_json(nullptr);
  j["subsample_levels"] =
      p.subsample_levels ? ordered_json(*p.subsample_levels) : ordered_json(nullptr);
  return j;
}

inline ordered_json derived_to_json(const DerivedParams& d) {
  ordered_json j;
  j["xi"] = d.xi;
  j["beta"] = d.beta;
  j["beta_high"] = d.beta_high;
  j["beta_med"] = d.beta_med;
  j["beta_low"] = d.beta_low;
  j["beta_dblprime"] = d.beta_dblprime;
  j["phi_high"] = d.phi_high;
  j["phi_med"] = d.phi_med;
  j["phi_low"] = d.phi_low;
  j["nu"] = d.nu;
  j["s"] = d.s;
  j["ell"] = d.ell;
  j["gamma"] = d.gamma;
  j["r_instances"] = d.r_instances;
  j["rows"] = d.rows;
  j["width"] = d.width;
  j["ams_reps"] = d.ams_reps;
  j["ams_groups"] = d.ams_groups;
  j["sub_degree"] = d.sub_degree;
  j["top_k"] = d.top_k;
  j["medium_cap"] = d.medium_cap;
  j["t2"] = d.t2;
  j["eps_instance"] = d.eps_instance;
  j["delta_instance"] = d.delta_instance;
  j["noise_scale_f2"] = d.noise_scale_f2;
  j["noise_scale_topk"] = d.noise_scale_topk;
  j["noise_scale_high"] = d.noise_scale_high;
  j["noise_scale_med"] = d.noise_scale_med;
  j["noise_scale_low"] = d.noise_scale_low;
  j["total_cells"] = d.total_cells;
  j["clamped"] = d.clamped;
  return j;
}

template <typename T>
void read_to(const ordered_json& j, const char* key, T& out) {
  if (!j.contains(key)) throw FormatError(std::string("release file: missing key ") + key);
  out = j.at(key).get<T>();
}

inline DerivedParams derived_from_json(const ordered_json& j) {
  DerivedParams d;
  read_to(j, "xi", d.xi);
  read_to(j, "beta", d.beta);
  read_to(j, "beta_high", d.beta_high);
  read_to(j, "beta_med", d.beta_med);
  read_to(j, "beta_low", d.beta_low);
  read_to(j, "beta_dblprime", d.beta_dblprime);
  read_to(j, "phi_high", d.phi_high);
  read_to(j, "phi_med", d.phi_med);
  read_to(j, "phi_low", d.phi_low);
  read_to(j, "nu", d.nu);
  read_to(j, "s", d.s);
  read_to(j, "ell", d.ell);
  read_to(j, "gamma", d.gamma);
  read_to(j, "r_instances", d.r_instances);
  read_to(j, "rows", d.rows);
  read_to(j, "width", d.width);
  read_to(j, "ams_reps", d.ams_reps);
  read_to(j, "ams_groups", d.ams_groups);
  read_to(j, "sub_degree", d.sub_degree);
  read_to(j, "top_k", d.top_k);
  read_to(j, "medium_cap", d.medium_cap);
  read_to(j, "t2", d.t2);
  read_to(j, "eps_instance", d.eps_instance);
  read_to(j, "delta_instance", d.delta_instance);
  read_to(j, "noise_scale_f2", d.noise_scale_f2);
  read_to(j, "noise_scale_topk", d.noise_scale_topk);
  read_to(j, "noise_scale_high", d.noise_scale_high);
  read_to(j, "noise_scale_med", d.noise_scale_med);
  read_to(j, "noise_scale_low", d.noise_scale_low);
  read_to(j, "total_cells", d.total_cells);
  read_to(j, "clamped", d.clamped);
  return d;
}

inline ordered_json levels_to_json(const std::vector<LevelRelease>& v) {
  ordered_json arr = ordered_json::array();
  for (const auto& e : v) arr.push_back({e.level, e.size, e.witness});
  return arr;
}

inline std::vector<LevelRelease> levels_from_json(const ordered_json& arr) {
  std::vector<LevelRelease> out;
  for (const auto& e : arr) {
    if (!e.is_array() || e.size() != 3) throw FormatError("release file: bad level entry");
    out.push_back({e[0].get<int>(), e[1].get<double>(), e[2].get<int>()});
  }
  return out;
}

}  // namespace internal

// Release file format (JSON, keys in this order):
//   format: "symnorm.release", version: 1, seed, pinned_noise, memory_bytes,
//   params: {n, m, alpha, epsilon, delta, M, instances, subsample_levels},
//   constants: {<every knob>: value},
//   derived: {xi, beta, ..., noise scales, total_cells, clamped},
//   budget: [{component, instance, sensitivity, scale, epsilon, delta}],
//   instances: [{gamma, noisy_f2, high: [[coordinate, frequency]],
//                medium: [[level, size, witness]], low: [[level, size, witness]]}]
inline std::string to_json(const ReleaseSet& c) {
  using internal::ordered_json;
  ordered_json j;
  j["format"] = "symnorm.release";
  j["version"] = ReleaseSet::kFormatVersion;
  j["seed"] = c.seed;
  j["pinned_noise"] = c.pinned_noise;
  j["memory_bytes"] = c.memory_bytes;
  j["params"] = internal::params_to_json(c.params);
  ordered_json consts;
  for (const auto& [k, v] : c.params.constants.all()) consts[k] = v;
  j["constants"] = consts;
  j["derived"] = internal::derived_to_json(c.derived);
  ordered_json budget = ordered_json::array();
  for (const auto& e : c.ledger.entries()) {
    budget.push_back({{"component", e.component},
                      {"instance", e.instance},
                      {"sensitivity", e.sensitivity},
                      {"scale", e.scale},
                      {"epsilon", e.epsilon},
                      {"delta", e.delta}});
  }
  j["budget"] = budget;
  ordered_json insts = ordered_json::array();
  for (const auto& inst : c.instances) {
    ordered_json ij;
    ij["gamma"] = inst.gamma;
    ij["noisy_f2"] = inst.noisy_f2;
    ordered_json high = ordered_json::array();
    for (const auto& h : inst.high) high.push_back({h.coordinate, h.frequency});
    ij["high"] = high;
    ij["medium"] = internal::levels_to_json(inst.medium);
    ij["low"] = internal::levels_to_json(inst.low);
    insts.push_back(ij);
  }
  j["instances"] = insts;
  return j.dump(1) + "\n";
}

inline ReleaseSet from_json(const std::string& text) {
  using internal::ordered_json;
  using internal::read_to;
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("release file: ") + e.what());
  }
  try {
    if (j.value("format", "") != "symnorm.release") throw FormatError("release file: wrong format tag");
    if (j.value("version", 0) != ReleaseSet::kFormatVersion) {
      throw FormatError("release file: unsupported version");
    }
    ReleaseSet c;
    read_to(j, "seed", c.seed);
    read_to(j, "pinned_noise", c.pinned_noise);
    read_to(j, "memory_bytes", c.memory_bytes);
    const auto& p = j.at("params");
    read_to(p, "n", c.params.n);
    read_to(p, "m", c.params.m);
    read_to(p, "alpha", c.params.alpha);
    read_to(p, "epsilon", c.params.epsilon);
    read_to(p, "delta", c.params.delta);
    read_to(p, "M", c.params.M);
    if (!p.at("instances").is_null()) c.params.instances = p.at("instances").get<int>();
    if (!p.at("subsample_levels").is_null()) {
      c.params.subsample_levels = p.at("subsample_levels").get<int>();
    }
    for (const auto& [k, v] : j.at("constants").items()) c.params.constants.set(k, v.get<double>());
    c.derived = internal::derived_from_json(j.at("derived"));
    for (const auto& e : j.at("budget")) {
      c.ledger.add({e.at("component").get<std::string>(), e.at("instance").get<int>(),
                    e.at("sensitivity").get<double>(), e.at("scale").get<double>(),
                    e.at("epsilon").get<double>(), e.at("delta").get<double>()});
    }
    for (const auto& ij : j.at("instances")) {
      InstanceRelease inst;
      read_to(ij, "gamma", inst.gamma);
      read_to(ij, "noisy_f2", inst.noisy_f2);
      for (const auto& h : ij.at("high")) {
        inst.high.push_back({h.at(0).get<std::uint64_t>(), h.at(1).get<double>()});
      }
      inst.medium = internal::levels_from_json(ij.at("medium"));
      inst.low = internal::levels_from_json(ij.at("low"));
      c.instances.push_back(std::move(inst));
    }
    if (c.instances.empty()) throw FormatError("release file: no instances");
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("release file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("release file: ") + e.what());
  }
}

inline void write_release(const ReleaseSet& c, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open for writing: " + path);
  out << to_json(c);
  if (!out) throw FormatError("write failed: " + path);
}

inline ReleaseSet read_release(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open release file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

}  // namespace symnorm

#endif  // SYMNORM_RELEASE_SET_HPP_
