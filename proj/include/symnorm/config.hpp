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

#ifndef SYMNORM_CONFIG_HPP_
#define SYMNORM_CONFIG_HPP_

#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>

#include "symnorm/errors.hpp"
#include "symnorm/params.hpp"

namespace symnorm {

struct Config {
  PublicParams params;
  std::optional<std::uint64_t> seed;
  bool n_set = false;
  bool m_set = false;
};

namespace internal {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  std::istringstream in(text);
  T v{};
  in >> v;
  if (!in || !(in >> std::ws).eof()) throw FormatError("config: bad value for " + key + ": " + text);
  return v;
}

}  // namespace internal

// Applies one key=value setting. Keys are the public parameters, seed, or any
// constant knob.
inline void apply_setting(Config& cfg, const std::string& key, const std::string& value) {
  using internal::parse_number;
  auto& p = cfg.params;
  if (key == "n") {
    p.n = parse_number<std::uint64_t>(key, value);
    cfg.n_set = true;
  } else if (key == "m") {
    p.m = parse_number<std::uint64_t>(key, value);
    cfg.m_set = true;
  } else if (key == "alpha") {
    p.alpha = parse_number<double>(key, value);
  } else if (key == "epsilon") {
    p.epsilon = parse_number<double>(key, value);
  } else if (key == "delta") {
    p.delta = parse_number<double>(key, value);
  } else if (key == "M") {
    p.M = parse_number<double>(key, value);
  } else if (key == "instances") {
    p.instances = parse_number<int>(key, value);
  } else if (key == "subsample_levels") {
    p.subsample_levels = parse_number<int>(key, value);
  } else if (key == "seed") {
    cfg.seed = parse_number<std::uint64_t>(key, value);
  } else if (Constants::known(key)) {
    try {
      p.constants.set(key, parse_number<double>(key, value));
    } catch (const std::invalid_argument& e) {
      throw FormatError(std::string("config: ") + e.what());
    }
  } else {
    throw FormatError("config: unknown key " + key);
  }
}

// key=value per line; '#' starts a comment.
inline Config parse_config(std::istream& in) {
  Config cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = internal::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw FormatError("config line " + std::to_string(lineno) + ": expected key=value");
    }
    apply_setting(cfg, internal::trim(line.substr(0, eq)), internal::trim(line.substr(eq + 1)));
  }
  return cfg;
}

inline Config read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open config: " + path);
  return parse_config(in);
}

// "k=v,k=v" overrides, as given on the command line.
inline void apply_overrides(Config& cfg, const std::string& list) {
  std::istringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = internal::trim(item);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw FormatError("override needs key=value: " + item);
    apply_setting(cfg, internal::trim(item.substr(0, eq)), internal::trim(item.substr(eq + 1)));
  }
}

}  // namespace symnorm

#endif  // SYMNORM_CONFIG_HPP_
