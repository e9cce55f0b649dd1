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

#ifndef SYMNORM_STREAM_IO_HPP_
#define SYMNORM_STREAM_IO_HPP_

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "symnorm/errors.hpp"
#include "symnorm/random.hpp"

namespace symnorm {

// Text stream: header "n=<int> m=<int>", then one item index per line.
struct StreamHeader {
  std::uint64_t n = 0;
  std::uint64_t m = 0;
};

class StreamReader {
 public:
  explicit StreamReader(std::istream& in) : in_(in) {
    std::string line;
    if (!std::getline(in_, line)) throw FormatError("stream: missing header");
    std::istringstream hs(line);
    std::string a, b;
    hs >> a >> b;
    if (a.rfind("n=", 0) != 0 || b.rfind("m=", 0) != 0) {
      throw FormatError("stream: header must be 'n=<int> m=<int>'");
    }
    header_.n = parse(a.substr(2), "header n");
    header_.m = parse(b.substr(2), "header m");
  }

  const StreamHeader& header() const { return header_; }
  std::uint64_t consumed() const { return consumed_; }

  // Appends up to max_items items to out; returns false at end of stream.
  bool next_chunk(std::vector<std::uint64_t>& out, std::size_t max_items) {
    out.clear();
    std::string line;
    while (out.size() < max_items && std::getline(in_, line)) {
      ++lineno_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      const auto v = parse(line, "line " + std::to_string(lineno_));
      if (v >= header_.n) {
        throw FormatError("stream line " + std::to_string(lineno_) + ": index >= n");
      }
      if (++consumed_ > header_.m) throw FormatError("stream: more than m updates");
      out.push_back(v);
    }
    return !out.empty();
  }

 private:
  static std::uint64_t parse(const std::string& s, const std::string& where) {
    std::uint64_t v = 0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end) throw FormatError("stream " + where + ": not an integer");
    return v;
  }

  std::istream& in_;
  StreamHeader header_;
  std::uint64_t consumed_ = 0;
  std::uint64_t lineno_ = 1;
};

struct Stream {
  StreamHeader header;
  std::vector<std::uint64_t> items;
};

inline Stream read_stream(std::istream& in) {
  StreamReader reader(in);
  Stream s;
  s.header = reader.header();
  std::vector<std::uint64_t> chunk;
  while (reader.next_chunk(chunk, 1 << 16)) s.items.insert(s.items.end(), chunk.begin(), chunk.end());
  return s;
}

inline Stream read_stream_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open stream: " + path);
  return read_stream(in);
}

inline void write_stream(std::ostream& out, const Stream& s) {
  out << "n=" << s.header.n << " m=" << s.header.m << '\n';
  std::string buf;
  for (auto v : s.items) {
    buf += std::to_string(v);
    buf += '\n';
    if (buf.size() > (1 << 16)) {
      out << buf;
      buf.clear();
    }
  }
  out << buf;
}

inline void write_stream_file(const std::string& path, const Stream& s) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open for writing: " + path);
  write_stream(out, s);
}

// Generators. Each emits exactly m items drawn with mt19937_64(seed).

inline Stream gen_uniform(std::uint64_t n, std::uint64_t m, std::uint64_t seed) {
  std::mt19937_64 rng(mix64(seed));
  std::uniform_int_distribution<std::uint64_t> pick(0, n - 1);
  Stream s{{n, m}, {}};
  s.items.reserve(m);
  for (std::uint64_t i = 0; i < m; ++i) s.items.push_back(pick(rng));
  return s;
}

// Pr[item k] proportional to (k+1)^-exponent; item 0 is the heaviest.
inline Stream gen_zipf(std::uint64_t n, std::uint64_t m, double exponent, std::uint64_t seed) {
  if (!(exponent >= 0)) throw std::invalid_argument("zipf exponent must be >= 0");
  std::vector<double> w(n);
  for (std::uint64_t k = 0; k < n; ++k) w[k] = std::pow(static_cast<double>(k + 1), -exponent);
  std::discrete_distribution<std::uint64_t> pick(w.begin(), w.end());
  std::mt19937_64 rng(mix64(seed));
  Stream s{{n, m}, {}};
  s.items.reserve(m);
  for (std::uint64_t i = 0; i < m; ++i) s.items.push_back(pick(rng));
  return s;
}

struct Band {
  std::uint64_t count = 0;  // number of coordinates
  double fraction = 0.0;    // each receives ceil(fraction * m) updates
};

// "count@fraction;count@fraction;..."
inline std::vector<Band> parse_bands(const std::string& spec) {
  std::vector<Band> bands;
  std::istringstream in(spec);
  std::string item;
  while (std::getline(in, item, ';')) {
    if (item.empty()) continue;
    const auto at = item.find('@');
    if (at == std::string::npos) throw FormatError("band spec needs count@fraction: " + item);
    Band b;
    try {
      std::size_t used = 0;
      const std::string c = item.substr(0, at), f = item.substr(at + 1);
      b.count = std::stoull(c, &used);
      if (used != c.size()) throw FormatError("");
      b.fraction = std::stod(f, &used);
      if (used != f.size()) throw FormatError("");
    } catch (const std::exception&) {
      throw FormatError("malformed band: " + item);
    }
    if (b.count == 0 || !(b.fraction > 0 && b.fraction <= 1)) {
      throw FormatError("band needs count >= 1 and fraction in (0,1]: " + item);
    }
    bands.push_back(b);
  }
  if (bands.empty()) throw FormatError("empty band spec");
  return bands;
}

// Planted bands on coordinates 0, 1, ... in order; the remaining updates are
// spread uniformly over the other coordinates (or all, if none are left).
// The item order is shuffled.
inline Stream gen_planted(std::uint64_t n, std::uint64_t m, const std::vector<Band>& bands,
                          std::uint64_t seed) {
  Stream s{{n, m}, {}};
  s.items.reserve(m);
  std::uint64_t next = 0;
  for (const auto& b : bands) {
    const auto each = static_cast<std::uint64_t>(std::ceil(b.fraction * static_cast<double>(m)));
    for (std::uint64_t c = 0; c < b.count; ++c, ++next) {
      if (next >= n) throw FormatError("bands use more than n coordinates");
      if (s.items.size() + each > m) throw FormatError("bands use more than m updates");
      s.items.insert(s.items.end(), each, next);
    }
  }
  std::mt19937_64 rng(mix64(seed));
  const std::uint64_t lo = next < n ? next : 0;
  std::uniform_int_distribution<std::uint64_t> pick(lo, n - 1);
  while (s.items.size() < m) s.items.push_back(pick(rng));
  std::shuffle(s.items.begin(), s.items.end(), rng);
  return s;
}

// "uniform", "zipf:<s>" or "planted:<bands>".
inline Stream generate(const std::string& dist, std::uint64_t n, std::uint64_t m,
                       std::uint64_t seed) {
  if (n < 1) throw FormatError("n must be >= 1");
  if (dist == "uniform") return gen_uniform(n, m, seed);
  if (dist.rfind("zipf:", 0) == 0) {
    const std::string arg = dist.substr(5);
    std::size_t used = 0;
    double e = 0;
    try {
      e = std::stod(arg, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != arg.size() || !(e >= 0)) throw FormatError("bad zipf exponent: " + arg);
    return gen_zipf(n, m, e, seed);
  }
  if (dist.rfind("planted:", 0) == 0) return gen_planted(n, m, parse_bands(dist.substr(8)), seed);
  throw FormatError("unknown distribution: " + dist);
}

}  // namespace symnorm

#endif  // SYMNORM_STREAM_IO_HPP_
