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

#ifndef SYMNORM_COUNT_SKETCH_HPP_
#define SYMNORM_COUNT_SKETCH_HPP_

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "symnorm/errors.hpp"
#include "symnorm/hashing.hpp"
#include "symnorm/median.hpp"
#include "symnorm/random.hpp"

namespace symnorm {

// CountSketch over an insertion-only stream. r rows (forced odd) of b signed
// counters; row j hashes item k to bucket h_j(k) with sign s_j(k). Bucket
// hashes are pairwise independent, sign hashes 4-wise independent. All hash
// functions are regenerated from a single seed.
class CountSketch {
 public:
  static constexpr std::array<char, 4> kMagic = {'S', 'N', 'C', 'S'};
  static constexpr std::uint32_t kFormatVersion = 1;

  CountSketch() = default;

  CountSketch(int rows, std::uint64_t width, std::uint64_t seed)
      : rows_(rows % 2 == 0 ? rows + 1 : rows), width_(width), seed_(seed) {
    if (rows < 1 || width < 1) {
      throw std::invalid_argument("CountSketch: rows and width must be >= 1");
    }
    table_.assign(static_cast<std::size_t>(rows_) * width_, 0);
    init_hashes();
  }

  int rows() const { return rows_; }
  std::uint64_t width() const { return width_; }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t update_count() const { return updates_; }
  std::span<const std::int64_t> counters() const { return table_; }

  std::uint64_t bucket(int row, std::uint64_t item) const {
    return bucket_hash_[static_cast<std::size_t>(row)](item);
  }
  int sign(int row, std::uint64_t item) const {
    return (sign_hash_[static_cast<std::size_t>(row)].raw(item) & 1) ? 1 : -1;
  }

  void update(std::uint64_t item) { update(item, 1); }

  // Equivalent to `count` unit updates of item.
  void update(std::uint64_t item, std::uint64_t count) {
    const auto c = static_cast<std::int64_t>(count);
    for (int j = 0; j < rows_; ++j) {
      table_[index(j, bucket(j, item))] += sign(j, item) * c;
    }
    updates_ += count;
  }

  // Sign-corrected counter of row j for item k.
  std::int64_t row_value(int row, std::uint64_t item) const {
    return sign(row, item) * table_[index(row, bucket(row, item))];
  }

  // Median over rows of the sign-corrected counters.
  std::int64_t estimate(std::uint64_t item) const {
    std::vector<std::int64_t> per_row(static_cast<std::size_t>(rows_));
    for (int j = 0; j < rows_; ++j) per_row[static_cast<std::size_t>(j)] = row_value(j, item);
    return median(std::span<const std::int64_t>(per_row));
  }

  bool compatible(const CountSketch& other) const {
    return rows_ == other.rows_ && width_ == other.width_ &&
           seed_ == other.seed_;
  }

  // Linear merge: the result equals the sketch of the concatenated streams.
  void merge(const CountSketch& other) {
    if (!compatible(other)) {
      throw std::invalid_argument("CountSketch: merge needs identical shape and seed");
    }
    for (std::size_t i = 0; i < table_.size(); ++i) table_[i] += other.table_[i];
    updates_ += other.updates_;
  }

  std::size_t memory_bytes() const {
    return table_.size() * sizeof(std::int64_t);
  }

  // Blob layout, all integers little-endian:
  //   magic "SNCS" | u32 version | u32 rows | u64 width | u64 seed |
  //   u64 update count | rows*width i64 counters, row-major.
  std::vector<std::uint8_t> serialize() const {
    std::vector<std::uint8_t> out;
    out.reserve(36 + table_.size() * 8);
    out.insert(out.end(), kMagic.begin(), kMagic.end());
    put(out, kFormatVersion);
    put(out, static_cast<std::uint32_t>(rows_));
    put(out, width_);
    put(out, seed_);
    put(out, updates_);
    for (std::int64_t c : table_) put(out, static_cast<std::uint64_t>(c));
    return out;
  }

  static CountSketch deserialize(std::span<const std::uint8_t> blob) {
    std::size_t pos = 0;
    if (blob.size() < 36 || !std::equal(kMagic.begin(), kMagic.end(), blob.begin())) {
      throw FormatError("CountSketch blob: bad magic");
    }
    pos = 4;
    const auto version = get<std::uint32_t>(blob, pos);
    if (version != kFormatVersion) {
      throw FormatError("CountSketch blob: unsupported version " + std::to_string(version));
    }
    const auto rows = get<std::uint32_t>(blob, pos);
    const auto width = get<std::uint64_t>(blob, pos);
    const auto seed = get<std::uint64_t>(blob, pos);
    const auto updates = get<std::uint64_t>(blob, pos);
    if (rows % 2 == 0 || rows == 0 || width == 0 ||
        (blob.size() - pos) / 8 != static_cast<std::uint64_t>(rows) * width ||
        (blob.size() - pos) % 8 != 0) {
      throw FormatError("CountSketch blob: inconsistent shape");
    }
    CountSketch cs(static_cast<int>(rows), width, seed);
    for (auto& c : cs.table_) c = static_cast<std::int64_t>(get<std::uint64_t>(blob, pos));
    cs.updates_ = updates;
    return cs;
  }

 private:
  std::size_t index(int row, std::uint64_t b) const {
    return static_cast<std::size_t>(row) * width_ + b;
  }

  void init_hashes() {
    bucket_hash_.clear();
    sign_hash_.clear();
    for (int j = 0; j < rows_; ++j) {
      const auto uj = static_cast<std::uint64_t>(j);
      bucket_hash_.push_back(KWiseHash::Random(2, width_, derive_seed(seed_, {uj, 0})));
      sign_hash_.push_back(KWiseHash::Random(4, 2, derive_seed(seed_, {uj, 1})));
    }
  }

  template <typename U>
  static void put(std::vector<std::uint8_t>& out, U v) {
    for (std::size_t i = 0; i < sizeof(U); ++i) {
      out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
  }

  template <typename U>
  static U get(std::span<const std::uint8_t> in, std::size_t& pos) {
    if (pos + sizeof(U) > in.size()) throw FormatError("CountSketch blob: truncated");
    U v = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) {
      v |= static_cast<U>(static_cast<U>(in[pos + i]) << (8 * i));
    }
    pos += sizeof(U);
    return v;
  }

  int rows_ = 1;
  std::uint64_t width_ = 1;
  std::uint64_t seed_ = 0;
  std::uint64_t updates_ = 0;
  std::vector<std::int64_t> table_;
  std::vector<KWiseHash> bucket_hash_;
  std::vector<KWiseHash> sign_hash_;
};

struct HeavyHitter {
  std::uint64_t index = 0;
  double estimate = 0.0;
};

struct HeavyHitterReport {
  std::vector<HeavyHitter> entries;  // sorted by estimate, descending
  double threshold = 0.0;
  double eta = 0.0;
  double nu = 0.0;
};

// Non-private nu-approximate eta L2 heavy hitters. Reports every k in [0, n)
// whose estimate reaches ((1 + C/2) / 2) * eta * l2, i.e. the midpoint between
// the inclusion level eta*L2 and the exclusion level (C*eta/2)*L2. The list is
// capped at ceil(capacity / eta^2) entries.
inline HeavyHitterReport heavy_hitters(const CountSketch& cs, std::uint64_t n,
                                       double l2, double eta, double nu,
                                       double exclusion_c = 0.5,
                                       double capacity = 4.0) {
  if (!(eta > 0 && eta < 1) || !(nu > 0 && nu < 1)) {
    throw std::invalid_argument("heavy_hitters: eta and nu must lie in (0,1)");
  }
  HeavyHitterReport report;
  report.eta = eta;
  report.nu = nu;
  report.threshold = 0.5 * (1.0 + exclusion_c / 2.0) * eta * l2;
  for (std::uint64_t k = 0; k < n; ++k) {
    const auto est = static_cast<double>(cs.estimate(k));
    if (est > 0 && est >= report.threshold) report.entries.push_back({k, est});
  }
  std::sort(report.entries.begin(), report.entries.end(),
            [](const HeavyHitter& a, const HeavyHitter& b) {
              return a.estimate != b.estimate ? a.estimate > b.estimate : a.index < b.index;
            });
  const auto cap = static_cast<std::size_t>(std::ceil(capacity / (eta * eta)));
  if (report.entries.size() > cap) report.entries.resize(cap);
  return report;
}

}  // namespace symnorm

#endif  // SYMNORM_COUNT_SKETCH_HPP_
