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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "symnorm/oracle.hpp"
#include "symnorm/stream_io.hpp"

namespace symnorm {
namespace {

FrequencyVector from_counts(const std::vector<std::uint64_t>& counts) {
  FrequencyVector v(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k) {
    for (std::uint64_t c = 0; c < counts[k]; ++c) v.ingest(k);
  }
  return v;
}

TEST(FrequencyVector, IngestAndBounds) {
  FrequencyVector v(8);
  v.ingest(3);
  EXPECT_EQ(v[3], 1u);
  for (int i = 0; i < 4; ++i) v.ingest(3);
  EXPECT_EQ(v[3], 5u);
  EXPECT_EQ(v.total(), 5u);
  EXPECT_EQ(v.support(), 1u);
  EXPECT_THROW(v.ingest(8), std::out_of_range);
  EXPECT_THROW(FrequencyVector(2'000'000), std::invalid_argument);
}

TEST(OracleNorm, SmallVectors) {
  EXPECT_DOUBLE_EQ(oracle_norm(from_counts({3, 4}), NormSpec::Lp(2)), 5.0);
  EXPECT_DOUBLE_EQ(oracle_norm(from_counts({1, 1, 1}), NormSpec::Lp(1)), 3.0);
  EXPECT_DOUBLE_EQ(oracle_norm(from_counts({5, 4, 3, 2, 1}), NormSpec::TopK(2)), 9.0);
}

TEST(OracleLevels, CountsNonzeros) {
  EXPECT_TRUE(oracle_levels(FrequencyVector(10), 1.3, 0.8).empty());
  const auto same = oracle_levels(from_counts({4, 4, 4}), 1.3, 0.8);
  EXPECT_EQ(same.entries().size(), 1u);
  const auto s = gen_zipf(1000, 20000, 1.0, 5);
  FrequencyVector v(1000);
  for (auto it : s.items) v.ingest(it);
  EXPECT_DOUBLE_EQ(oracle_levels(v, 1.3, 0.8).total_size(), static_cast<double>(v.support()));
}

TEST(OracleClassify, SingleLevel) {
  const auto levels = oracle_levels(from_counts({7, 7}), 2.0, 1.0);
  const auto c = oracle_classify(levels, NormSpec::Lp(2), 0.5, 98, {2.0, 1.0, 0.1, 1e9, 5});
  ASSERT_EQ(c.size(), 1u);
  EXPECT_TRUE(c[0].important);
  EXPECT_TRUE(c[0].contributing);
  EXPECT_EQ(c[0].label.kind, LevelCase::Kind::kHigh);
}

TEST(TailF2, DropsLargest) {
  const auto v = from_counts({10, 3, 2});
  const auto sub = Subsampler::Random(2, 0, 1);
  EXPECT_EQ(tail_f2(v, sub, 0, 0), 113.0L);
  EXPECT_EQ(tail_f2(v, sub, 0, 1), 13.0L);
  EXPECT_EQ(tail_f2(v, sub, 0, 5), 0.0L);
}

}  // namespace
}  // namespace symnorm
