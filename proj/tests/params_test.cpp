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

#include "symnorm/errors.hpp"
#include "symnorm/norms.hpp"
#include "symnorm/params.hpp"

namespace symnorm {
namespace {

PublicParams desk() {
  PublicParams p;
  p.constants.set("max_cells", 1e30);
  p.constants.set("c_b", 1e-12);
  return p;
}

TEST(Constants, DefaultsAndValidation) {
  Constants c;
  EXPECT_EQ(c.get("c_beta"), 1.0);
  EXPECT_EQ(c.get("exclusion_c"), 0.5);
  EXPECT_THROW(c.get("c_nope"), std::out_of_range);
  EXPECT_THROW(c.set("c_nope", 1.0), std::invalid_argument);
  EXPECT_THROW(c.set("c_h", 0.0), std::invalid_argument);
  c.set("c_h", 2.5);
  EXPECT_EQ(c.get("c_h"), 2.5);
}

TEST(PublicParams, RejectsOutOfRange) {
  PublicParams p;
  p.alpha = 1.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = PublicParams{};
  p.m = p.n - 1;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = PublicParams{};
  p.delta = 0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = PublicParams{};
  p.M = 0.5;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(Derive, BetaForHalfAlpha) {
  auto p = desk();
  p.alpha = 0.5;
  p.m = 1 << 20;
  p.M = 20;
  EXPECT_NEAR(derive(p, 1).beta, 2.44140625e-11, 1e-24);
}

TEST(Derive, DefaultThresholdChain) {
  const auto d = derive(desk(), 1);
  EXPECT_NEAR(d.xi, 1.3, 1e-15);
  EXPECT_NEAR(d.beta / 2.96630859375e-12, 1, 1e-12);
  EXPECT_NEAR(d.beta_high / 6.6741943359375e-16, 1, 1e-12);
  EXPECT_NEAR(d.beta_med / 2.00225830078125e-16, 1, 1e-12);
  EXPECT_NEAR(d.beta_low / 1.9069126674107143e-14, 1, 1e-12);
  EXPECT_NEAR(d.beta_dblprime / 8.756231636069606e-18, 1, 1e-12);
  EXPECT_NEAR(d.phi_high / 6.00677490234375e-17, 1, 1e-12);
  EXPECT_NEAR(d.phi_med / 1.802032470703125e-17, 1, 1e-12);
  EXPECT_NEAR(d.t2 / 2.330701620687903e17, 1, 1e-12);
  EXPECT_EQ(d.ell, 56);
  EXPECT_EQ(d.s, 14);
  EXPECT_EQ(d.r_instances, 20);
  EXPECT_EQ(d.rows % 2, 1);
  EXPECT_EQ(d.ams_groups % 2, 1);
  EXPECT_FALSE(d.clamped);
}

TEST(Derive, XiFromAlpha) {
  auto p = desk();
  p.alpha = 0.25;
  EXPECT_DOUBLE_EQ(derive(p, 3).xi, 1.25);
}

TEST(Derive, GammaDeterministicInRange) {
  const double g1 = derive(desk(), 42).gamma;
  const double g2 = derive(desk(), 42).gamma;
  EXPECT_EQ(g1, g2);
  EXPECT_GT(g1, 0.5);
  EXPECT_LT(g1, 1.0);
  EXPECT_NE(instance_gamma(42, 0), instance_gamma(42, 1));
}

TEST(Derive, ClampsLargeBeta) {
  auto p = desk();
  p.constants.set("c_beta", 1e30);
  const auto d = derive(p, 1);
  EXPECT_TRUE(d.clamped);
  EXPECT_LE(d.beta, 1.0);
  EXPECT_LT(d.beta_high, 1.0);
}

TEST(Derive, InfeasibleWhenOverCellCap) {
  PublicParams p;
  EXPECT_THROW(derive(p, 1), InfeasibleParams);
  try {
    derive(p, 1);
  } catch (const InfeasibleParams& e) {
    EXPECT_NE(std::string(e.what()).find("parameters infeasible"), std::string::npos);
  }
}

TEST(Derive, BudgetScalesCoverSensitivity) {
  auto p = desk();
  p.instances = 2;
  p.epsilon = 2;
  const auto d = derive(p, 1);
  const double q = 2.0 / 2 / 4;
  EXPECT_DOUBLE_EQ(d.eps_instance, 1.0);
  EXPECT_DOUBLE_EQ(d.noise_scale_f2, 2 / (q / 2));
  EXPECT_DOUBLE_EQ(d.noise_scale_low, 4 / q);
  EXPECT_DOUBLE_EQ(d.noise_scale_high, 2 * static_cast<double>(d.top_k) / q);
}

TEST(Derive, OverridesInstancesAndLevels) {
  auto p = desk();
  p.instances = 3;
  p.subsample_levels = 0;
  const auto d = derive(p, 1);
  EXPECT_EQ(d.r_instances, 3);
  EXPECT_EQ(d.s, 0);
}

TEST(MmcBound, LpAndTopKFamilies) {
  EXPECT_DOUBLE_EQ(mmc_bound(NormSpec::Lp(2), 1024), 10.0);
  EXPECT_DOUBLE_EQ(mmc_bound(NormSpec::Lp(4), 1 << 16), 16.0);
  EXPECT_DOUBLE_EQ(mmc_bound(NormSpec::TopK(1024), 1024), 10.0);
  EXPECT_DOUBLE_EQ(mmc_bound(NormSpec::TopK(1), 4096), 768.0);
  EXPECT_DOUBLE_EQ(mmc_bound(NormSpec::Lp(2), 1024, 3.0), 30.0);
  const auto custom = NormSpec::Custom("first", [](std::span<const double> x) { return x[0]; }, {});
  EXPECT_THROW(mmc_bound(custom, 10), std::invalid_argument);
}

}  // namespace
}  // namespace symnorm
