// Copyright 2026 The Genie Authors
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

#include "genie/importance_sampling.h"

#include <cmath>

#include <gtest/gtest.h>

#include "genie/errors.h"
#include "genie/marketplace.h"
#include "genie/randomization.h"

namespace genie {
namespace {

TEST(TruncatedGaussianTest, DensityIntegratesToOne) {
  for (const TruncatedGaussian g :
       {TruncatedGaussian{0.0, 1.0, -1.0, 1.0},
        TruncatedGaussian{0.1, 0.02, 0.04, 0.16},
        TruncatedGaussian{2.0, 0.5, 2.5, 4.0},
        TruncatedGaussian{0.0, 3.0, -0.2, 0.1}}) {
    const int steps = 200000;
    const double h = (g.upper - g.lower) / steps;
    double total = 0.0;
    for (int i = 0; i < steps; ++i) {
      total += std::exp(g.log_density(g.lower + (i + 0.5) * h)) * h;
    }
    EXPECT_NEAR(total, 1.0, 1e-6);
    EXPECT_TRUE(std::isinf(g.log_density(g.upper + 1e-9)));
    EXPECT_TRUE(std::isinf(g.log_density(g.lower - 1e-9)));
  }
}

TEST(TruncatedGaussianTest, SamplesStayInBounds) {
  Rng rng(1);
  const TruncatedGaussian far{0.0, 1.0, 6.0, 6.5};
  const TruncatedGaussian near{0.0, 1.0, -2.0, 2.0};
  for (int i = 0; i < 2000; ++i) {
    const double a = far.sample(rng);
    EXPECT_GE(a, 6.0);
    EXPECT_LE(a, 6.5);
    const double b = near.sample(rng);
    EXPECT_GE(b, -2.0);
    EXPECT_LE(b, 2.0);
  }
}

TEST(RandomizationSpecTest, Validate) {
  EXPECT_NO_THROW(RandomizationSpec::single("reserve_score", 0.1, 0.02).validate());
  EXPECT_THROW(RandomizationSpec::single("reserve_score", 0.1, 0.0).validate(),
               ConfigError);
  EXPECT_THROW(RandomizationSpec::single("nope", 0.1, 0.02).validate(),
               ConfigError);
  EXPECT_THROW(RandomizationSpec{}.validate(), ConfigError);
  RandomizationSpec twice = RandomizationSpec::single("reserve_score", 0.1, 0.02);
  twice.knobs.push_back(twice.knobs[0]);
  EXPECT_THROW(twice.validate(), ConfigError);
  EXPECT_THROW(ProposalDistribution::shifted(
                   RandomizationSpec::single("reserve_score", 0.1, 0.02), {}),
               ConfigError);
}

class IsTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    model_ = new MarketplaceModel(generate_marketplace(GeneratorConfig{}, 8));
    spec_ = new RandomizationSpec(
        RandomizationSpec::single("reserve_score", 0.1, 0.02));
    logs_ = new LogDataset(
        generate_randomized_logs(*model_, PolicyConfig(), *spec_, 3000, 9));
  }
  static void TearDownTestSuite() {
    delete logs_;
    delete spec_;
    delete model_;
  }
  static MarketplaceModel* model_;
  static RandomizationSpec* spec_;
  static LogDataset* logs_;
};

MarketplaceModel* IsTest::model_ = nullptr;
RandomizationSpec* IsTest::spec_ = nullptr;
LogDataset* IsTest::logs_ = nullptr;

TEST_F(IsTest, LoggedKnobValuesFollowTheSpec) {
  ASSERT_TRUE(logs_->randomization.has_value());
  double sum = 0.0;
  for (const auto& r : logs_->records) {
    const double v = r.policy_params.get("reserve_score");
    EXPECT_GE(v, 0.04);
    EXPECT_LE(v, 0.16);
    sum += v;
  }
  EXPECT_NEAR(sum / logs_->records.size(), 0.1, 0.002);
}

TEST_F(IsTest, ConstantMetricAlgebra) {
  const auto target = ProposalDistribution::shifted(*spec_, {0.115});
  const auto w = importance_weights(*logs_, target);
  const auto c = [](const AuctionData&) { return 2.5; };
  const IsEstimate plain = is_estimate(*logs_, target, c);
  const IsEstimate norm = is_estimate(*logs_, target, c, true);
  EXPECT_NEAR(plain.estimate, 2.5 * plain.weight_sum / plain.n, 1e-12);
  EXPECT_NEAR(norm.estimate, 2.5, 1e-12);
  EXPECT_NEAR(norm.standard_error, 0.0, 1e-12);
  EXPECT_LE(plain.ess, static_cast<double>(plain.n) + 1e-9);
  EXPECT_GT(plain.ess, 0.0);
  double sw = 0.0, sw2 = 0.0;
  for (double v : w) {
    EXPECT_GT(v, 0.0);
    sw += v;
    sw2 += v * v;
  }
  EXPECT_NEAR(plain.ess, sw * sw / sw2, 1e-9 * plain.ess);
  // Importance weights average to one under the logging distribution.
  EXPECT_NEAR(sw / w.size(), 1.0, 0.05);
}

TEST_F(IsTest, IdentityProposal) {
  const auto same = ProposalDistribution::same_as(*spec_);
  for (double v : importance_weights(*logs_, same)) EXPECT_EQ(v, 1.0);
  const IsEstimate e = is_estimate(*logs_, same, realized_revenue);
  double mean = 0.0;
  for (const auto& r : logs_->records) mean += realized_revenue(r);
  EXPECT_NEAR(e.estimate, mean / logs_->records.size(), 1e-12);
  EXPECT_EQ(e.ess, static_cast<double>(logs_->records.size()));
  EXPECT_TRUE(support_warnings(same, *spec_).empty());
}

TEST_F(IsTest, OutOfSupportIsAWeightError) {
  LogDataset bad = *logs_;
  bad.records[17].policy_params.set("reserve_score", 0.5);
  EXPECT_THROW(importance_weights(bad, ProposalDistribution::same_as(*spec_)),
               WeightError);
  LogDataset plain = *logs_;
  plain.randomization.reset();
  EXPECT_THROW(importance_weights(plain, ProposalDistribution::same_as(*spec_)),
               SchemaError);
  const auto other = ProposalDistribution::same_as(
      RandomizationSpec::single("bid_multiplier", 1.0, 0.1));
  EXPECT_THROW(importance_weights(*logs_, other), SchemaError);
}

TEST_F(IsTest, WiderProposalWarns) {
  EXPECT_TRUE(support_warnings(ProposalDistribution::shifted(*spec_, {0.2}),
                               *spec_)
                  .empty());
  ProposalDistribution wide = ProposalDistribution::same_as(*spec_);
  wide.knobs[0].distribution.upper = 0.3;
  EXPECT_FALSE(support_warnings(wide, *spec_).empty());
}

}  // namespace
}  // namespace genie
