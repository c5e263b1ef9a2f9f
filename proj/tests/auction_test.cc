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

#include "genie/auction.h"

#include <gtest/gtest.h>

#include "genie/errors.h"
#include "genie/random.h"
#include "oracles.h"

namespace genie {
namespace {

AdRecord ad(std::int64_t id, double bid, double q) {
  return {id, id, bid, q, q, {}};
}

PageTemplate mainline_sidebar(std::int64_t id, int mainline, int sidebar) {
  return {id,
          {{"mainline", mainline, mainline, 0.0},
           {"sidebar", sidebar, sidebar, 0.0}}};
}

TEST(AuctionTest, HandWorkedGsp) {
  AuctionData data;
  // rank scores 0.4, 0.3, 0.2, 0.05
  data.ads = {ad(1, 2.0, 0.2), ad(2, 1.0, 0.3), ad(3, 0.5, 0.4),
              ad(4, 0.5, 0.1)};
  data.page_templates = {mainline_sidebar(0, 2, 1)};
  data.policy_params = PolicyConfig({{"reserve_score", 0.1}});
  const PageAllocation page = run_auction(data);
  ASSERT_EQ(page.placements.size(), 3u);
  EXPECT_EQ(page.placements[0].ad_id, 1);
  EXPECT_DOUBLE_EQ(page.placements[0].pricing_score, 0.3);
  EXPECT_DOUBLE_EQ(page.placements[0].cpc, 1.5);
  EXPECT_EQ(page.placements[1].ad_id, 2);
  EXPECT_DOUBLE_EQ(page.placements[1].cpc, 0.2 / 0.3);
  // Last eligible ad pays the reserve; ad 4 is below it.
  EXPECT_EQ(page.placements[2].ad_id, 3);
  EXPECT_EQ(page.placements[2].block, "sidebar");
  EXPECT_DOUBLE_EQ(page.placements[2].pricing_score, 0.1);
  EXPECT_DOUBLE_EQ(page.placements[2].cpc, 0.25);
  EXPECT_DOUBLE_EQ(page.utility, 0.4 + 0.3 + 0.2);
}

TEST(AuctionTest, PicksHighestUtilityTemplate) {
  AuctionData data;
  data.ads = {ad(1, 1.0, 0.5), ad(2, 1.0, 0.4), ad(3, 1.0, 0.3)};
  data.page_templates = {mainline_sidebar(0, 1, 0), mainline_sidebar(1, 2, 1)};
  const PageAllocation page = run_auction(data);
  EXPECT_EQ(page.template_id, 1);
  EXPECT_EQ(page.placements.size(), 3u);
}

TEST(AuctionTest, TiesGoToLowerAdIdAndLowerTemplate) {
  AuctionData data;
  data.ads = {ad(9, 1.0, 0.2), ad(4, 1.0, 0.2)};
  data.page_templates = {mainline_sidebar(5, 1, 0), mainline_sidebar(2, 1, 0)};
  const PageAllocation page = run_auction(data);
  EXPECT_EQ(page.template_id, 2);
  EXPECT_EQ(page.placements[0].ad_id, 4);
  EXPECT_DOUBLE_EQ(page.placements[0].cpc, 1.0);
}

TEST(AuctionTest, MinPclickSkipsBlockOnly) {
  AuctionData data;
  data.ads = {ad(1, 5.0, 0.05), ad(2, 1.0, 0.2)};
  data.page_templates = {{0, {{"mainline", 1, 1, 0.1}, {"sidebar", 1, 1, 0.0}}}};
  const PageAllocation page = run_auction(data);
  ASSERT_EQ(page.placements.size(), 2u);
  EXPECT_EQ(page.placements[0].ad_id, 2);
  EXPECT_EQ(page.placements[0].block, "mainline");
  // Ad 1 is not eligible for the mainline, so ad 2 pays the reserve there.
  EXPECT_DOUBLE_EQ(page.placements[0].pricing_score, 0.0);
  EXPECT_EQ(page.placements[1].ad_id, 1);
}

TEST(AuctionTest, NoTemplatesThrows) {
  AuctionData data;
  data.ads = {ad(1, 1.0, 0.1)};
  EXPECT_THROW(run_auction(data), SchemaError);
}

TEST(AuctionTest, MatchesBruteForceOnLargerInstances) {
  Rng rng(3, "auction-test");
  for (int i = 0; i < 2000; ++i) {
    const AuctionData data = testing::random_instance(rng, 9, 4, 5);
    const PageAllocation page = run_auction(data);
    ASSERT_EQ(page, testing::brute_force_allocation(data)) << "instance " << i;
    for (const auto& p : page.placements) {
      EXPECT_GE(p.cpc, 0.0);
      EXPECT_LE(p.pricing_score, p.rank_score);
    }
  }
}

TEST(AuctionTest, SameAllocationIgnoresClickEstimates) {
  AuctionData data;
  data.ads = {ad(1, 1.0, 0.3), ad(2, 1.0, 0.2)};
  data.page_templates = {mainline_sidebar(0, 2, 0)};
  PageAllocation a = run_auction(data);
  PageAllocation b = a;
  b.placements[0].pclick = 0.9;
  EXPECT_TRUE(same_allocation(a, b));
  b.placements[1].cpc += 1e-9;
  EXPECT_FALSE(same_allocation(a, b));
}

}  // namespace
}  // namespace genie
