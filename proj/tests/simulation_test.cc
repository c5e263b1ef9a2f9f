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

#include "genie/simulation.h"

#include <gtest/gtest.h>

#include "genie/click_model.h"
#include "genie/errors.h"
#include "genie/log_format.h"
#include "genie/marketplace.h"
#include "oracles.h"

namespace genie {
namespace {

class SimulationTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    model_ = new MarketplaceModel(generate_marketplace(GeneratorConfig{}, 5));
    logs_ = new LogDataset(generate_logs(
        *model_, PolicyConfig({{"reserve_score", 0.05}}), 400, std::nullopt, 6));
    click_ = new ClickModel(train_click_model(
        impressions_from_logs(logs_->records), ClickModelSpec{}));
  }
  static void TearDownTestSuite() {
    delete model_;
    delete logs_;
    delete click_;
  }
  static MarketplaceModel* model_;
  static LogDataset* logs_;
  static ClickModel* click_;
};

MarketplaceModel* SimulationTest::model_ = nullptr;
LogDataset* SimulationTest::logs_ = nullptr;
ClickModel* SimulationTest::click_ = nullptr;

TEST_F(SimulationTest, RestoreIsExact) {
  Rng rng(1, "restore");
  for (int i = 0; i < 2000; ++i) {
    AuctionData data = logs_->records[rng.index(logs_->records.size())];
    const AuctionData before = data;
    const Restorer r = Modifier(testing::random_grid_point(rng, 1)).apply(data);
    r.restore(data);
    ASSERT_EQ(data, before);
  }
}

TEST_F(SimulationTest, InvalidSettingLeavesDataUntouched) {
  AuctionData data = logs_->records[0];
  const AuctionData before = data;
  EXPECT_THROW(Modifier({1, {{"bid_multiplier", -2.0}}}).apply(data),
               ConfigError);
  EXPECT_EQ(data, before);
}

// Replaying a logged request under a setting reproduces the auction the
// generator runs when that setting is live.
TEST_F(SimulationTest, ModifiedReplayMatchesLiveAuction) {
  const PolicyConfig logged({{"reserve_score", 0.05}});
  const std::vector<std::map<std::string, double>> settings = {
      {{"bid_multiplier", 1.5}},
      {{"reserve_score", 0.12}},
      {{"quality_exponent", 0.7}},
      {{"mainline_capacity", 1}},
      {{"mainline_min_pclick", 0.15}},
      {{"bid_multiplier", 0.8}, {"mainline_capacity", 2}}};
  for (const auto& setting : settings) {
    for (std::uint64_t r = 0; r < 100; ++r) {
      AuctionData data = logs_->records[r];
      const Restorer restorer = Modifier({1, setting}).apply(data);
      const PageAllocation replayed = run_auction(data);
      restorer.restore(data);
      const AuctionData live =
          generate_request(*model_, logged.with(setting), 6, r);
      ASSERT_TRUE(same_allocation(replayed, live.logged_allocation))
          << format_setting(setting) << " request " << r;
    }
  }
}

TEST_F(SimulationTest, ResultsFollowGridOrder) {
  AuctionData data = logs_->records[3];
  const std::vector<GridPoint> grid = {{5, {{"reserve_score", 0.1}}},
                                       {2, {{"bid_multiplier", 2.0}}},
                                       {9, {{"quality_exponent", 0.5}}}};
  const auto results = simulate_request(data, grid, *click_);
  ASSERT_EQ(results.size(), 4u);
  EXPECT_EQ(results[0].point.id, 0);
  EXPECT_EQ(results[1].point.id, 5);
  EXPECT_EQ(results[2].point.id, 2);
  EXPECT_EQ(results[3].point.id, 9);
}

TEST_F(SimulationTest, FailingPointIsRecorded) {
  AuctionData data = logs_->records[0];
  const AuctionData before = data;
  const auto results =
      simulate_request(data, {{{1, {{"reserve_score", -1.0}}}}}, *click_);
  ASSERT_EQ(results.size(), 2u);
  EXPECT_FALSE(results[0].kpi.error.has_value());
  EXPECT_TRUE(results[1].kpi.error.has_value());
  EXPECT_EQ(data, before);
}

TEST_F(SimulationTest, BaselineHandling) {
  const std::vector<GridPoint> grid = {{1, {{"bid_multiplier", 1.1}}}};
  const auto full = with_baseline(grid);
  ASSERT_EQ(full.size(), 2u);
  EXPECT_EQ(full[0].id, 0);
  EXPECT_TRUE(full[0].setting.empty());
  const std::vector<GridPoint> bad = {{0, {{"bid_multiplier", 1.1}}}};
  EXPECT_THROW(with_baseline(bad), ConfigError);
  const std::vector<GridPoint> dup = {{1, {}}, {1, {}}};
  EXPECT_THROW(with_baseline(dup), ConfigError);
  EXPECT_THROW(generate_modifiers(std::vector<GridPoint>{}), ConfigError);
  const std::vector<GridPoint> unknown = {{1, {{"nope", 1.0}}}};
  EXPECT_THROW(generate_modifiers(unknown), ConfigError);
}

TEST_F(SimulationTest, DatasetCubeIndependentOfWorkers) {
  const std::vector<GridPoint> grid = with_baseline(std::vector<GridPoint>{
      {1, {{"bid_multiplier", 1.3}}}, {2, {{"reserve_score", 0.2}}}});
  const DataCube one = simulate_dataset(logs_->records, grid, *click_,
                                        default_dimensions(), 1);
  const DataCube four = simulate_dataset(logs_->records, grid, *click_,
                                         default_dimensions(), 4);
  EXPECT_EQ(one, four);
}

TEST_F(SimulationTest, BaselineReplayEqualsLoggedAllocations) {
  const auto acc = replay_check(logs_->records);
  EXPECT_EQ(acc.accuracy, 1.0);
  EXPECT_EQ(acc.matched, logs_->records.size());
  auto tampered = logs_->records;
  tampered[7].logged_allocation.placements.clear();
  const auto bad = replay_check(tampered);
  EXPECT_EQ(bad.matched, tampered.size() - 1);
  ASSERT_EQ(bad.mismatched_request_ids.size(), 1u);
  EXPECT_EQ(bad.mismatched_request_ids[0], tampered[7].request_id);
}

TEST_F(SimulationTest, TrueClickFunctionReproducesOracle) {
  const DataCube replay = simulate_dataset(
      logs_->records, with_baseline(std::vector<GridPoint>{}),
      true_click_function(model_->true_click), {"query_class"});
  EXPECT_EQ(replay, true_kpi_of_logs(*model_, logs_->records, {"query_class"}));
}

}  // namespace
}  // namespace genie
