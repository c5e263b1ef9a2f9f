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

#include "genie/policy.h"

#include <sstream>

#include <gtest/gtest.h>

#include "genie/errors.h"
#include "genie/grid_file.h"

namespace genie {
namespace {

TEST(PolicyTest, DefaultsComeFromRegistry) {
  const PolicyConfig p;
  EXPECT_EQ(p.get("bid_multiplier"), 1.0);
  EXPECT_EQ(p.get("reserve_score"), 0.0);
  EXPECT_FALSE(p.has("reserve_score"));
  EXPECT_EQ(p.resolved().knobs().size(), knob_registry().size());
}

TEST(PolicyTest, RejectsUnknownAndOutOfRange) {
  EXPECT_THROW(PolicyConfig({{"no_such_knob", 1.0}}), ConfigError);
  EXPECT_THROW(PolicyConfig({{"bid_multiplier", 0.0}}), ConfigError);
  EXPECT_THROW(PolicyConfig({{"mainline_min_pclick", 1.5}}), ConfigError);
  PolicyConfig p;
  EXPECT_THROW(p.set("reserve_score", -1.0), ConfigError);
}

TEST(PolicyTest, WithOverrides) {
  const PolicyConfig p({{"reserve_score", 0.1}});
  const PolicyConfig q = p.with({{"bid_multiplier", 1.5}});
  EXPECT_EQ(q.get("reserve_score"), 0.1);
  EXPECT_EQ(q.get("bid_multiplier"), 1.5);
  EXPECT_EQ(p.get("bid_multiplier"), 1.0);
}

TEST(PolicyTest, FormatSettingIsSorted) {
  EXPECT_EQ(format_setting({}), "");
  EXPECT_EQ(format_setting({{"reserve_score", 0.05}, {"bid_multiplier", 1.2}}),
            "bid_multiplier=1.2,reserve_score=0.05");
}

TEST(GridFileTest, RoundTrip) {
  const std::vector<GridPoint> grid = {
      {1, {{"bid_multiplier", 1.25}}},
      {7, {{"reserve_score", 0.1}, {"quality_exponent", 0.8}}}};
  std::stringstream s;
  write_grid(s, grid);
  EXPECT_EQ(read_grid(s), grid);
}

TEST(GridFileTest, AssignsIdsAndSkipsComments) {
  std::istringstream in("# header\nbid_multiplier=1.1\n\nreserve_score=0.2 # x\n");
  const auto grid = read_grid(in);
  ASSERT_EQ(grid.size(), 2u);
  EXPECT_EQ(grid[0].id, 1);
  EXPECT_EQ(grid[1].id, 2);
  EXPECT_EQ(grid[1].setting.at("reserve_score"), 0.2);
}

TEST(GridFileTest, RejectsBadLines) {
  std::istringstream unknown("foo=1\n");
  EXPECT_THROW(read_grid(unknown), ConfigError);
  std::istringstream dup("id=1 bid_multiplier=1\nid=1 bid_multiplier=2\n");
  EXPECT_THROW(read_grid(dup), ConfigError);
  std::istringstream garbage("bid_multiplier\n");
  EXPECT_THROW(read_grid(garbage), ConfigError);
}

}  // namespace
}  // namespace genie
