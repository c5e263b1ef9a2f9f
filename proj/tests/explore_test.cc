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

#include "genie/explore.h"

#include <cmath>

#include <gtest/gtest.h>

#include "genie/errors.h"
#include "genie/random.h"

namespace genie {
namespace {

TEST(ObjectiveTest, Parse) {
  const Objective o = Objective::parse("max:rpm, cy>=-0.01 ,|mliy|<=0.02");
  EXPECT_EQ(o.metric, "rpm");
  EXPECT_TRUE(o.maximize);
  ASSERT_EQ(o.constraints.size(), 2u);
  EXPECT_EQ(o.constraints[0].metric, "cy");
  EXPECT_EQ(o.constraints[0].lower, -0.01);
  EXPECT_TRUE(std::isinf(o.constraints[0].upper));
  EXPECT_TRUE(o.constraints[1].absolute);
  EXPECT_EQ(o.constraints[1].upper, 0.02);
  EXPECT_EQ(o.metrics(), (std::vector<std::string>{"rpm", "cy", "mliy"}));

  EXPECT_TRUE(o.constraints[1].satisfied(-0.01));
  EXPECT_FALSE(o.constraints[1].satisfied(-0.03));
  EXPECT_FALSE(o.constraints[0].satisfied(std::nan("")));

  EXPECT_FALSE(Objective::parse("min:cpc").maximize);
  EXPECT_THROW(Objective::parse("rpm"), ConfigError);
  EXPECT_THROW(Objective::parse("up:rpm"), ConfigError);
  EXPECT_THROW(Objective::parse("max:profit"), ConfigError);
  EXPECT_THROW(Objective::parse("max:rpm,cy>x"), ConfigError);
  EXPECT_THROW(Objective::parse("max:rpm,cy>=abc"), ConfigError);
  EXPECT_THROW(Objective::parse("max:rpm,|cy|>=0.1"), ConfigError);
}

TEST(ExploreTest, CandidatesStayInRanges) {
  Rng rng(1);
  const std::vector<Range> ranges = {{0.0, 1.0}, {5.0, 5.0}, {-2.0, 2.0}};
  const std::vector<std::vector<double>> start = {{0.5, 5.0, 0.0}};
  const auto out = explore(start, 2000, ranges, rng);
  ASSERT_EQ(out.size(), 2000u);
  for (const auto& x : out) {
    for (std::size_t d = 0; d < ranges.size(); ++d) {
      EXPECT_GE(x[d], ranges[d].first);
      EXPECT_LE(x[d], ranges[d].second);
    }
    EXPECT_EQ(x[1], 5.0);
  }
  EXPECT_THROW(explore({}, 10, ranges, rng), ConfigError);
  EXPECT_THROW(explore({{0.5}}, 10, ranges, rng), SchemaError);
}

TEST(ExploreTest, ParamsValidation) {
  ExploreParams p;
  p.ranges = {{0.0, 1.0}};
  EXPECT_NO_THROW(p.validate());
  p.ranges = {{1.0, 0.0}};
  EXPECT_THROW(p.validate(), ConfigError);
  p.ranges = {};
  EXPECT_THROW(p.validate(), ConfigError);
  p.ranges = {{0.0, 1.0}};
  p.top_k = p.population + 1;
  EXPECT_THROW(p.validate(), ConfigError);
}

std::vector<std::vector<double>> line_points() {
  std::vector<std::vector<double>> x;
  for (int i = 0; i <= 10; ++i) x.push_back({0.1 * i});
  return x;
}

TEST(OptimizeTest, FindsMaximumOfQuadratic) {
  const auto x = line_points();
  std::vector<double> rpm;
  for (const auto& p : x) rpm.push_back(-(p[0] - 0.3) * (p[0] - 0.3));
  ExploreParams params;
  params.ranges = {{0.0, 1.0}};
  params.population = 500;
  params.batches = 5;
  params.top_k = 3;
  params.seed = 4;
  const OptimizeResult r =
      optimize(x, {{"rpm", rpm}}, {RegressionKind::kLinear, 0.0, 2}, params);
  ASSERT_TRUE(r.feasible);
  ASSERT_EQ(r.top.size(), 3u);
  EXPECT_NEAR(r.top[0].x[0], 0.3, 0.01);
  ASSERT_EQ(r.best_objective.size(), 6u);
  for (std::size_t i = 1; i < r.best_objective.size(); ++i) {
    EXPECT_GE(r.best_objective[i], r.best_objective[i - 1]);
  }
  const OptimizeResult again =
      optimize(x, {{"rpm", rpm}}, {RegressionKind::kLinear, 0.0, 2}, params);
  EXPECT_EQ(again.top[0].x, r.top[0].x);
}

TEST(OptimizeTest, ConstraintsSteerAndInfeasibleIsReported) {
  const auto x = line_points();
  std::vector<double> rpm, cy;
  for (const auto& p : x) {
    rpm.push_back(p[0]);
    cy.push_back(-p[0]);
  }
  ExploreParams params;
  params.ranges = {{0.0, 1.0}};
  params.population = 300;
  params.batches = 3;
  params.top_k = 2;
  params.objective = Objective::parse("max:rpm,cy>=-0.5");
  const RegressionSpec lin{RegressionKind::kLinear, 0.0, 1};
  const OptimizeResult r = optimize(x, {{"rpm", rpm}, {"cy", cy}}, lin, params);
  ASSERT_TRUE(r.feasible);
  EXPECT_LE(r.top[0].x[0], 0.5 + 1e-9);
  EXPECT_GT(r.top[0].x[0], 0.45);

  params.objective = Objective::parse("max:rpm,cy>=1");
  const OptimizeResult none =
      optimize(x, {{"rpm", rpm}, {"cy", cy}}, lin, params);
  EXPECT_FALSE(none.feasible);
  EXPECT_TRUE(std::isnan(none.best_objective.back()));

  EXPECT_THROW(optimize(x, {{"rpm", rpm}}, lin, params), SchemaError);
  EXPECT_THROW(optimize(x, {{"rpm", {1.0}}, {"cy", cy}}, lin, params),
               SchemaError);
}

}  // namespace
}  // namespace genie
