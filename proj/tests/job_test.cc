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

#include "genie/job.h"

#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "genie/errors.h"

namespace genie {
namespace {

namespace fs = std::filesystem;

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("genie_job_test_" + name);
  fs::remove_all(p);
  return p;
}

JobConfig parse(const nlohmann::json& j) { return parse_job_config(j, "."); }

TEST(JobTest, BaselineEquivalentSettingHasZeroDeltas) {
  const fs::path out = fresh_dir("baseline");
  const JobConfig c = parse({
      {"output_dir", out.string()},
      {"stages", {"generate", "ingest", "train-click", "simulate", "report"}},
      {"seed", 11},
      {"n_requests", 400},
      {"grid", {{"inline", {{{"id", 1}, {"setting", {{"bid_multiplier", 1.0}}}}}}}},
  });
  const JobSummary s = run_job(c);
  ASSERT_TRUE(s.ok) << s.failed_stage << ": " << s.error;
  EXPECT_EQ(s.seed, 11u);
  EXPECT_EQ(s.records, 400u);
  EXPECT_EQ(s.conversion_success, 1.0);
  EXPECT_EQ(s.simulation_accuracy, 1.0);
  std::ifstream in(out / artifact::kReport);
  const KpiReport r = read_report(in);
  const ReportRow* row = r.total(1);
  ASSERT_NE(row, nullptr);
  for (const auto& m : metric_names()) {
    const auto d = row->delta.get(m);
    if (d) EXPECT_EQ(*d, 0.0) << m;
  }
  EXPECT_TRUE(fs::exists(out / artifact::kSummary));
  EXPECT_TRUE(fs::exists(out / artifact::kTimings));
  fs::remove_all(out);
}

TEST(JobTest, FailingStageIsRecorded) {
  const fs::path out = fresh_dir("fail");
  const JobSummary s =
      run_job(parse({{"output_dir", out.string()}, {"stages", {"train-click"}}}));
  EXPECT_FALSE(s.ok);
  EXPECT_EQ(s.failed_stage, "train-click");
  EXPECT_FALSE(s.error.empty());
  std::ifstream in(out / artifact::kSummary);
  const auto j = nlohmann::json::parse(in);
  EXPECT_EQ(j.at("failed_stage"), "train-click");
  fs::remove_all(out);
}

TEST(JobTest, ConfigErrors) {
  EXPECT_THROW(parse({{"stages", {"launch"}}}).validate(), ConfigError);
  EXPECT_THROW(parse({{"stages", {"generate", "generate"}}}).validate(),
               ConfigError);
  EXPECT_THROW(parse({{"stages", nlohmann::json::array()}}).validate(),
               ConfigError);
  EXPECT_THROW(parse({{"stages", {"ingest"}}}).validate(), ConfigError);
  EXPECT_THROW(parse({{"stages", {"compare"}}}).validate(), ConfigError);
  EXPECT_THROW(parse({{"stages", {"generate"}}, {"unknown_key", 1}}),
               ConfigError);
  EXPECT_THROW(load_job_config("/nonexistent/job.json"), GenieError);
}

TEST(JobTest, SampledGridIsDeterministic) {
  const std::map<std::string, Range> ranges = {{"reserve_score", {0.0, 0.5}},
                                               {"bid_multiplier", {1.0, 1.0}}};
  const auto a = sample_grid(ranges, 20, 3);
  EXPECT_EQ(a, sample_grid(ranges, 20, 3));
  for (const auto& g : a) {
    EXPECT_GE(g.id, 1);
    EXPECT_GE(g.setting.at("reserve_score"), 0.0);
    EXPECT_LE(g.setting.at("reserve_score"), 0.5);
    EXPECT_EQ(g.setting.at("bid_multiplier"), 1.0);
  }
}

}  // namespace
}  // namespace genie
