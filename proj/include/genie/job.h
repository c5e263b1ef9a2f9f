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

#ifndef GENIE_JOB_H_
#define GENIE_JOB_H_

#include <cstdint>
#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "genie/click_model.h"
#include "genie/comparison.h"
#include "genie/explore.h"
#include "genie/kpi_cube.h"
#include "genie/marketplace.h"
#include "genie/policy.h"
#include "genie/regression.h"

namespace genie {

inline const std::vector<std::string>& job_stages() {
  static const std::vector<std::string> kStages = {
      "generate", "ingest", "train-click", "simulate",
      "report",   "explore", "compare"};
  return kStages;
}

struct TrafficFilter {
  // Empty keeps every class.
  std::vector<std::int64_t> query_classes;
  // Half-open range of record positions.
  std::size_t record_begin = 0;
  std::size_t record_end = std::numeric_limits<std::size_t>::max();

  std::vector<AuctionData> apply(std::vector<AuctionData> records) const;
};

enum class GridSourceKind { kInline, kFile, kRecommendation, kSample };

struct GridSource {
  GridSourceKind kind = GridSourceKind::kInline;
  std::vector<GridPoint> points;  // inline
  std::string path;               // file / recommendation
  // sample: `count` points drawn uniformly inside `ranges`.
  std::size_t count = 0;
  std::map<std::string, Range> ranges;
};

struct ExploreSettings {
  Objective objective;
  RegressionSpec surrogate;
  int batches = 20;
  int population = 5000;
  int top_k = 10;
  // Per-knob search ranges; knobs without one use the observed range.
  std::map<std::string, Range> ranges;
};

// One job, read from a single JSON file. Relative paths resolve against the
// config file's directory.
struct JobConfig {
  std::filesystem::path output_dir = "genie_out";
  std::vector<std::string> stages;
  std::optional<std::uint64_t> seed;
  int workers = 0;

  GeneratorConfig generator;
  std::size_t n_requests = 1000;
  PolicyConfig logging_policy;
  std::optional<DriftSpec> drift;

  // Raw log input for ingest when no generate stage runs.
  std::filesystem::path logs_path;
  TrafficFilter filter;
  ClickModelSpec click_model;
  GridSource grid;
  std::vector<std::string> dimensions = default_dimensions();
  ExploreSettings explore;
  std::optional<ScenarioConfig> compare;
  // Setting evaluated for the end-to-end tuning table; defaults to the top
  // explorer recommendation.
  std::optional<std::map<std::string, double>> tuning_setting;

  // Throws ConfigError.
  void validate() const;
};

JobConfig parse_job_config(const nlohmann::json& j,
                           const std::filesystem::path& base_dir);
// Throws IoError / ConfigError.
JobConfig load_job_config(const std::filesystem::path& path);

struct JobSummary {
  bool ok = true;
  std::string failed_stage;
  std::string error;
  std::uint64_t seed = 0;
  double conversion_success = 1.0;
  double simulation_accuracy = 1.0;
  std::size_t records = 0;
  std::size_t grid_points = 0;
  // Wall time per stage; kept out of summary.json so artifacts stay
  // reproducible.
  std::map<std::string, double> stage_seconds;
  // Stage artifact name -> path.
  std::map<std::string, std::string> artifacts;

  nlohmann::json to_json(bool with_timings) const;
};

// Runs the configured stages in order. A failing stage stops the job and is
// recorded in the summary; artifacts of earlier stages stay on disk.
JobSummary run_job(const JobConfig& config);

// Artifact file names inside the output directory.
namespace artifact {
inline constexpr const char* kMarketplace = "marketplace.json";
inline constexpr const char* kLogs = "logs.jsonl";
inline constexpr const char* kConverted = "converted.jsonl";
inline constexpr const char* kIngestStats = "ingest.json";
inline constexpr const char* kClickModel = "click_model.json";
inline constexpr const char* kGrid = "grid.txt";
inline constexpr const char* kCube = "cube.json";
inline constexpr const char* kReport = "report.tsv";
inline constexpr const char* kRecommendation = "recommended_grid.txt";
inline constexpr const char* kComparison = "comparison.tsv";
inline constexpr const char* kEndToEnd = "end_to_end.tsv";
inline constexpr const char* kSummary = "summary.json";
inline constexpr const char* kTimings = "timings.json";
}  // namespace artifact

// Building blocks shared by run_job and the CLI subcommands.
CubeFile simulate_to_cube(const std::vector<AuctionData>& records,
                          const std::vector<GridPoint>& grid,
                          const ClickModel& model,
                          const std::vector<std::string>& dimensions,
                          int workers);
KpiReport report_from_cube(const CubeFile& cube,
                           std::int64_t baseline_grid_id = kBaselineGridId);

struct Recommendation {
  bool feasible = false;
  std::vector<std::string> knobs;
  std::vector<GridPoint> grid;
  std::vector<Candidate> candidates;
  std::vector<double> best_objective;
};

// Fits surrogates on the roll-up rows of a report (settings -> deltas) and
// returns the optimizer's top-k as a grid file-ready list (ids from 1).
Recommendation recommend_from_report(const KpiReport& report,
                                     const ExploreSettings& settings,
                                     std::uint64_t seed);

std::vector<GridPoint> sample_grid(const std::map<std::string, Range>& ranges,
                                   std::size_t count, std::uint64_t seed);

}  // namespace genie

#endif  // GENIE_JOB_H_
