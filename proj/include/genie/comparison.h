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

#ifndef GENIE_COMPARISON_H_
#define GENIE_COMPARISON_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "genie/click_model.h"
#include "genie/marketplace.h"
#include "genie/policy.h"

namespace genie {

enum class Scenario { kStationary, kDrift };

// Periodic tuning of one knob, with an unrelated policy knob that may swap
// in the middle of every training interval.
struct ScenarioConfig {
  Scenario scenario = Scenario::kDrift;
  int intervals = 5;
  std::vector<std::uint64_t> seeds = {1, 2, 3};
  std::size_t requests_per_interval = 50000;
  PolicyConfig base_policy;
  std::string tuned_knob = "reserve_score";
  double tuned_value = 0.2;
  double randomization_stddev = 0.02;
  double truncation_sigmas = 3.0;
  // Candidate proposal means, as offsets from tuned_value in stddev units.
  std::vector<double> candidate_shifts = {-1.0, -0.5, 0.5, 1.0};
  // Metric the importance-sampling tuner maximizes to pick the candidate.
  std::string objective_metric = "rpm";
  std::string drift_knob = "quality_exponent";
  // Value of the drift knob in interval i is drift_values[i % size]. In the
  // drift scenario the training log of interval i swaps from interval i's
  // value to interval i+1's value half way through.
  std::vector<double> drift_values = {1.0, 0.7};
  ClickModelSpec click_model;

  // Throws ConfigError.
  void validate() const;
};

ScenarioConfig scenario_from_json(const nlohmann::json& j);

// Deltas are fractions: 0.01 means +1%.
using DeltaMap = std::map<std::string, double>;

inline const std::vector<std::string>& comparison_metrics() {
  static const std::vector<std::string> kMetrics = {"rpm", "mliy", "cy", "cpc"};
  return kMetrics;
}

struct IntervalOutcome {
  std::uint64_t seed = 0;
  int interval = 0;
  double chosen_value = 0.0;
  DeltaMap oracle;
  DeltaMap is_historical;
  DeltaMap replay_historical;
  DeltaMap is_regression;
  DeltaMap replay_regression;
};

struct ComparisonRow {
  std::string method;  // "IS" or "Replay"
  std::string mode;    // "Historical" or "Regression"
  DeltaMap mean_abs_error;
};

struct ComparisonTable {
  std::vector<ComparisonRow> rows;
  std::vector<IntervalOutcome> outcomes;

  const ComparisonRow& row(const std::string& method,
                           const std::string& mode) const;
};

// For every seed and interval: log randomized traffic, pick a candidate with
// importance sampling, then predict its KPI deltas with both estimators and
// measure them against the oracle deltas of the evaluation interval.
// Historical mode predicts from the training interval; regression mode from
// control traffic of the evaluation interval itself.
ComparisonTable compare_estimators(const MarketplaceModel& model,
                                   const ScenarioConfig& config,
                                   int workers = 1);

// Rows IS/Replay x Historical/Regression, columns RPM MLIY CY CPC, errors in
// percent.
void write_comparison_table(std::ostream& out, const ComparisonTable& table);

struct TuningRow {
  std::string job;
  std::string traffic;
  DeltaMap delta;
};

// Oracle delta of `setting` on fresh traffic next to replay predictions from
// logs of the same traffic and of an earlier interval.
std::vector<TuningRow> end_to_end_tuning(
    const MarketplaceModel& model, const PolicyConfig& policy,
    const std::map<std::string, double>& setting, std::size_t n_requests,
    std::uint64_t seed, const ClickModelSpec& click_model, int workers = 1);

// Columns Job, Traffic, dRPM, dCY, dMLIY in percent.
void write_tuning_table(std::ostream& out, const std::vector<TuningRow>& rows);

// Replay estimate of the deltas of `treatment` vs `control` settings on
// `records`, with a click model trained on the same records.
DeltaMap replay_delta(const std::vector<AuctionData>& records,
                      const std::map<std::string, double>& control,
                      const std::map<std::string, double>& treatment,
                      const ClickModelSpec& click_model, int workers = 1);

// Oracle delta of policy `treatment` vs `control` on the requests of `seed`.
DeltaMap oracle_delta(const MarketplaceModel& model,
                      const PolicyConfig& control,
                      const PolicyConfig& treatment, std::size_t n_requests,
                      std::uint64_t seed, int workers = 1);

}  // namespace genie

#endif  // GENIE_COMPARISON_H_
