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

#include "genie/comparison.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "genie/errors.h"
#include "genie/importance_sampling.h"
#include "genie/kpi_cube.h"
#include "genie/log_format.h"
#include "genie/random.h"
#include "genie/simulation.h"

namespace genie {

using nlohmann::json;

void ScenarioConfig::validate() const {
  if (intervals < 1) throw ConfigError("intervals must be >= 1");
  if (seeds.empty()) throw ConfigError("at least one seed required");
  if (requests_per_interval < 2) {
    throw ConfigError("requests_per_interval must be >= 2");
  }
  validate_knob(tuned_knob, tuned_value);
  if (find_knob(drift_knob) == nullptr) {
    throw ConfigError("unknown drift knob: " + drift_knob);
  }
  if (drift_knob == tuned_knob) {
    throw ConfigError("drift knob must differ from the tuned knob");
  }
  if (drift_values.empty()) throw ConfigError("drift_values is empty");
  for (double v : drift_values) validate_knob(drift_knob, v);
  if (!(randomization_stddev > 0.0)) {
    throw ConfigError("randomization_stddev must be > 0");
  }
  if (!(truncation_sigmas > 0.0)) {
    throw ConfigError("truncation_sigmas must be > 0");
  }
  if (candidate_shifts.empty()) throw ConfigError("candidate_shifts is empty");
  for (double s : candidate_shifts) {
    if (std::abs(s) > truncation_sigmas) {
      throw ConfigError("candidate shifts must stay inside the truncation");
    }
  }
  const auto& m = comparison_metrics();
  if (std::find(m.begin(), m.end(), objective_metric) == m.end()) {
    throw ConfigError("unknown objective metric: " + objective_metric);
  }
}

ScenarioConfig scenario_from_json(const json& j) {
  static const std::vector<std::string> kKeys = {
      "scenario",         "intervals",        "seeds",
      "requests_per_interval", "base_policy", "tuned_knob",
      "tuned_value",      "randomization_stddev", "truncation_sigmas",
      "candidate_shifts", "objective_metric", "drift_knob",
      "drift_values",     "click_model"};
  if (!j.is_object()) throw ConfigError("scenario must be an object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end()) {
      throw ConfigError("unknown scenario field: " + key);
    }
  }
  ScenarioConfig c;
  try {
    const std::string scenario = j.value("scenario", std::string("drift"));
    if (scenario == "drift") {
      c.scenario = Scenario::kDrift;
    } else if (scenario == "stationary") {
      c.scenario = Scenario::kStationary;
    } else {
      throw ConfigError("scenario must be stationary or drift");
    }
    c.intervals = j.value("intervals", c.intervals);
    c.seeds = j.value("seeds", c.seeds);
    c.requests_per_interval =
        j.value("requests_per_interval", c.requests_per_interval);
    if (j.contains("base_policy")) {
      c.base_policy = PolicyConfig(
          j.at("base_policy").get<std::map<std::string, double>>());
    }
    c.tuned_knob = j.value("tuned_knob", c.tuned_knob);
    c.tuned_value = j.value("tuned_value", c.tuned_value);
    c.randomization_stddev =
        j.value("randomization_stddev", c.randomization_stddev);
    c.truncation_sigmas = j.value("truncation_sigmas", c.truncation_sigmas);
    c.candidate_shifts = j.value("candidate_shifts", c.candidate_shifts);
    c.objective_metric = j.value("objective_metric", c.objective_metric);
    c.drift_knob = j.value("drift_knob", c.drift_knob);
    c.drift_values = j.value("drift_values", c.drift_values);
    if (j.contains("click_model")) {
      c.click_model = click_model_spec_from_json(j.at("click_model"));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid scenario: ") + e.what());
  }
  c.validate();
  return c;
}

const ComparisonRow& ComparisonTable::row(const std::string& method,
                                          const std::string& mode) const {
  for (const auto& r : rows) {
    if (r.method == method && r.mode == mode) return r;
  }
  throw ConfigError("no comparison row " + method + "/" + mode);
}

namespace {

DeltaMap to_delta_map(const KpiDelta& d) {
  DeltaMap out;
  for (const auto& m : comparison_metrics()) {
    out[m] = d.get(m).value_or(std::numeric_limits<double>::quiet_NaN());
  }
  return out;
}

KpiMetrics total_metrics(const DataCube& cube, std::int64_t grid_id) {
  const int gi = cube.dimension_index(kDimGridPoint);
  CellCounters total;
  for (const auto& [key, counters] : cube.cells()) {
    if (gi < 0 || key[gi] == grid_id) total += counters;
  }
  return compute_metrics(total);
}

DeltaMap replay_delta_with(const std::vector<AuctionData>& records,
                           const std::map<std::string, double>& control,
                           const std::map<std::string, double>& treatment,
                           const ClickModel& model, int workers) {
  const std::vector<GridPoint> grid = {{1, control}, {2, treatment}};
  const DataCube cube =
      simulate_dataset(records, grid, model,
                       {std::string(kDimGridPoint)}, workers);
  return to_delta_map(
      compute_delta(total_metrics(cube, 2), total_metrics(cube, 1)));
}

ClickModel train_on(const std::vector<AuctionData>& records,
                    const ClickModelSpec& spec) {
  return train_click_model(impressions_from_logs(records), spec);
}

struct IsMetrics {
  double revenue = 0.0;
  double clicks = 0.0;
  double mainline = 0.0;

  KpiMetrics metrics() const {
    KpiMetrics m;
    m.rpm = 1000.0 * revenue;
    m.cy = clicks;
    m.mliy = mainline;
    if (clicks > 0.0) m.cpc = revenue / clicks;
    return m;
  }
};

IsMetrics is_metrics(const LogDataset& logs,
                     const ProposalDistribution& target) {
  IsMetrics out;
  out.revenue = is_estimate(logs, target, realized_revenue).estimate;
  out.clicks = is_estimate(logs, target, realized_clicks).estimate;
  out.mainline =
      is_estimate(logs, target, logged_mainline_impressions).estimate;
  return out;
}

DeltaMap is_delta(const LogDataset& logs, const ProposalDistribution& target) {
  const auto& spec = *logs.randomization;
  return to_delta_map(
      compute_delta(is_metrics(logs, target).metrics(),
                    is_metrics(logs, ProposalDistribution::same_as(spec))
                        .metrics()));
}

}  // namespace

DeltaMap replay_delta(const std::vector<AuctionData>& records,
                      const std::map<std::string, double>& control,
                      const std::map<std::string, double>& treatment,
                      const ClickModelSpec& click_model, int workers) {
  const ClickModel model = train_on(records, click_model);
  return replay_delta_with(records, control, treatment, model, workers);
}

DeltaMap oracle_delta(const MarketplaceModel& model,
                      const PolicyConfig& control,
                      const PolicyConfig& treatment, std::size_t n_requests,
                      std::uint64_t seed, int workers) {
  const std::vector<std::string> dims;
  const DataCube c =
      ground_truth_kpi(model, control, n_requests, seed, dims, workers);
  const DataCube t =
      ground_truth_kpi(model, treatment, n_requests, seed, dims, workers);
  return to_delta_map(
      compute_delta(total_metrics(t, 0), total_metrics(c, 0)));
}

ComparisonTable compare_estimators(const MarketplaceModel& model,
                                   const ScenarioConfig& config, int workers) {
  config.validate();
  const std::size_t n = config.requests_per_interval;
  const RandomizationSpec spec =
      RandomizationSpec::single(config.tuned_knob, config.tuned_value,
                                config.randomization_stddev,
                                config.truncation_sigmas);
  auto drift_value = [&](int interval) {
    if (config.scenario == Scenario::kStationary) {
      return config.drift_values.front();
    }
    return config.drift_values[interval % config.drift_values.size()];
  };

  ComparisonTable table;
  for (std::uint64_t seed : config.seeds) {
    for (int i = 0; i < config.intervals; ++i) {
      IntervalOutcome out;
      out.seed = seed;
      out.interval = i;
      const double current = drift_value(i);
      const double next = drift_value(i + 1);
      const PolicyConfig train_policy =
          config.base_policy.with({{config.drift_knob, current}});
      std::optional<DriftSpec> drift;
      if (config.scenario == Scenario::kDrift && current != next) {
        drift = DriftSpec{n / 2, config.base_policy.with(
                                     {{config.drift_knob, next}})};
      }
      const LogDataset train = generate_randomized_logs(
          model, train_policy, spec, n, derive_seed(seed, "train", i), drift,
          workers);

      // Candidate choice by importance sampling on the training logs.
      double best = -std::numeric_limits<double>::infinity();
      out.chosen_value = config.tuned_value;
      for (double shift : config.candidate_shifts) {
        const double mean =
            config.tuned_value + shift * config.randomization_stddev;
        const auto target = ProposalDistribution::shifted(spec, {mean});
        const double v = is_metrics(train, target)
                             .metrics()
                             .get(config.objective_metric)
                             .value_or(-std::numeric_limits<double>::infinity());
        if (v > best) {
          best = v;
          out.chosen_value = mean;
        }
      }
      const auto target = ProposalDistribution::shifted(spec, {out.chosen_value});

      const std::map<std::string, double> control = {
          {config.tuned_knob, config.tuned_value}, {config.drift_knob, next}};
      const std::map<std::string, double> treatment = {
          {config.tuned_knob, out.chosen_value}, {config.drift_knob, next}};
      const PolicyConfig eval_policy =
          config.base_policy.with({{config.drift_knob, next}});
      const std::uint64_t eval_seed = derive_seed(seed, "eval", i);

      out.oracle = oracle_delta(model, config.base_policy.with(control),
                                config.base_policy.with(treatment), n,
                                eval_seed, workers);

      out.is_historical = is_delta(train, target);
      const ClickModel train_model = train_on(train.records, config.click_model);
      out.replay_historical =
          replay_delta_with(train.records, control, treatment, train_model,
                            workers);

      const LogDataset eval = generate_randomized_logs(
          model, eval_policy, spec, n, eval_seed, std::nullopt, workers);
      out.is_regression = is_delta(eval, target);
      const ClickModel eval_model = train_on(eval.records, config.click_model);
      out.replay_regression = replay_delta_with(eval.records, control,
                                                treatment, eval_model, workers);
      table.outcomes.push_back(std::move(out));
    }
  }

  auto summarize = [&](const std::string& method, const std::string& mode,
                       DeltaMap IntervalOutcome::*field) {
    ComparisonRow row{method, mode, {}};
    for (const auto& m : comparison_metrics()) {
      double total = 0.0;
      for (const auto& o : table.outcomes) {
        total += std::abs((o.*field).at(m) - o.oracle.at(m));
      }
      row.mean_abs_error[m] = total / static_cast<double>(table.outcomes.size());
    }
    table.rows.push_back(std::move(row));
  };
  summarize("IS", "Historical", &IntervalOutcome::is_historical);
  summarize("IS", "Regression", &IntervalOutcome::is_regression);
  summarize("Replay", "Historical", &IntervalOutcome::replay_historical);
  summarize("Replay", "Regression", &IntervalOutcome::replay_regression);
  return table;
}

namespace {

std::string percent(double fraction) {
  if (std::isnan(fraction)) return "NA";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", 100.0 * fraction);
  return buf;
}

}  // namespace

void write_comparison_table(std::ostream& out, const ComparisonTable& table) {
  out << "method\tmode\tRPM\tMLIY\tCY\tCPC\n";
  for (const auto& r : table.rows) {
    out << r.method << '\t' << r.mode;
    for (const auto& m : comparison_metrics()) {
      out << '\t' << percent(r.mean_abs_error.at(m));
    }
    out << '\n';
  }
}

std::vector<TuningRow> end_to_end_tuning(
    const MarketplaceModel& model, const PolicyConfig& policy,
    const std::map<std::string, double>& setting, std::size_t n_requests,
    std::uint64_t seed, const ClickModelSpec& click_model, int workers) {
  const std::uint64_t current_seed = derive_seed(seed, "tuning", 1);
  const std::uint64_t previous_seed = derive_seed(seed, "tuning", 0);
  std::vector<TuningRow> rows;
  rows.push_back({"A/B", "treatment",
                  oracle_delta(model, policy, policy.with(setting), n_requests,
                               current_seed, workers)});
  const LogDataset same =
      generate_logs(model, policy, n_requests, std::nullopt, current_seed,
                    workers);
  rows.push_back({"Replay", "same interval",
                  replay_delta(same.records, {}, setting, click_model,
                               workers)});
  const LogDataset previous =
      generate_logs(model, policy, n_requests, std::nullopt, previous_seed,
                    workers);
  rows.push_back({"Replay", "previous interval",
                  replay_delta(previous.records, {}, setting, click_model,
                               workers)});
  return rows;
}

void write_tuning_table(std::ostream& out, const std::vector<TuningRow>& rows) {
  out << "job\ttraffic\tdRPM\tdCY\tdMLIY\n";
  for (const auto& r : rows) {
    out << r.job << '\t' << r.traffic << '\t' << percent(r.delta.at("rpm"))
        << '\t' << percent(r.delta.at("cy")) << '\t'
        << percent(r.delta.at("mliy")) << '\n';
  }
}

}  // namespace genie
