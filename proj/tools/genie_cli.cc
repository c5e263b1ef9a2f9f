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

// Command-line front end: one subcommand per pipeline stage plus `run` for a
// whole job config. Exit codes: 0 success, 1 stage failure, 2 usage or
// configuration error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "genie/click_model.h"
#include "genie/comparison.h"
#include "genie/errors.h"
#include "genie/explore.h"
#include "genie/grid_file.h"
#include "genie/job.h"
#include "genie/kpi_cube.h"
#include "genie/log_format.h"
#include "genie/marketplace.h"
#include "genie/metrics.h"
#include "genie/random.h"
#include "genie/simulation.h"

namespace {

using genie::ConfigError;
using nlohmann::json;

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed) {
  if (seed) return *seed;
  const std::uint64_t s = genie::draw_seed();
  std::cout << "seed=" << s << "\n";
  return s;
}

std::map<std::string, double> parse_assignments(
    const std::vector<std::string>& items) {
  std::map<std::string, double> out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("expected knob=value, got '" + item + "'");
    }
    const std::string knob = item.substr(0, eq);
    double value = 0.0;
    try {
      value = std::stod(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw ConfigError("bad value in '" + item + "'");
    }
    genie::validate_knob(knob, value);
    out[knob] = value;
  }
  return out;
}

std::map<std::string, genie::Range> parse_ranges(
    const std::vector<std::string>& items) {
  std::map<std::string, genie::Range> out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    const auto colon = item.find(':', eq == std::string::npos ? 0 : eq);
    if (eq == std::string::npos || colon == std::string::npos) {
      throw ConfigError("expected knob=min:max, got '" + item + "'");
    }
    try {
      out[item.substr(0, eq)] = {std::stod(item.substr(eq + 1, colon - eq - 1)),
                                 std::stod(item.substr(colon + 1))};
    } catch (const std::exception&) {
      throw ConfigError("bad range '" + item + "'");
    }
  }
  return out;
}

json load_json(const std::string& path) {
  try {
    return json::parse(genie::read_text_file(path));
  } catch (const json::exception& e) {
    throw ConfigError(path + " is not valid JSON: " + e.what());
  }
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

genie::LogDataset read_records(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw genie::IoError("cannot open " + path);
  auto [records, stats] = genie::validate_and_convert(in);
  if (!stats.rejections.empty()) {
    std::cerr << "warning: skipped " << stats.rejections.size()
              << " malformed log lines\n";
  }
  genie::LogDataset ds;
  ds.records = std::move(records);
  return ds;
}

struct GenerateArgs {
  std::string config;
  std::string logs;
  std::string marketplace;
  std::size_t requests = 1000;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> policy;
  std::optional<std::size_t> drift_index;
  std::vector<std::string> drift_policy;
  int workers = 0;
};

int run_generate(const GenerateArgs& a) {
  genie::GeneratorConfig config;
  if (!a.config.empty()) {
    config = genie::generator_config_from_json(load_json(a.config));
  }
  const std::uint64_t seed = resolve_seed(a.seed);
  const genie::PolicyConfig policy(parse_assignments(a.policy));
  std::optional<genie::DriftSpec> drift;
  if (a.drift_index) {
    drift = genie::DriftSpec{*a.drift_index,
                             genie::PolicyConfig(parse_assignments(a.drift_policy))};
  }
  const auto model = genie::generate_marketplace(
      config, genie::derive_seed(seed, "marketplace"));
  const auto logs = genie::generate_logs(
      model, policy, a.requests, drift, genie::derive_seed(seed, "logs"),
      a.workers);
  genie::write_log_file(a.logs, logs);
  if (!a.marketplace.empty()) {
    genie::write_text_file(a.marketplace, genie::to_json(model).dump(2) + "\n");
  }
  std::cout << "generated " << logs.records.size() << " requests\n";
  return 0;
}

struct IngestArgs {
  std::string logs;
  std::string out;
  std::string stats;
  std::vector<std::int64_t> query_classes;
};

int run_ingest(const IngestArgs& a) {
  std::ifstream in(a.logs, std::ios::binary);
  if (!in) throw genie::IoError("cannot open " + a.logs);
  auto [records, stats] = genie::validate_and_convert(in);
  genie::TrafficFilter filter;
  filter.query_classes = a.query_classes;
  records = filter.apply(std::move(records));
  std::ostringstream out;
  for (const auto& r : records) out << genie::format_log_line(r) << '\n';
  genie::write_text_file(a.out, out.str());
  json rejections = json::array();
  for (const auto& r : stats.rejections) {
    rejections.push_back({{"line", r.line_number}, {"reason", r.reason}});
  }
  const json summary = {{"total", stats.total},
                        {"converted", stats.converted},
                        {"conversion_success", stats.conversion_success},
                        {"zero_total", stats.zero_total},
                        {"kept_after_filter", records.size()},
                        {"rejections", rejections}};
  if (!a.stats.empty()) {
    genie::write_text_file(a.stats, summary.dump(2) + "\n");
  }
  std::cout << "conversion_success=" << stats.conversion_success
            << " converted=" << stats.converted << " total=" << stats.total
            << "\n";
  return 0;
}

struct TrainArgs {
  std::string logs;
  std::string out;
  std::string kind = "probit";
  std::string spec;
  int trees = 0;
  double learning_rate = 0.0;
  int depth = -1;
  int min_leaf = 0;
  int bins = 0;
  double beta = 0.0;
};

int run_train(const TrainArgs& a) {
  json spec_json = a.spec.empty() ? json::object() : load_json(a.spec);
  spec_json["kind"] = a.kind;
  if (a.trees > 0) spec_json["n_trees"] = a.trees;
  if (a.learning_rate > 0.0) spec_json["learning_rate"] = a.learning_rate;
  if (a.depth >= 0) spec_json["max_depth"] = a.depth;
  if (a.min_leaf > 0) spec_json["min_samples_leaf"] = a.min_leaf;
  if (a.bins > 0) spec_json["continuous_bins"] = a.bins;
  if (a.beta > 0.0) spec_json["beta"] = a.beta;
  const genie::ClickModelSpec spec = genie::click_model_spec_from_json(spec_json);

  const auto logs = read_records(a.logs);
  const auto impressions = genie::impressions_from_logs(logs.records);
  if (impressions.empty()) throw ConfigError("logs hold no impressions");
  const genie::ClickModel model = genie::train_click_model(impressions, spec);
  genie::write_text_file(a.out, genie::serialize_click_model(model));

  std::vector<double> preds;
  std::vector<double> labels;
  for (const auto& imp : impressions) {
    preds.push_back(model.predict(imp.features));
    labels.push_back(genie::label_to_binary(imp.label));
  }
  std::cout << "impressions=" << impressions.size()
            << " train_logloss=" << genie::eval_logloss(preds, labels);
  try {
    std::cout << " cumulative_error="
              << genie::eval_cumulative_error(preds, labels);
  } catch (const genie::UndefinedMetricError&) {
  }
  std::cout << "\n";
  return 0;
}

struct SimulateArgs {
  std::string logs;
  std::string model;
  std::string grid;
  std::string out;
  std::string dimensions;
  int workers = 0;
};

int run_simulate(const SimulateArgs& a) {
  const auto logs = read_records(a.logs);
  const genie::ClickModel model =
      genie::parse_click_model(genie::read_text_file(a.model));
  std::vector<genie::GridPoint> grid;
  if (!a.grid.empty()) grid = genie::read_grid_file(a.grid);
  const auto dims = a.dimensions.empty() ? genie::default_dimensions()
                                         : split_list(a.dimensions);
  const auto accuracy = genie::replay_check(logs.records);
  const genie::CubeFile cube = genie::simulate_to_cube(
      logs.records, grid, model, dims, a.workers);
  std::ostringstream out;
  genie::write_cube_file(out, cube);
  genie::write_text_file(a.out, out.str());
  std::cout << "simulation_accuracy=" << accuracy.accuracy
            << " grid_points=" << cube.grid.size()
            << " records=" << logs.records.size() << "\n";
  return 0;
}

struct ReportArgs {
  std::string cube;
  std::string out;
  std::int64_t baseline = genie::kBaselineGridId;
};

int run_report(const ReportArgs& a) {
  std::ifstream in(a.cube, std::ios::binary);
  if (!in) throw genie::IoError("cannot open " + a.cube);
  const genie::CubeFile cube = genie::read_cube_file(in);
  const genie::KpiReport report = genie::report_from_cube(cube, a.baseline);
  std::ostringstream out;
  genie::write_report(out, report);
  if (a.out.empty() || a.out == "-") {
    std::cout << out.str();
  } else {
    genie::write_text_file(a.out, out.str());
  }
  return 0;
}

struct ExploreArgs {
  std::string report;
  std::string out;
  std::string objective = "max:rpm";
  std::vector<std::string> constraints;
  std::string surrogate = "linear";
  double lambda = 0.0;
  int degree = 3;
  int batches = 20;
  int population = 5000;
  int top_k = 10;
  std::vector<std::string> ranges;
  std::optional<std::uint64_t> seed;
};

int run_explore(const ExploreArgs& a) {
  genie::ExploreSettings s;
  s.objective = genie::Objective::parse(a.objective);
  for (const auto& c : a.constraints) {
    s.objective.constraints.push_back(genie::Constraint::parse(c));
  }
  s.surrogate.kind = genie::regression_kind_from_string(a.surrogate);
  s.surrogate.lambda = a.lambda;
  s.surrogate.degree = a.degree;
  s.batches = a.batches;
  s.population = a.population;
  s.top_k = a.top_k;
  s.ranges = parse_ranges(a.ranges);
  const std::uint64_t seed = resolve_seed(a.seed);

  std::ifstream in(a.report, std::ios::binary);
  if (!in) throw genie::IoError("cannot open " + a.report);
  const genie::KpiReport report = genie::read_report(in);
  const auto rec = genie::recommend_from_report(
      report, s, genie::derive_seed(seed, "explore"));
  std::ostringstream out;
  out << "# objective " << a.objective << '\n';
  if (!rec.feasible) {
    out << "# infeasible: no candidate met the constraints\n";
  }
  genie::write_grid(out, rec.grid);
  genie::write_text_file(a.out, out.str());
  if (!rec.feasible) {
    std::cerr << "no feasible candidate\n";
    return kExitFailure;
  }
  std::cout << "recommended " << rec.grid.size() << " grid points\n";
  return 0;
}

struct CompareArgs {
  std::string scenario;
  std::string marketplace;
  std::string generator;
  std::string out;
  std::string end_to_end;
  std::vector<std::string> setting;
  std::optional<std::uint64_t> seed;
  int workers = 0;
};

int run_compare(const CompareArgs& a) {
  genie::ScenarioConfig scenario;
  if (!a.scenario.empty()) {
    scenario = genie::scenario_from_json(load_json(a.scenario));
  }
  const std::uint64_t seed = resolve_seed(a.seed);
  genie::MarketplaceModel model;
  if (!a.marketplace.empty()) {
    model = genie::marketplace_from_json(load_json(a.marketplace));
  } else {
    genie::GeneratorConfig config;
    if (!a.generator.empty()) {
      config = genie::generator_config_from_json(load_json(a.generator));
    }
    model = genie::generate_marketplace(config,
                                        genie::derive_seed(seed, "marketplace"));
  }
  const auto table = genie::compare_estimators(model, scenario, a.workers);
  std::ostringstream out;
  genie::write_comparison_table(out, table);
  if (a.out.empty() || a.out == "-") {
    std::cout << out.str();
  } else {
    genie::write_text_file(a.out, out.str());
  }
  if (!a.end_to_end.empty()) {
    auto setting = parse_assignments(a.setting);
    if (setting.empty()) {
      setting[scenario.tuned_knob] =
          scenario.tuned_value + scenario.randomization_stddev;
    }
    const auto rows = genie::end_to_end_tuning(
        model, scenario.base_policy, setting, scenario.requests_per_interval,
        genie::derive_seed(seed, "end_to_end"), scenario.click_model,
        a.workers);
    std::ostringstream t;
    t << "# setting " << genie::format_setting(setting) << '\n';
    genie::write_tuning_table(t, rows);
    genie::write_text_file(a.end_to_end, t.str());
  }
  return 0;
}

struct RunArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string output_dir;
  int workers = -1;
};

int run_run(const RunArgs& a) {
  genie::JobConfig config = genie::load_job_config(a.config);
  if (a.seed) config.seed = a.seed;
  if (!a.output_dir.empty()) config.output_dir = a.output_dir;
  if (a.workers >= 0) config.workers = a.workers;
  if (!config.seed) config.seed = resolve_seed(std::nullopt);
  const genie::JobSummary summary = genie::run_job(config);
  std::cout << summary.to_json(true).dump(2) << "\n";
  if (!summary.ok) {
    std::cerr << "stage " << summary.failed_stage
              << " failed: " << summary.error << "\n";
    return kExitFailure;
  }
  return 0;
}

void add_seed(CLI::App* app, std::optional<std::uint64_t>& seed) {
  app->add_option("--seed", seed, "Root seed; drawn and printed when omitted");
}

void add_workers(CLI::App* app, int& workers) {
  app->add_option("--workers", workers,
                  "Worker threads (default: GENIE_WORKERS or all cores)")
      ->check(CLI::NonNegativeNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Offline counterfactual policy estimation for ad auctions"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "genie 0.1.0");

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Generate a marketplace and logs");
  g->add_option("--config", gen.config, "Generator config (JSON)")
      ->check(CLI::ExistingFile);
  g->add_option("--logs", gen.logs, "Output log file")->required();
  g->add_option("--marketplace", gen.marketplace, "Output marketplace file");
  g->add_option("--requests", gen.requests, "Number of requests")
      ->check(CLI::PositiveNumber);
  g->add_option("--policy", gen.policy, "Logging policy knob=value");
  g->add_option("--drift-index", gen.drift_index, "Record index of the swap");
  g->add_option("--drift-policy", gen.drift_policy, "Drifted policy knob=value");
  add_seed(g, gen.seed);
  add_workers(g, gen.workers);

  IngestArgs ing;
  auto* i = app.add_subcommand("ingest", "Validate and convert raw logs");
  i->add_option("--logs", ing.logs, "Raw log file")
      ->required()
      ->check(CLI::ExistingFile);
  i->add_option("--out", ing.out, "Converted log file")->required();
  i->add_option("--stats", ing.stats, "Conversion statistics (JSON)");
  i->add_option("--query-class", ing.query_classes, "Keep only these classes");

  TrainArgs tr;
  auto* t = app.add_subcommand("train-click", "Train a click model");
  t->add_option("--logs", tr.logs, "Converted log file")
      ->required()
      ->check(CLI::ExistingFile);
  t->add_option("--out", tr.out, "Output model file")->required();
  t->add_option("--kind", tr.kind, "probit or gbt")
      ->check(CLI::IsMember({"probit", "gbt"}));
  t->add_option("--spec", tr.spec, "Click model hyperparameters (JSON)")
      ->check(CLI::ExistingFile);
  t->add_option("--trees", tr.trees, "GBT tree count");
  t->add_option("--learning-rate", tr.learning_rate, "GBT learning rate");
  t->add_option("--depth", tr.depth, "GBT max depth");
  t->add_option("--min-leaf", tr.min_leaf, "GBT min samples per leaf");
  t->add_option("--bins", tr.bins, "Probit bins per continuous feature");
  t->add_option("--beta", tr.beta, "Probit steepness");

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "Replay logs under a grid");
  s->add_option("--logs", sim.logs, "Converted log file")
      ->required()
      ->check(CLI::ExistingFile);
  s->add_option("--model", sim.model, "Click model file")
      ->required()
      ->check(CLI::ExistingFile);
  s->add_option("--grid", sim.grid, "Grid file (baseline only when omitted)")
      ->check(CLI::ExistingFile);
  s->add_option("--out", sim.out, "Output cube file")->required();
  s->add_option("--dimensions", sim.dimensions,
                "Comma-separated cube dimensions");
  add_workers(s, sim.workers);

  ReportArgs rep;
  auto* r = app.add_subcommand("report", "KPI report from a cube");
  r->add_option("--cube", rep.cube, "Cube file")
      ->required()
      ->check(CLI::ExistingFile);
  r->add_option("--out", rep.out, "Output report (stdout when omitted)");
  r->add_option("--baseline", rep.baseline, "Baseline grid point id");

  ExploreArgs ex;
  auto* e = app.add_subcommand("explore", "Recommend grid points");
  e->add_option("--from-report", ex.report, "KPI report")
      ->required()
      ->check(CLI::ExistingFile);
  e->add_option("--out", ex.out, "Recommended grid file")->required();
  e->add_option("--objective", ex.objective, "max:<metric> or min:<metric>");
  e->add_option("--constraint", ex.constraints, "e.g. cy>=-0.01 or |mliy|<=0.02");
  e->add_option("--surrogate", ex.surrogate, "linear or ridge")
      ->check(CLI::IsMember({"linear", "ridge"}));
  e->add_option("--lambda", ex.lambda, "Ridge penalty");
  e->add_option("--degree", ex.degree, "Polynomial degree")
      ->check(CLI::Range(1, 3));
  e->add_option("--batches", ex.batches, "Optimizer iterations");
  e->add_option("--population", ex.population, "Population size");
  e->add_option("--topk", ex.top_k, "Recommended points");
  e->add_option("--range", ex.ranges, "Search range knob=min:max");
  add_seed(e, ex.seed);

  CompareArgs cmp;
  auto* c = app.add_subcommand("compare", "Replay vs importance sampling");
  c->add_option("--scenario", cmp.scenario, "Scenario config (JSON)")
      ->check(CLI::ExistingFile);
  c->add_option("--marketplace", cmp.marketplace, "Marketplace file")
      ->check(CLI::ExistingFile);
  c->add_option("--generator", cmp.generator, "Generator config (JSON)")
      ->check(CLI::ExistingFile);
  c->add_option("--out", cmp.out, "Comparison table (stdout when omitted)");
  c->add_option("--end-to-end", cmp.end_to_end, "Tuning table output");
  c->add_option("--setting", cmp.setting, "Tuned setting knob=value");
  add_seed(c, cmp.seed);
  add_workers(c, cmp.workers);

  RunArgs run;
  auto* j = app.add_subcommand("run", "Run a job config");
  j->add_option("--config", run.config, "Job config (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  j->add_option("--output-dir", run.output_dir, "Override the output dir");
  add_seed(j, run.seed);
  j->add_option("--workers", run.workers, "Worker threads")
      ->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*g) return run_generate(gen);
    if (*i) return run_ingest(ing);
    if (*t) return run_train(tr);
    if (*s) return run_simulate(sim);
    if (*r) return run_report(rep);
    if (*e) return run_explore(ex);
    if (*c) return run_compare(cmp);
    if (*j) return run_run(run);
  } catch (const genie::ConfigError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
