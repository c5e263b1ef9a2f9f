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

#include <algorithm>
#include <chrono>
#include <fstream>
#include <set>
#include <sstream>

#include "genie/errors.h"
#include "genie/grid_file.h"
#include "genie/log_format.h"
#include "genie/random.h"
#include "genie/simulation.h"

namespace genie {

using nlohmann::json;
namespace fs = std::filesystem;

std::vector<AuctionData> TrafficFilter::apply(
    std::vector<AuctionData> records) const {
  std::vector<AuctionData> out;
  const std::set<std::int64_t> classes(query_classes.begin(),
                                       query_classes.end());
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (i < record_begin || i >= record_end) continue;
    if (!classes.empty() && classes.count(records[i].query_class) == 0) {
      continue;
    }
    out.push_back(std::move(records[i]));
  }
  return out;
}

namespace {

bool has_stage(const JobConfig& c, std::string_view stage) {
  return std::find(c.stages.begin(), c.stages.end(), stage) != c.stages.end();
}

void check_keys(const json& j, const std::vector<std::string>& allowed,
                const std::string& what) {
  if (!j.is_object()) throw ConfigError(what + " must be an object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError("unknown " + what + " field: " + key);
    }
  }
}

std::map<std::string, Range> ranges_from_json(const json& j) {
  std::map<std::string, Range> out;
  for (const auto& [knob, r] : j.items()) {
    const auto v = r.get<std::vector<double>>();
    if (v.size() != 2) throw ConfigError("range of " + knob + " needs [min, max]");
    if (find_knob(knob) == nullptr) throw ConfigError("unknown knob: " + knob);
    out[knob] = {v[0], v[1]};
  }
  return out;
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

// Inverse of format_setting.
std::map<std::string, double> parse_setting(const std::string& text) {
  std::map<std::string, double> out;
  if (text.empty() || text == "-") return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw SchemaError("bad setting: " + text);
    out[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
  }
  return out;
}

}  // namespace

void JobConfig::validate() const {
  std::set<std::string> seen;
  for (const auto& s : stages) {
    const auto& known = job_stages();
    if (std::find(known.begin(), known.end(), s) == known.end()) {
      throw ConfigError("unknown stage: " + s);
    }
    if (!seen.insert(s).second) throw ConfigError("stage listed twice: " + s);
  }
  if (stages.empty()) throw ConfigError("no stages selected");
  if (workers < 0) throw ConfigError("workers must be >= 0");
  generator.validate();
  if (n_requests < 1) throw ConfigError("n_requests must be >= 1");
  if (drift && drift->drift_index > n_requests) {
    throw ConfigError("drift index beyond the generated logs");
  }
  if (has_stage(*this, "ingest") && !has_stage(*this, "generate")) {
    if (logs_path.empty()) {
      throw ConfigError("ingest without generate needs a logs path");
    }
    if (!fs::exists(logs_path)) {
      throw ConfigError("logs file does not exist: " + logs_path.string());
    }
  }
  if (grid.kind == GridSourceKind::kFile ||
      grid.kind == GridSourceKind::kRecommendation) {
    if (!fs::exists(grid.path)) {
      throw ConfigError("grid file does not exist: " + grid.path);
    }
  }
  if (grid.kind == GridSourceKind::kSample) {
    if (grid.count < 1) throw ConfigError("sampled grid needs count >= 1");
    if (grid.ranges.empty()) throw ConfigError("sampled grid needs ranges");
    for (const auto& [knob, r] : grid.ranges) {
      validate_knob(knob, r.first);
      validate_knob(knob, r.second);
      if (r.first > r.second) throw ConfigError("empty range for " + knob);
    }
  }
  for (const auto& p : grid.points) {
    for (const auto& [knob, v] : p.setting) validate_knob(knob, v);
  }
  DataCube probe(dimensions);
  if (probe.dimension_index(kDimGridPoint) < 0) {
    throw ConfigError("dimensions must include grid_point_id");
  }
  if (explore.top_k < 1 || explore.population < 1 || explore.batches < 0 ||
      explore.top_k > explore.population) {
    throw ConfigError("invalid explore settings");
  }
  if (has_stage(*this, "compare")) {
    if (!compare) throw ConfigError("compare stage needs a compare section");
    compare->validate();
  }
  if (tuning_setting) {
    for (const auto& [knob, v] : *tuning_setting) validate_knob(knob, v);
  }
}

JobConfig parse_job_config(const json& j, const fs::path& base_dir) {
  check_keys(j,
             {"output_dir", "stages", "seed", "workers", "generator",
              "n_requests", "logging_policy", "drift", "logs", "filter",
              "click_model", "grid", "dimensions", "explore", "compare",
              "tuning_setting"},
             "job");
  JobConfig c;
  try {
    c.output_dir = resolve(base_dir, j.value("output_dir", std::string("genie_out")));
    if (j.contains("stages")) {
      c.stages = j.at("stages").get<std::vector<std::string>>();
    } else {
      c.stages = {"generate", "ingest", "train-click", "simulate", "report"};
    }
    // Stages always run in pipeline order.
    const auto& order = job_stages();
    std::stable_sort(c.stages.begin(), c.stages.end(),
                     [&](const std::string& a, const std::string& b) {
                       return std::find(order.begin(), order.end(), a) <
                              std::find(order.begin(), order.end(), b);
                     });
    if (j.contains("seed") && !j.at("seed").is_null()) {
      c.seed = j.at("seed").get<std::uint64_t>();
    }
    c.workers = j.value("workers", 0);
    if (j.contains("generator")) {
      c.generator = generator_config_from_json(j.at("generator"));
    }
    c.n_requests = j.value("n_requests", c.n_requests);
    if (j.contains("logging_policy")) {
      c.logging_policy = PolicyConfig(
          j.at("logging_policy").get<std::map<std::string, double>>());
    }
    if (j.contains("drift")) {
      const json& d = j.at("drift");
      check_keys(d, {"index", "policy"}, "drift");
      c.drift = DriftSpec{
          d.at("index").get<std::size_t>(),
          PolicyConfig(d.at("policy").get<std::map<std::string, double>>())};
    }
    if (j.contains("logs")) {
      c.logs_path = resolve(base_dir, j.at("logs").get<std::string>());
    }
    if (j.contains("filter")) {
      const json& f = j.at("filter");
      check_keys(f, {"query_classes", "record_begin", "record_end"}, "filter");
      c.filter.query_classes =
          f.value("query_classes", std::vector<std::int64_t>{});
      c.filter.record_begin = f.value("record_begin", std::size_t{0});
      c.filter.record_end = f.value("record_end", c.filter.record_end);
    }
    if (j.contains("click_model")) {
      c.click_model = click_model_spec_from_json(j.at("click_model"));
    }
    if (j.contains("grid")) {
      const json& g = j.at("grid");
      check_keys(g, {"inline", "file", "recommendation", "sample"}, "grid");
      if (g.size() != 1) throw ConfigError("exactly one grid source required");
      if (g.contains("inline")) {
        c.grid.kind = GridSourceKind::kInline;
        std::int64_t next = 1;
        for (const auto& p : g.at("inline")) {
          GridPoint point;
          point.id = p.value("id", next);
          point.setting =
              p.value("setting", std::map<std::string, double>{});
          next = point.id + 1;
          c.grid.points.push_back(std::move(point));
        }
      } else if (g.contains("file")) {
        c.grid.kind = GridSourceKind::kFile;
        c.grid.path = resolve(base_dir, g.at("file").get<std::string>()).string();
      } else if (g.contains("recommendation")) {
        c.grid.kind = GridSourceKind::kRecommendation;
        c.grid.path =
            resolve(base_dir, g.at("recommendation").get<std::string>()).string();
      } else {
        const json& s = g.at("sample");
        check_keys(s, {"count", "ranges"}, "grid sample");
        c.grid.kind = GridSourceKind::kSample;
        c.grid.count = s.at("count").get<std::size_t>();
        c.grid.ranges = ranges_from_json(s.at("ranges"));
      }
    }
    if (j.contains("dimensions")) {
      c.dimensions = j.at("dimensions").get<std::vector<std::string>>();
    }
    if (j.contains("explore")) {
      const json& e = j.at("explore");
      check_keys(e,
                 {"objective", "constraints", "surrogate", "batches",
                  "population", "top_k", "ranges"},
                 "explore");
      c.explore.objective =
          Objective::parse(e.value("objective", std::string("max:rpm")));
      for (const auto& s : e.value("constraints", std::vector<std::string>{})) {
        c.explore.objective.constraints.push_back(Constraint::parse(s));
      }
      if (e.contains("surrogate")) {
        const json& s = e.at("surrogate");
        check_keys(s, {"kind", "lambda", "degree"}, "surrogate");
        c.explore.surrogate.kind =
            regression_kind_from_string(s.value("kind", std::string("linear")));
        c.explore.surrogate.lambda = s.value("lambda", 0.0);
        c.explore.surrogate.degree = s.value("degree", 3);
      }
      c.explore.batches = e.value("batches", c.explore.batches);
      c.explore.population = e.value("population", c.explore.population);
      c.explore.top_k = e.value("top_k", c.explore.top_k);
      if (e.contains("ranges")) c.explore.ranges = ranges_from_json(e.at("ranges"));
    }
    if (j.contains("compare")) c.compare = scenario_from_json(j.at("compare"));
    if (j.contains("tuning_setting")) {
      c.tuning_setting =
          j.at("tuning_setting").get<std::map<std::string, double>>();
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid job config: ") + e.what());
  }
  c.validate();
  return c;
}

JobConfig load_job_config(const fs::path& path) {
  const std::string text = read_text_file(path.string());
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError("job config is not valid JSON: " + std::string(e.what()));
  }
  return parse_job_config(j, path.parent_path());
}

json JobSummary::to_json(bool with_timings) const {
  json j = {{"ok", ok},
            {"seed", seed},
            {"conversion_success", conversion_success},
            {"simulation_accuracy", simulation_accuracy},
            {"records", records},
            {"grid_points", grid_points},
            {"artifacts", artifacts}};
  if (!ok) {
    j["failed_stage"] = failed_stage;
    j["error"] = error;
  }
  if (with_timings) j["stage_seconds"] = stage_seconds;
  return j;
}

CubeFile simulate_to_cube(const std::vector<AuctionData>& records,
                          const std::vector<GridPoint>& grid,
                          const ClickModel& model,
                          const std::vector<std::string>& dimensions,
                          int workers) {
  CubeFile out;
  out.grid = with_baseline(grid);
  out.cube = simulate_dataset(records, out.grid, model, dimensions, workers);
  return out;
}

KpiReport report_from_cube(const CubeFile& cube,
                           std::int64_t baseline_grid_id) {
  std::map<std::int64_t, std::string> settings;
  for (const auto& p : cube.grid) settings[p.id] = format_setting(p.setting);
  return kpi_report(cube.cube, baseline_grid_id, settings);
}

Recommendation recommend_from_report(const KpiReport& report,
                                     const ExploreSettings& settings,
                                     std::uint64_t seed) {
  std::set<std::string> knob_set;
  std::vector<std::pair<std::map<std::string, double>, const ReportRow*>> rows;
  for (const auto& r : report.rows) {
    if (!r.rollup) continue;
    auto setting = parse_setting(r.setting);
    for (const auto& [k, v] : setting) knob_set.insert(k);
    rows.emplace_back(std::move(setting), &r);
  }
  Recommendation rec;
  rec.knobs.assign(knob_set.begin(), knob_set.end());
  if (rec.knobs.empty()) {
    throw ConfigError("report has no grid points with settings to explore");
  }
  const auto metrics = settings.objective.metrics();
  std::vector<std::vector<double>> x;
  std::map<std::string, std::vector<double>> deltas;
  for (const auto& [setting, row] : rows) {
    // Points must fix every explored knob and have every needed delta.
    bool usable = setting.size() == rec.knobs.size();
    for (const auto& m : metrics) usable = usable && row->delta.get(m).has_value();
    if (!usable) continue;
    std::vector<double> point;
    for (const auto& k : rec.knobs) point.push_back(setting.at(k));
    x.push_back(std::move(point));
    for (const auto& m : metrics) deltas[m].push_back(*row->delta.get(m));
  }
  if (x.empty()) throw ConfigError("report has no usable grid points");

  ExploreParams params;
  params.batches = settings.batches;
  params.population = settings.population;
  params.top_k = settings.top_k;
  params.objective = settings.objective;
  params.seed = seed;
  for (std::size_t d = 0; d < rec.knobs.size(); ++d) {
    if (auto it = settings.ranges.find(rec.knobs[d]); it != settings.ranges.end()) {
      params.ranges.push_back(it->second);
    } else {
      double lo = x.front()[d];
      double hi = lo;
      for (const auto& p : x) {
        lo = std::min(lo, p[d]);
        hi = std::max(hi, p[d]);
      }
      params.ranges.push_back({lo, hi});
    }
  }
  const OptimizeResult result =
      optimize(x, deltas, settings.surrogate, params);
  rec.feasible = result.feasible;
  rec.candidates = result.top;
  rec.best_objective = result.best_objective;
  std::int64_t id = 1;
  for (const auto& c : result.top) {
    GridPoint p;
    p.id = id++;
    for (std::size_t d = 0; d < rec.knobs.size(); ++d) {
      p.setting[rec.knobs[d]] = c.x[d];
    }
    rec.grid.push_back(std::move(p));
  }
  return rec;
}

std::vector<GridPoint> sample_grid(const std::map<std::string, Range>& ranges,
                                   std::size_t count, std::uint64_t seed) {
  Rng rng(seed, "grid");
  std::vector<GridPoint> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    GridPoint p;
    p.id = static_cast<std::int64_t>(i) + 1;
    for (const auto& [knob, r] : ranges) {
      const double v = rng.uniform(r.first, r.second);
      validate_knob(knob, v);
      p.setting[knob] = v;
    }
    out.push_back(std::move(p));
  }
  return out;
}

namespace {

class JobRunner {
 public:
  JobRunner(const JobConfig& config, JobSummary& summary)
      : c_(config), s_(summary), dir_(config.output_dir) {}

  void run_stage(const std::string& stage) {
    if (stage == "generate") generate();
    if (stage == "ingest") ingest();
    if (stage == "train-click") train_click();
    if (stage == "simulate") simulate();
    if (stage == "report") report();
    if (stage == "explore") explore_stage();
    if (stage == "compare") compare();
  }

 private:
  std::string path(const char* name) const { return (dir_ / name).string(); }

  void record(const char* name) { s_.artifacts[name] = name; }

  std::uint64_t stage_seed(std::string_view stage) const {
    return derive_seed(s_.seed, stage);
  }

  void generate() {
    marketplace_ = generate_marketplace(c_.generator, stage_seed("marketplace"));
    write_text_file(path(artifact::kMarketplace),
                    to_json(*marketplace_).dump(2) + "\n");
    record(artifact::kMarketplace);
    const LogDataset logs =
        generate_logs(*marketplace_, c_.logging_policy, c_.n_requests,
                      c_.drift, stage_seed("logs"), c_.workers);
    write_log_file(path(artifact::kLogs), logs);
    record(artifact::kLogs);
  }

  void ingest() {
    const std::string input = has_stage(c_, "generate")
                                  ? path(artifact::kLogs)
                                  : c_.logs_path.string();
    std::ifstream in(input, std::ios::binary);
    if (!in) throw IoError("cannot open " + input);
    auto [records, stats] = validate_and_convert(in);
    s_.conversion_success = stats.conversion_success;
    records_ = c_.filter.apply(std::move(records));
    s_.records = records_->size();

    std::ostringstream out;
    for (const auto& r : *records_) out << format_log_line(r) << '\n';
    write_text_file(path(artifact::kConverted), out.str());
    record(artifact::kConverted);

    json rejections = json::array();
    for (const auto& r : stats.rejections) {
      rejections.push_back({{"line", r.line_number}, {"reason", r.reason}});
    }
    const json j = {{"total", stats.total},
                    {"converted", stats.converted},
                    {"conversion_success", stats.conversion_success},
                    {"zero_total", stats.zero_total},
                    {"kept_after_filter", records_->size()},
                    {"rejections", rejections}};
    write_text_file(path(artifact::kIngestStats), j.dump(2) + "\n");
    record(artifact::kIngestStats);
  }

  const std::vector<AuctionData>& records() {
    if (!records_) {
      std::ifstream in(path(artifact::kConverted), std::ios::binary);
      if (!in) throw IoError("no ingested logs; run the ingest stage first");
      auto [records, stats] = validate_and_convert(in);
      if (!stats.rejections.empty()) {
        throw SchemaError("converted logs are corrupt");
      }
      records_ = std::move(records);
      s_.records = records_->size();
    }
    return *records_;
  }

  void train_click() {
    const auto impressions = impressions_from_logs(records());
    if (impressions.empty()) throw ConfigError("no impressions to train on");
    model_ = train_click_model(impressions, c_.click_model);
    write_text_file(path(artifact::kClickModel), serialize_click_model(*model_));
    record(artifact::kClickModel);
  }

  const ClickModel& model() {
    if (!model_) {
      model_ = parse_click_model(read_text_file(path(artifact::kClickModel)));
    }
    return *model_;
  }

  std::vector<GridPoint> resolve_grid() {
    switch (c_.grid.kind) {
      case GridSourceKind::kInline:
        return c_.grid.points;
      case GridSourceKind::kFile:
      case GridSourceKind::kRecommendation:
        return read_grid_file(c_.grid.path);
      case GridSourceKind::kSample:
        return sample_grid(c_.grid.ranges, c_.grid.count, stage_seed("grid"));
    }
    return {};
  }

  void simulate() {
    const auto& recs = records();
    const ClickModel& m = model();
    const std::vector<GridPoint> grid = with_baseline(resolve_grid());
    write_grid_file(path(artifact::kGrid), grid);
    record(artifact::kGrid);
    s_.grid_points = grid.size();
    s_.simulation_accuracy = replay_check(recs).accuracy;
    cube_ = simulate_to_cube(recs, grid, m, c_.dimensions, c_.workers);
    std::ostringstream out;
    write_cube_file(out, *cube_);
    write_text_file(path(artifact::kCube), out.str());
    record(artifact::kCube);
  }

  void report() {
    if (!cube_) {
      std::ifstream in(path(artifact::kCube), std::ios::binary);
      if (!in) throw IoError("no cube; run the simulate stage first");
      cube_ = read_cube_file(in);
      s_.grid_points = cube_->grid.size();
    }
    report_ = report_from_cube(*cube_);
    std::ostringstream out;
    write_report(out, *report_);
    write_text_file(path(artifact::kReport), out.str());
    record(artifact::kReport);
  }

  void explore_stage() {
    if (!report_) {
      std::ifstream in(path(artifact::kReport), std::ios::binary);
      if (!in) throw IoError("no report; run the report stage first");
      report_ = read_report(in);
    }
    recommendation_ =
        recommend_from_report(*report_, c_.explore, stage_seed("explore"));
    std::ostringstream out;
    out << "# objective " << (c_.explore.objective.maximize ? "max:" : "min:")
        << c_.explore.objective.metric << '\n';
    if (!recommendation_->feasible) out << "# infeasible: no candidate met the constraints\n";
    write_grid(out, recommendation_->grid);
    write_text_file(path(artifact::kRecommendation), out.str());
    record(artifact::kRecommendation);
  }

  void compare() {
    if (!marketplace_) {
      const std::string p = path(artifact::kMarketplace);
      if (fs::exists(p)) {
        marketplace_ = marketplace_from_json(json::parse(read_text_file(p)));
      } else {
        marketplace_ =
            generate_marketplace(c_.generator, stage_seed("marketplace"));
      }
    }
    const ScenarioConfig& scenario = *c_.compare;
    const ComparisonTable table =
        compare_estimators(*marketplace_, scenario, c_.workers);
    std::ostringstream out;
    write_comparison_table(out, table);
    write_text_file(path(artifact::kComparison), out.str());
    record(artifact::kComparison);

    std::map<std::string, double> setting;
    if (c_.tuning_setting) {
      setting = *c_.tuning_setting;
    } else if (recommendation_ && !recommendation_->grid.empty()) {
      setting = recommendation_->grid.front().setting;
    } else {
      setting = {{scenario.tuned_knob,
                  scenario.tuned_value + scenario.randomization_stddev}};
    }
    const auto rows = end_to_end_tuning(
        *marketplace_, c_.logging_policy, setting,
        scenario.requests_per_interval, stage_seed("end_to_end"),
        scenario.click_model, c_.workers);
    std::ostringstream tuning;
    tuning << "# setting " << format_setting(setting) << '\n';
    write_tuning_table(tuning, rows);
    write_text_file(path(artifact::kEndToEnd), tuning.str());
    record(artifact::kEndToEnd);
  }

  const JobConfig& c_;
  JobSummary& s_;
  fs::path dir_;
  std::optional<MarketplaceModel> marketplace_;
  std::optional<std::vector<AuctionData>> records_;
  std::optional<ClickModel> model_;
  std::optional<CubeFile> cube_;
  std::optional<KpiReport> report_;
  std::optional<Recommendation> recommendation_;
};

}  // namespace

JobSummary run_job(const JobConfig& config) {
  config.validate();
  JobSummary summary;
  summary.seed = config.seed ? *config.seed : draw_seed();
  std::error_code ec;
  fs::create_directories(config.output_dir, ec);
  if (ec) {
    throw IoError("cannot create " + config.output_dir.string() + ": " +
                  ec.message());
  }
  JobRunner runner(config, summary);
  for (const auto& stage : config.stages) {
    const auto start = std::chrono::steady_clock::now();
    try {
      runner.run_stage(stage);
    } catch (const std::exception& e) {
      summary.ok = false;
      summary.failed_stage = stage;
      summary.error = e.what();
    }
    summary.stage_seconds[stage] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (!summary.ok) break;
  }
  summary.artifacts[artifact::kSummary] = artifact::kSummary;
  write_text_file((config.output_dir / artifact::kSummary).string(),
                  summary.to_json(false).dump(2) + "\n");
  write_text_file((config.output_dir / artifact::kTimings).string(),
                  json(summary.stage_seconds).dump(2) + "\n");
  return summary;
}

}  // namespace genie
