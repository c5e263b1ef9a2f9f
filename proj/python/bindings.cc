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

#include <sstream>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "json.hpp"

#include "genie/auction.h"
#include "genie/click_model.h"
#include "genie/errors.h"
#include "genie/explore.h"
#include "genie/job.h"
#include "genie/kpi_cube.h"
#include "genie/log_format.h"
#include "genie/marketplace.h"
#include "genie/metrics.h"
#include "genie/regression.h"
#include "genie/simulation.h"

namespace py = pybind11;
using nlohmann::json;

namespace {

std::string logs_text(const genie::LogDataset& logs) {
  std::ostringstream out;
  genie::write_log_dataset(out, logs);
  return out.str();
}

std::vector<genie::AuctionData> parse_logs(const std::string& text) {
  std::istringstream in(text);
  return genie::read_log_dataset(in).records;
}

std::vector<genie::GridPoint> to_grid(
    const std::vector<std::map<std::string, double>>& settings) {
  std::vector<genie::GridPoint> grid;
  std::int64_t id = 1;
  for (const auto& s : settings) grid.push_back({id++, s});
  return grid;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Counterfactual replay of ad auction logs";

  // Translators run newest first, so the base class is registered first.
  auto& base = py::register_exception<genie::GenieError>(m, "GenieError",
                                                         PyExc_RuntimeError);
  py::register_exception<genie::ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<genie::SchemaError>(m, "SchemaError", base.ptr());
  py::register_exception<genie::SingularityError>(m, "SingularityError",
                                                  base.ptr());
  py::register_exception<genie::UndefinedMetricError>(
      m, "UndefinedMetricError", base.ptr());

  m.def(
      "generate",
      [](const std::string& generator_json,
         const std::map<std::string, double>& policy, std::size_t n_requests,
         std::uint64_t seed) {
        const auto config = genie::generator_config_from_json(
            generator_json.empty() ? json::object() : json::parse(generator_json));
        const auto model = genie::generate_marketplace(config, seed);
        const auto logs = genie::generate_logs(
            model, genie::PolicyConfig(policy), n_requests, std::nullopt, seed);
        return py::make_tuple(genie::to_json(model).dump(), logs_text(logs));
      },
      py::arg("generator_json"), py::arg("policy"), py::arg("n_requests"),
      py::arg("seed"));

  m.def(
      "validate_and_convert",
      [](const std::string& text) {
        std::istringstream in(text);
        auto [records, stats] = genie::validate_and_convert(in);
        std::vector<std::size_t> rejected;
        for (const auto& r : stats.rejections) rejected.push_back(r.line_number);
        py::dict d;
        d["total"] = stats.total;
        d["converted"] = stats.converted;
        d["conversion_success"] = stats.conversion_success;
        d["zero_total"] = stats.zero_total;
        d["rejected_lines"] = rejected;
        return d;
      },
      py::arg("text"));

  m.def(
      "run_auction",
      [](const std::string& record_json) {
        const auto data = genie::auction_data_from_json(json::parse(record_json));
        return genie::to_json(genie::run_auction(data)).dump();
      },
      py::arg("record_json"));

  m.def(
      "replay_accuracy",
      [](const std::string& logs) {
        return genie::replay_check(parse_logs(logs)).accuracy;
      },
      py::arg("logs"));

  m.def(
      "train_click_model",
      [](const std::string& logs, const std::string& spec_json) {
        const auto spec = genie::click_model_spec_from_json(
            spec_json.empty() ? json::object() : json::parse(spec_json));
        const auto records = parse_logs(logs);
        return genie::serialize_click_model(genie::train_click_model(
            genie::impressions_from_logs(records), spec));
      },
      py::arg("logs"), py::arg("spec_json") = "");

  m.def(
      "click_predict",
      [](const std::string& model_text, const std::string& block,
         double pclick, int position, std::int64_t query_class) {
        const auto model = genie::parse_click_model(model_text);
        return model.predict({{"block", block},
                              {"pclick", pclick},
                              {"position", static_cast<double>(position)},
                              {"query_class", std::to_string(query_class)}});
      },
      py::arg("model"), py::arg("block"), py::arg("pclick"),
      py::arg("position"), py::arg("query_class"));

  m.def(
      "simulate_report",
      [](const std::string& logs, const std::string& model_text,
         const std::vector<std::map<std::string, double>>& settings,
         const std::vector<std::string>& dimensions, int workers) {
        const auto records = parse_logs(logs);
        const auto model = genie::parse_click_model(model_text);
        const auto cube = genie::simulate_to_cube(
            records, to_grid(settings), model, dimensions, workers);
        std::ostringstream out;
        genie::write_report(out, genie::report_from_cube(cube));
        return out.str();
      },
      py::arg("logs"), py::arg("model"), py::arg("settings"),
      py::arg("dimensions") = genie::default_dimensions(),
      py::arg("workers") = 1);

  m.def("eval_logloss",
        [](const std::vector<double>& p, const std::vector<double>& y) {
          return genie::eval_logloss(p, y);
        });
  m.def("eval_cumulative_error",
        [](const std::vector<double>& p, const std::vector<double>& y) {
          return genie::eval_cumulative_error(p, y);
        });

  m.def("poly_features",
        [](const std::vector<double>& x, int degree) {
          return genie::poly_features(x, degree);
        },
        py::arg("x"), py::arg("degree"));

  m.def(
      "fit_regression",
      [](const std::vector<std::vector<double>>& x,
         const std::vector<double>& y, const std::string& kind, double lambda,
         int degree) {
        genie::RegressionSpec spec{genie::regression_kind_from_string(kind),
                                   lambda, degree};
        return genie::fit_regression(x, y, spec).coefficients;
      },
      py::arg("x"), py::arg("y"), py::arg("kind") = "linear",
      py::arg("lam") = 0.0, py::arg("degree") = 3);

  m.def(
      "optimize",
      [](const std::vector<std::vector<double>>& x,
         const std::map<std::string, std::vector<double>>& deltas,
         const std::string& objective,
         const std::vector<std::pair<double, double>>& ranges, int degree,
         int batches, int population, int top_k, std::uint64_t seed) {
        genie::ExploreParams params;
        params.objective = genie::Objective::parse(objective);
        params.ranges = ranges;
        params.batches = batches;
        params.population = population;
        params.top_k = top_k;
        params.seed = seed;
        const auto result = genie::optimize(
            x, deltas, {genie::RegressionKind::kLinear, 0.0, degree}, params);
        std::vector<std::vector<double>> top;
        for (const auto& c : result.top) top.push_back(c.x);
        return py::make_tuple(result.feasible, top, result.best_objective);
      },
      py::arg("x"), py::arg("deltas"), py::arg("objective"), py::arg("ranges"),
      py::arg("degree") = 3, py::arg("batches") = 20,
      py::arg("population") = 5000, py::arg("top_k") = 10, py::arg("seed") = 0);

  m.def(
      "run_job",
      [](const std::string& config_path) {
        const auto config = genie::load_job_config(config_path);
        return genie::run_job(config).to_json(true).dump();
      },
      py::arg("config_path"));
}
