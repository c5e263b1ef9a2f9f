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

#include "genie/click_model.h"

#include <algorithm>

#include "genie/errors.h"

namespace genie {

using nlohmann::json;

const std::vector<FeatureSchema>& impression_schema() {
  static const std::vector<FeatureSchema> schema = {
      {"block", FeatureKind::kCategorical},
      {"pclick", FeatureKind::kContinuous},
      {"position", FeatureKind::kContinuous},
      {"query_class", FeatureKind::kCategorical},
  };
  return schema;
}

RawFeatures impression_features(const AuctionData& data,
                                const Placement& placement, int position) {
  return {
      {"block", placement.block},
      {"pclick", placement.pclick},
      {"position", static_cast<double>(position)},
      {"query_class", std::to_string(data.query_class)},
  };
}

std::vector<LabeledImpression> impressions_from_logs(
    std::span<const AuctionData> records) {
  std::vector<LabeledImpression> out;
  for (const auto& r : records) {
    const auto& placements = r.logged_allocation.placements;
    if (r.logged_clicks.size() != placements.size()) {
      throw SchemaError("record " + std::to_string(r.request_id) +
                        " has clicks for " +
                        std::to_string(r.logged_clicks.size()) + " of " +
                        std::to_string(placements.size()) + " placements");
    }
    for (std::size_t i = 0; i < placements.size(); ++i) {
      out.push_back({impression_features(r, placements[i], static_cast<int>(i)),
                     r.logged_clicks[i] ? 1 : -1});
    }
  }
  return out;
}

ClickModelKind ClickModel::kind() const {
  return std::holds_alternative<ProbitModel>(model_) ? ClickModelKind::kProbit
                                                     : ClickModelKind::kGbt;
}

double ClickModel::predict(const RawFeatures& features) const {
  if (const auto* p = probit()) return probit_predict(*p, features);
  return gbt_predict(*gbt(), features);
}

FeatureBins position_bins() {
  FeatureBins bins;
  bins.name = "position";
  bins.kind = FeatureKind::kContinuous;
  bins.boundaries = {1, 2, 3, 4, 5};
  return bins;
}

ClickModel train_click_model(std::span<const LabeledImpression> data,
                             const ClickModelSpec& spec) {
  if (spec.kind == ClickModelKind::kGbt) {
    return ClickModel(gbt_train(data, impression_schema(), spec.gbt));
  }
  std::vector<RawFeatures> rows;
  rows.reserve(data.size());
  for (const auto& d : data) rows.push_back(d.features);
  BinningSpec binning =
      fit_binning(rows, impression_schema(), spec.continuous_bins);
  binning.features[binning.feature_index("position")] = position_bins();
  return ClickModel(probit_train(data, std::move(binning), spec.prior,
                                 spec.beta));
}

const char* to_string(ClickModelKind kind) {
  return kind == ClickModelKind::kGbt ? "gbt" : "probit";
}

ClickModelKind click_model_kind_from_string(const std::string& s) {
  if (s == "probit") return ClickModelKind::kProbit;
  if (s == "gbt") return ClickModelKind::kGbt;
  throw ConfigError("unknown click model kind: " + s);
}

json to_json(const ClickModelSpec& spec) {
  return {{"kind", to_string(spec.kind)},
          {"prior_mean", spec.prior.mean},
          {"prior_variance", spec.prior.variance},
          {"beta", spec.beta},
          {"continuous_bins", spec.continuous_bins},
          {"n_trees", spec.gbt.n_trees},
          {"learning_rate", spec.gbt.learning_rate},
          {"max_depth", spec.gbt.max_depth},
          {"min_samples_leaf", spec.gbt.min_samples_leaf},
          {"max_bins", spec.gbt.max_bins}};
}

ClickModelSpec click_model_spec_from_json(const json& j) {
  static const std::vector<std::string> kKeys = {
      "kind",          "prior_mean", "prior_variance", "beta",
      "continuous_bins", "n_trees",  "learning_rate",  "max_depth",
      "min_samples_leaf", "max_bins"};
  if (!j.is_object()) throw ConfigError("click model spec must be an object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end()) {
      throw ConfigError("unknown click model field: " + key);
    }
  }
  ClickModelSpec spec;
  try {
    spec.kind = click_model_kind_from_string(
        j.value("kind", std::string(to_string(spec.kind))));
    spec.prior.mean = j.value("prior_mean", spec.prior.mean);
    spec.prior.variance = j.value("prior_variance", spec.prior.variance);
    spec.beta = j.value("beta", spec.beta);
    spec.continuous_bins = j.value("continuous_bins", spec.continuous_bins);
    spec.gbt.n_trees = j.value("n_trees", spec.gbt.n_trees);
    spec.gbt.learning_rate = j.value("learning_rate", spec.gbt.learning_rate);
    spec.gbt.max_depth = j.value("max_depth", spec.gbt.max_depth);
    spec.gbt.min_samples_leaf =
        j.value("min_samples_leaf", spec.gbt.min_samples_leaf);
    spec.gbt.max_bins = j.value("max_bins", spec.gbt.max_bins);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid click model spec: ") + e.what());
  }
  if (!(spec.beta > 0.0) || !(spec.prior.variance > 0.0)) {
    throw ConfigError("beta and prior variance must be > 0");
  }
  if (spec.continuous_bins < 1) throw ConfigError("continuous_bins must be >= 1");
  if (spec.gbt.n_trees < 1) throw ConfigError("n_trees must be >= 1");
  if (!(spec.gbt.learning_rate > 0.0) || spec.gbt.learning_rate > 1.0) {
    throw ConfigError("learning_rate must be in (0, 1]");
  }
  return spec;
}

namespace {

constexpr const char* kFormat = "genie-click-model";

json binning_to_json(const BinningSpec& spec) {
  json features = json::array();
  for (const auto& f : spec.features) {
    features.push_back({{"name", f.name},
                        {"kind", to_string(f.kind)},
                        {"boundaries", f.boundaries},
                        {"categories", f.categories}});
  }
  return features;
}

BinningSpec binning_from_json(const json& j) {
  BinningSpec spec;
  for (const auto& f : j) {
    FeatureBins bins;
    bins.name = f.at("name").get<std::string>();
    bins.kind = feature_kind_from_string(f.at("kind").get<std::string>());
    bins.boundaries = f.at("boundaries").get<std::vector<double>>();
    bins.categories = f.at("categories").get<std::vector<std::string>>();
    spec.features.push_back(std::move(bins));
  }
  return spec;
}

json tree_to_json(const RegressionTree& tree) {
  json nodes = json::array();
  for (const auto& n : tree.nodes) {
    if (n.is_leaf()) {
      nodes.push_back({{"value", n.value}});
    } else if (n.left_categories.empty()) {
      nodes.push_back({{"feature", n.feature},
                       {"threshold", n.threshold},
                       {"left", n.left},
                       {"right", n.right}});
    } else {
      nodes.push_back({{"feature", n.feature},
                       {"left_categories", n.left_categories},
                       {"left", n.left},
                       {"right", n.right}});
    }
  }
  return nodes;
}

RegressionTree tree_from_json(const json& j) {
  RegressionTree tree;
  for (const auto& n : j) {
    TreeNode node;
    if (n.contains("value")) {
      node.value = n.at("value").get<double>();
    } else {
      node.feature = n.at("feature").get<int>();
      if (n.contains("threshold")) {
        node.threshold = n.at("threshold").get<double>();
      } else {
        node.left_categories = n.at("left_categories").get<std::vector<int>>();
      }
      node.left = n.at("left").get<int>();
      node.right = n.at("right").get<int>();
    }
    tree.nodes.push_back(std::move(node));
  }
  return tree;
}

}  // namespace

json to_json(const ClickModel& model) {
  json j = {{"format", kFormat},
            {"version", ClickModel::kFormatVersion},
            {"kind", to_string(model.kind())}};
  if (const auto* p = model.probit()) {
    j["binning"] = binning_to_json(p->binning);
    j["beta"] = p->beta;
    j["prior"] = {{"mean", p->prior.mean}, {"variance", p->prior.variance}};
    j["skipped"] = p->skipped;
    j["mu"] = p->mu;
    j["sigma2"] = p->sigma2;
  } else {
    const GbtModel& g = *model.gbt();
    json features = json::array();
    for (const auto& f : g.features) {
      features.push_back({{"name", f.name},
                          {"kind", to_string(f.kind)},
                          {"categories", f.categories}});
    }
    j["features"] = features;
    j["base_score"] = g.base_score;
    j["learning_rate"] = g.learning_rate;
    j["max_depth"] = g.max_depth;
    j["min_samples_leaf"] = g.min_samples_leaf;
    json trees = json::array();
    for (const auto& t : g.trees) trees.push_back(tree_to_json(t));
    j["trees"] = trees;
  }
  return j;
}

ClickModel click_model_from_json(const json& j) {
  try {
    if (j.at("format").get<std::string>() != kFormat) {
      throw SchemaError("not a click model file");
    }
    const int version = j.at("version").get<int>();
    if (version != ClickModel::kFormatVersion) {
      throw SchemaError("unsupported click model version " +
                        std::to_string(version));
    }
    const ClickModelKind kind =
        click_model_kind_from_string(j.at("kind").get<std::string>());
    if (kind == ClickModelKind::kProbit) {
      ProbitModel m;
      m.binning = binning_from_json(j.at("binning"));
      m.beta = j.at("beta").get<double>();
      m.prior.mean = j.at("prior").at("mean").get<double>();
      m.prior.variance = j.at("prior").at("variance").get<double>();
      m.skipped = j.at("skipped").get<std::int64_t>();
      m.mu = j.at("mu").get<std::vector<double>>();
      m.sigma2 = j.at("sigma2").get<std::vector<double>>();
      const auto bins = static_cast<std::size_t>(m.binning.total_bins());
      if (m.mu.size() != bins || m.sigma2.size() != bins) {
        throw SchemaError("probit weights do not match the binning");
      }
      return ClickModel(std::move(m));
    }
    GbtModel g;
    for (const auto& f : j.at("features")) {
      g.features.push_back(
          {f.at("name").get<std::string>(),
           feature_kind_from_string(f.at("kind").get<std::string>()),
           f.at("categories").get<std::vector<std::string>>()});
    }
    g.base_score = j.at("base_score").get<double>();
    g.learning_rate = j.at("learning_rate").get<double>();
    g.max_depth = j.at("max_depth").get<int>();
    g.min_samples_leaf = j.at("min_samples_leaf").get<int>();
    for (const auto& t : j.at("trees")) {
      g.trees.push_back(tree_from_json(t));
      if (!tree_well_formed(g.trees.back(), g.features)) {
        throw SchemaError("malformed regression tree");
      }
    }
    return ClickModel(std::move(g));
  } catch (const json::exception& e) {
    throw SchemaError(std::string("invalid click model: ") + e.what());
  } catch (const ConfigError& e) {
    throw SchemaError(std::string("invalid click model: ") + e.what());
  }
}

std::string serialize_click_model(const ClickModel& model) {
  return to_json(model).dump() + "\n";
}

ClickModel parse_click_model(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw SchemaError(std::string("invalid click model: ") + e.what());
  }
  return click_model_from_json(j);
}

}  // namespace genie
