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

#include "genie/log_format.h"

#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "genie/errors.h"

namespace genie {

using nlohmann::json;

namespace {

constexpr std::string_view kMetaPrefix = "#meta ";

void require(bool ok, const std::string& what) {
  if (!ok) throw SchemaError(what);
}

void check_keys(const json& j, std::initializer_list<std::string_view> allowed,
                const std::string& what) {
  if (!j.is_object()) throw ConfigError(what + " must be an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) throw ConfigError("unknown " + what + " field: " + key);
  }
}

json to_json(const RandomizationSpec& spec) {
  json knobs = json::array();
  for (const auto& k : spec.knobs) {
    knobs.push_back({{"knob", k.knob},
                     {"mean", k.distribution.mean},
                     {"stddev", k.distribution.stddev},
                     {"lower", k.distribution.lower},
                     {"upper", k.distribution.upper}});
  }
  return {{"knobs", knobs}};
}

RandomizationSpec randomization_from_json(const json& j) {
  RandomizationSpec spec;
  for (const auto& k : j.at("knobs")) {
    spec.knobs.push_back({k.at("knob").get<std::string>(),
                          {k.at("mean").get<double>(),
                           k.at("stddev").get<double>(),
                           k.at("lower").get<double>(),
                           k.at("upper").get<double>()}});
  }
  spec.validate();
  return spec;
}

json dataset_meta(const LogDataset& dataset) {
  json meta = {{"logging_policy", to_json(dataset.logging_policy)},
               {"records", dataset.records.size()}};
  if (dataset.drift) {
    meta["drift"] = {{"drift_index", dataset.drift->drift_index},
                     {"drifted_policy", to_json(dataset.drift->drifted_policy)}};
  }
  if (dataset.randomization) {
    meta["randomization"] = to_json(*dataset.randomization);
  }
  return meta;
}

}  // namespace

json to_json(const PolicyConfig& policy) {
  return {{"schema_version", policy.schema_version()},
          {"knobs", policy.knobs()}};
}

PolicyConfig policy_from_json(const json& j) {
  const int version = j.value("schema_version", PolicyConfig::kSchemaVersion);
  if (version != PolicyConfig::kSchemaVersion) {
    throw SchemaError("unsupported policy schema version " +
                      std::to_string(version));
  }
  return PolicyConfig(j.at("knobs").get<std::map<std::string, double>>(),
                      version);
}

json to_json(const PageTemplate& t) {
  json blocks = json::array();
  for (const auto& b : t.blocks) {
    blocks.push_back({{"name", b.name},
                      {"capacity", b.capacity},
                      {"layout_capacity", b.layout_capacity},
                      {"min_pclick", b.min_pclick}});
  }
  return {{"template_id", t.template_id}, {"blocks", blocks}};
}

PageTemplate template_from_json(const json& j) {
  PageTemplate t;
  t.template_id = j.at("template_id").get<std::int64_t>();
  for (const auto& b : j.at("blocks")) {
    Block block;
    block.name = b.at("name").get<std::string>();
    block.capacity = b.at("capacity").get<int>();
    block.layout_capacity = b.value("layout_capacity", block.capacity);
    block.min_pclick = b.value("min_pclick", 0.0);
    require(block.capacity >= 0 && block.layout_capacity >= 0,
            "negative block capacity");
    t.blocks.push_back(std::move(block));
  }
  return t;
}

json to_json(const PageAllocation& allocation) {
  json placements = json::array();
  for (const auto& p : allocation.placements) {
    placements.push_back({{"block", p.block},
                          {"slot", p.slot},
                          {"ad_id", p.ad_id},
                          {"rank_score", p.rank_score},
                          {"pricing_score", p.pricing_score},
                          {"pclick", p.pclick},
                          {"cpc", p.cpc}});
  }
  return {{"template_id", allocation.template_id},
          {"utility", allocation.utility},
          {"placements", placements}};
}

PageAllocation allocation_from_json(const json& j) {
  PageAllocation a;
  a.template_id = j.at("template_id").get<std::int64_t>();
  a.utility = j.at("utility").get<double>();
  for (const auto& p : j.at("placements")) {
    Placement placement;
    placement.block = p.at("block").get<std::string>();
    placement.slot = p.at("slot").get<int>();
    placement.ad_id = p.at("ad_id").get<std::int64_t>();
    placement.rank_score = p.at("rank_score").get<double>();
    placement.pricing_score = p.at("pricing_score").get<double>();
    placement.pclick = p.at("pclick").get<double>();
    placement.cpc = p.at("cpc").get<double>();
    a.placements.push_back(std::move(placement));
  }
  return a;
}

json to_json(const AuctionData& data) {
  json ads = json::array();
  for (const auto& ad : data.ads) {
    ads.push_back({{"ad_id", ad.ad_id},
                   {"advertiser_id", ad.advertiser_id},
                   {"bid", ad.bid},
                   {"pclick", ad.pclick},
                   {"quality", ad.quality},
                   {"metadata", ad.metadata}});
  }
  json templates = json::array();
  for (const auto& t : data.page_templates) templates.push_back(to_json(t));
  return {{"request_id", data.request_id},
          {"query_class", data.query_class},
          {"ads", ads},
          {"policy", to_json(data.policy_params)},
          {"templates", templates},
          {"allocation", to_json(data.logged_allocation)},
          {"clicks", data.logged_clicks}};
}

AuctionData auction_data_from_json(const json& j) {
  try {
    require(j.is_object(), "record is not an object");
    AuctionData data;
    data.request_id = j.at("request_id").get<std::uint64_t>();
    data.query_class = j.at("query_class").get<std::int64_t>();
    std::set<std::int64_t> ad_ids;
    for (const auto& a : j.at("ads")) {
      AdRecord ad;
      ad.ad_id = a.at("ad_id").get<std::int64_t>();
      ad.advertiser_id = a.at("advertiser_id").get<std::int64_t>();
      ad.bid = a.at("bid").get<double>();
      ad.pclick = a.at("pclick").get<double>();
      ad.quality = a.at("quality").get<double>();
      if (a.contains("metadata")) {
        ad.metadata = a.at("metadata").get<std::map<std::string, std::string>>();
      }
      require(ad.bid > 0.0, "bid must be > 0");
      require(ad.pclick > 0.0 && ad.pclick < 1.0, "pclick must be in (0, 1)");
      require(ad.quality >= 0.0, "quality must be >= 0");
      require(ad_ids.insert(ad.ad_id).second,
              "duplicate ad_id " + std::to_string(ad.ad_id));
      data.ads.push_back(std::move(ad));
    }
    require(!data.ads.empty(), "record has no ads");
    data.policy_params = policy_from_json(j.at("policy"));
    for (const auto& t : j.at("templates")) {
      data.page_templates.push_back(template_from_json(t));
    }
    require(!data.page_templates.empty(), "record has no page templates");
    data.logged_allocation = allocation_from_json(j.at("allocation"));
    for (const auto& p : data.logged_allocation.placements) {
      require(ad_ids.count(p.ad_id) == 1,
              "placement of unknown ad " + std::to_string(p.ad_id));
    }
    if (j.contains("clicks")) {
      for (const auto& c : j.at("clicks")) {
        const int v = c.get<int>();
        require(v == 0 || v == 1, "clicks must be 0 or 1");
        data.logged_clicks.push_back(static_cast<std::uint8_t>(v));
      }
      require(data.logged_clicks.size() ==
                  data.logged_allocation.placements.size(),
              "one click flag per placement required");
    }
    return data;
  } catch (const json::exception& e) {
    throw SchemaError(e.what());
  } catch (const ConfigError& e) {
    throw SchemaError(e.what());
  }
}

std::string format_log_line(const AuctionData& data) {
  return to_json(data).dump();
}

json to_json(const GeneratorConfig& config) {
  json layouts = json::array();
  for (const auto& t : config.layouts) layouts.push_back(to_json(t));
  return {{"advertisers", config.advertisers},
          {"query_classes", config.query_classes},
          {"bid_mean_min", config.bid_mean_min},
          {"bid_mean_max", config.bid_mean_max},
          {"bid_cv", config.bid_cv},
          {"quality_min", config.quality_min},
          {"quality_max", config.quality_max},
          {"multiplier_spread", config.multiplier_spread},
          {"participation", config.participation},
          {"relevance_noise", config.relevance_noise},
          {"true_click", config.true_click.as_vector()},
          {"layouts", layouts}};
}

GeneratorConfig generator_config_from_json(const json& j) {
  check_keys(j,
             {"advertisers", "query_classes", "bid_mean_min", "bid_mean_max",
              "bid_cv", "quality_min", "quality_max", "multiplier_spread",
              "participation", "relevance_noise", "true_click", "layouts"},
             "generator config");
  GeneratorConfig c;
  try {
    c.advertisers = j.value("advertisers", c.advertisers);
    c.query_classes = j.value("query_classes", c.query_classes);
    c.bid_mean_min = j.value("bid_mean_min", c.bid_mean_min);
    c.bid_mean_max = j.value("bid_mean_max", c.bid_mean_max);
    c.bid_cv = j.value("bid_cv", c.bid_cv);
    c.quality_min = j.value("quality_min", c.quality_min);
    c.quality_max = j.value("quality_max", c.quality_max);
    c.multiplier_spread = j.value("multiplier_spread", c.multiplier_spread);
    c.participation = j.value("participation", c.participation);
    c.relevance_noise = j.value("relevance_noise", c.relevance_noise);
    if (j.contains("true_click")) {
      c.true_click = TrueClickParams::from_vector(
          j.at("true_click").get<std::vector<double>>());
    }
    if (j.contains("layouts")) {
      c.layouts.clear();
      for (const auto& t : j.at("layouts")) {
        c.layouts.push_back(template_from_json(t));
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid generator config: ") + e.what());
  } catch (const SchemaError& e) {
    throw ConfigError(std::string("invalid generator config: ") + e.what());
  }
  c.validate();
  return c;
}

json to_json(const MarketplaceModel& model) {
  json advertisers = json::array();
  for (const auto& a : model.advertisers) {
    advertisers.push_back({{"id", a.id},
                           {"bid_mean", a.bid_mean},
                           {"bid_stddev", a.bid_stddev},
                           {"base_quality", a.base_quality}});
  }
  json classes = json::array();
  for (const auto& q : model.query_classes) {
    classes.push_back({{"id", q.id},
                       {"arrival_probability", q.arrival_probability},
                       {"relevance_multiplier", q.relevance_multiplier}});
  }
  json layouts = json::array();
  for (const auto& t : model.layouts) layouts.push_back(to_json(t));
  return {{"format", "genie-marketplace"},
          {"version", 1},
          {"seed", model.seed},
          {"advertisers", advertisers},
          {"query_classes", classes},
          {"true_click", model.true_click.as_vector()},
          {"participation", model.participation},
          {"relevance_noise", model.relevance_noise},
          {"layouts", layouts}};
}

MarketplaceModel marketplace_from_json(const json& j) {
  MarketplaceModel m;
  try {
    require(j.at("format").get<std::string>() == "genie-marketplace",
            "not a marketplace file");
    require(j.at("version").get<int>() == 1, "unsupported marketplace version");
    m.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& a : j.at("advertisers")) {
      m.advertisers.push_back({a.at("id").get<std::int64_t>(),
                               a.at("bid_mean").get<double>(),
                               a.at("bid_stddev").get<double>(),
                               a.at("base_quality").get<double>()});
    }
    for (const auto& q : j.at("query_classes")) {
      m.query_classes.push_back(
          {q.at("id").get<std::int64_t>(),
           q.at("arrival_probability").get<double>(),
           q.at("relevance_multiplier").get<std::vector<double>>()});
    }
    m.true_click = TrueClickParams::from_vector(
        j.at("true_click").get<std::vector<double>>());
    m.participation = j.at("participation").get<double>();
    m.relevance_noise = j.at("relevance_noise").get<double>();
    for (const auto& t : j.at("layouts")) {
      m.layouts.push_back(template_from_json(t));
    }
  } catch (const json::exception& e) {
    throw SchemaError(std::string("invalid marketplace: ") + e.what());
  }
  m.validate();
  return m;
}

std::pair<std::vector<AuctionData>, ConversionStats> validate_and_convert(
    std::istream& in) {
  std::vector<AuctionData> records;
  ConversionStats stats;
  std::set<std::uint64_t> ids;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    ++stats.total;
    try {
      AuctionData data = auction_data_from_json(json::parse(line));
      if (!ids.insert(data.request_id).second) {
        throw SchemaError("duplicate request_id " +
                          std::to_string(data.request_id));
      }
      records.push_back(std::move(data));
      ++stats.converted;
    } catch (const json::exception& e) {
      stats.rejections.push_back({line_number, e.what()});
    } catch (const SchemaError& e) {
      stats.rejections.push_back({line_number, e.what()});
    }
  }
  if (in.bad()) throw IoError("failed reading log stream");
  stats.zero_total = stats.total == 0;
  stats.conversion_success =
      stats.zero_total ? 1.0
                       : static_cast<double>(stats.converted) /
                             static_cast<double>(stats.total);
  return {std::move(records), std::move(stats)};
}

void write_log_dataset(std::ostream& out, const LogDataset& dataset) {
  out << kMetaPrefix << dataset_meta(dataset).dump() << '\n';
  for (const auto& r : dataset.records) out << format_log_line(r) << '\n';
  if (!out) throw IoError("failed writing log dataset");
}

LogDataset read_log_dataset(std::istream& in) {
  LogDataset dataset;
  std::set<std::uint64_t> ids;
  std::string line;
  std::size_t line_number = 0;
  std::size_t expected = 0;
  bool have_meta = false;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string where = "line " + std::to_string(line_number) + ": ";
    if (line.rfind(kMetaPrefix, 0) == 0) {
      if (have_meta || !dataset.records.empty()) {
        throw SchemaError(where + "unexpected metadata line");
      }
      have_meta = true;
      try {
        const json meta = json::parse(line.substr(kMetaPrefix.size()));
        dataset.logging_policy = policy_from_json(meta.at("logging_policy"));
        expected = meta.value("records", std::size_t{0});
        if (meta.contains("drift")) {
          const json& d = meta.at("drift");
          dataset.drift = DriftSpec{d.at("drift_index").get<std::size_t>(),
                                    policy_from_json(d.at("drifted_policy"))};
        }
        if (meta.contains("randomization")) {
          dataset.randomization =
              randomization_from_json(meta.at("randomization"));
        }
      } catch (const json::exception& e) {
        throw SchemaError(where + e.what());
      } catch (const ConfigError& e) {
        throw SchemaError(where + e.what());
      }
      continue;
    }
    if (line.empty() || line.front() == '#') continue;
    try {
      AuctionData data = auction_data_from_json(json::parse(line));
      if (!ids.insert(data.request_id).second) {
        throw SchemaError("duplicate request_id " +
                          std::to_string(data.request_id));
      }
      dataset.records.push_back(std::move(data));
    } catch (const json::exception& e) {
      throw SchemaError(where + e.what());
    } catch (const SchemaError& e) {
      throw SchemaError(where + e.what());
    }
  }
  if (in.bad()) throw IoError("failed reading log stream");
  if (have_meta && expected != dataset.records.size()) {
    throw SchemaError("log declares " + std::to_string(expected) +
                      " records but holds " +
                      std::to_string(dataset.records.size()));
  }
  if (!have_meta && !dataset.records.empty()) {
    dataset.logging_policy = dataset.records.front().policy_params;
  }
  return dataset;
}

void write_log_file(const std::string& path, const LogDataset& dataset) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  write_log_dataset(out, dataset);
}

LogDataset read_log_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return read_log_dataset(in);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("failed reading " + path);
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << content;
  if (!out) throw IoError("failed writing " + path);
}

}  // namespace genie
