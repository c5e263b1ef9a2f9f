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

#include "genie/marketplace.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "genie/errors.h"
#include "genie/parallel.h"
#include "genie/random.h"

namespace genie {

std::vector<double> TrueClickParams::as_vector() const {
  return {intercept, relevance, position, sidebar, interaction};
}

TrueClickParams TrueClickParams::from_vector(const std::vector<double>& v) {
  if (v.size() != 5) {
    throw ConfigError("true click params need 5 coefficients, got " +
                      std::to_string(v.size()));
  }
  return {v[0], v[1], v[2], v[3], v[4]};
}

std::vector<PageTemplate> GeneratorConfig::default_layouts() {
  return {
      {0, {{std::string(kMainline), 4, 4, 0.0}, {std::string(kSidebar), 3, 3, 0.0}}},
      {1, {{std::string(kMainline), 2, 2, 0.0}, {std::string(kSidebar), 4, 4, 0.0}}},
      {2, {{std::string(kSidebar), 5, 5, 0.0}}},
  };
}

namespace {

void check_layouts(const std::vector<PageTemplate>& layouts) {
  if (layouts.empty()) throw ConfigError("at least one page layout required");
  bool any_capacity = false;
  for (const auto& t : layouts) {
    for (const auto& b : t.blocks) {
      if (b.capacity < 0 || b.layout_capacity < 0) {
        throw ConfigError("negative block capacity");
      }
    }
    any_capacity = any_capacity || t.total_capacity() >= 1;
  }
  if (!any_capacity) throw ConfigError("every page layout has zero capacity");
}

double logit(double p) { return std::log(p / (1.0 - p)); }

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

void GeneratorConfig::validate() const {
  if (advertisers < 1) throw ConfigError("advertisers must be >= 1");
  if (query_classes < 1) throw ConfigError("query_classes must be >= 1");
  if (!(bid_mean_min > 0.0) || bid_mean_max < bid_mean_min) {
    throw ConfigError("bid mean range must be positive and ordered");
  }
  if (bid_cv < 0.0) throw ConfigError("bid_cv must be >= 0");
  if (!(quality_min > 0.0) || !(quality_max < 1.0) ||
      quality_max < quality_min) {
    throw ConfigError("quality range must lie inside (0, 1) and be ordered");
  }
  if (multiplier_spread < 0.0 || multiplier_spread > 0.95) {
    throw ConfigError("multiplier_spread must be in [0, 0.95]");
  }
  if (!(participation > 0.0) || participation > 1.0) {
    throw ConfigError("participation must be in (0, 1]");
  }
  if (relevance_noise < 0.0) throw ConfigError("relevance_noise must be >= 0");
  check_layouts(layouts);
}

void MarketplaceModel::validate() const {
  if (advertisers.empty()) throw ConfigError("marketplace has no advertisers");
  if (query_classes.empty()) {
    throw ConfigError("marketplace has no query classes");
  }
  for (const auto& a : advertisers) {
    if (!(a.bid_mean > 0.0)) throw ConfigError("bid means must be > 0");
    if (a.bid_stddev < 0.0) throw ConfigError("bid stddev must be >= 0");
    if (!(a.base_quality > 0.0 && a.base_quality < 1.0)) {
      throw ConfigError("base qualities must lie in (0, 1)");
    }
  }
  double total = 0.0;
  for (const auto& q : query_classes) {
    if (q.arrival_probability < 0.0 || q.arrival_probability > 1.0) {
      throw ConfigError("arrival probabilities must lie in [0, 1]");
    }
    if (q.relevance_multiplier.size() != advertisers.size()) {
      throw ConfigError("one relevance multiplier per advertiser required");
    }
    for (double m : q.relevance_multiplier) {
      if (m < 0.0 || m > 2.0) {
        throw ConfigError("relevance multipliers must lie in [0, 2]");
      }
    }
    total += q.arrival_probability;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw ConfigError("arrival probabilities must sum to 1");
  }
  if (!(participation > 0.0) || participation > 1.0) {
    throw ConfigError("participation must be in (0, 1]");
  }
  if (relevance_noise < 0.0) throw ConfigError("relevance_noise must be >= 0");
  check_layouts(layouts);
}

MarketplaceModel generate_marketplace(const GeneratorConfig& config,
                                      std::uint64_t seed) {
  config.validate();
  Rng rng(seed, "marketplace");
  MarketplaceModel model;
  model.seed = seed;
  model.true_click = config.true_click;
  model.participation = config.participation;
  model.relevance_noise = config.relevance_noise;
  model.layouts = config.layouts;

  for (int i = 0; i < config.advertisers; ++i) {
    AdvertiserSpec a;
    a.id = i + 1;
    a.bid_mean = rng.uniform(config.bid_mean_min, config.bid_mean_max);
    a.bid_stddev = config.bid_cv * a.bid_mean;
    a.base_quality = rng.uniform(config.quality_min, config.quality_max);
    model.advertisers.push_back(a);
  }

  std::vector<double> weights;
  for (int c = 0; c < config.query_classes; ++c) {
    weights.push_back(rng.uniform(0.5, 1.5));
  }
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  for (int c = 0; c < config.query_classes; ++c) {
    QueryClass q;
    q.id = c + 1;
    q.arrival_probability = weights[c] / total;
    for (int i = 0; i < config.advertisers; ++i) {
      q.relevance_multiplier.push_back(rng.uniform(
          1.0 - config.multiplier_spread, 1.0 + config.multiplier_spread));
    }
    model.query_classes.push_back(std::move(q));
  }
  model.validate();
  return model;
}

double true_click_probability(const TrueClickParams& params, int position,
                              bool sidebar, double pclick) {
  const double l = logit(pclick);
  const double pos = static_cast<double>(position);
  const double z = params.intercept + params.relevance * l +
                   params.position * pos + (sidebar ? params.sidebar : 0.0) +
                   params.interaction * pos * l;
  return logistic(z);
}

std::vector<double> true_click_probabilities(const TrueClickParams& params,
                                             const PageAllocation& allocation) {
  std::vector<double> out;
  out.reserve(allocation.placements.size());
  for (std::size_t i = 0; i < allocation.placements.size(); ++i) {
    const Placement& p = allocation.placements[i];
    out.push_back(true_click_probability(params, static_cast<int>(i),
                                         !p.is_mainline(), p.pclick));
  }
  return out;
}

void materialize_policy(const MarketplaceModel& model,
                        const PolicyConfig& policy,
                        const std::vector<double>& raw_bids,
                        AuctionData& data) {
  data.policy_params = policy.resolved();
  const double multiplier = policy.get(kBidMultiplier);
  const double exponent = policy.get(kQualityExponent);
  for (std::size_t i = 0; i < data.ads.size(); ++i) {
    data.ads[i].bid = raw_bids[i] * multiplier;
    data.ads[i].quality = std::pow(data.ads[i].pclick, exponent);
  }
  const int mainline_cap =
      static_cast<int>(std::lround(policy.get(kMainlineCapacity)));
  const double mainline_min = policy.get(kMainlineMinPclick);
  data.page_templates = model.layouts;
  for (auto& t : data.page_templates) {
    for (auto& b : t.blocks) {
      b.layout_capacity = b.layout_capacity > 0 ? b.layout_capacity : b.capacity;
      if (b.name == kMainline) {
        b.capacity = std::min(b.layout_capacity, mainline_cap);
        b.min_pclick = mainline_min;
      } else {
        b.capacity = b.layout_capacity;
      }
    }
  }
}

RequestInputs sample_request(const MarketplaceModel& model, std::uint64_t seed,
                             std::uint64_t request_index) {
  Rng rng(seed, "request", request_index);
  RequestInputs in;

  const double u = rng.uniform();
  double acc = 0.0;
  in.query_class = model.query_classes.back().id;
  std::size_t class_pos = model.query_classes.size() - 1;
  for (std::size_t c = 0; c < model.query_classes.size(); ++c) {
    acc += model.query_classes[c].arrival_probability;
    if (u < acc) {
      in.query_class = model.query_classes[c].id;
      class_pos = c;
      break;
    }
  }
  const QueryClass& qc = model.query_classes[class_pos];

  auto make_ad = [&](std::size_t a) {
    const AdvertiserSpec& spec = model.advertisers[a];
    double bid = spec.bid_mean;
    if (spec.bid_stddev > 0.0) {
      const double s2 = std::log1p((spec.bid_stddev * spec.bid_stddev) /
                                   (spec.bid_mean * spec.bid_mean));
      bid = rng.lognormal(std::log(spec.bid_mean) - 0.5 * s2, std::sqrt(s2));
    }
    const double noise = model.relevance_noise > 0.0
                             ? rng.normal(0.0, model.relevance_noise)
                             : 0.0;
    const double l = logit(spec.base_quality) +
                     std::log(std::max(qc.relevance_multiplier[a], 1e-3)) +
                     noise;
    AdRecord ad;
    ad.ad_id = spec.id;
    ad.advertiser_id = spec.id;
    ad.bid = bid;
    ad.pclick = std::clamp(logistic(l), 1e-6, 1.0 - 1e-6);
    ad.quality = ad.pclick;
    return ad;
  };

  for (std::size_t a = 0; a < model.advertisers.size(); ++a) {
    if (rng.uniform() < model.participation) in.ads.push_back(make_ad(a));
  }
  if (in.ads.empty()) {
    in.ads.push_back(make_ad(rng.index(model.advertisers.size())));
  }
  return in;
}

namespace {

AuctionData build_request(const MarketplaceModel& model,
                          const PolicyConfig& policy, std::uint64_t seed,
                          std::uint64_t request_index) {
  RequestInputs in = sample_request(model, seed, request_index);
  AuctionData data;
  data.request_id = request_index;
  data.query_class = in.query_class;
  std::vector<double> raw_bids;
  raw_bids.reserve(in.ads.size());
  for (const auto& ad : in.ads) raw_bids.push_back(ad.bid);
  data.ads = std::move(in.ads);
  materialize_policy(model, policy, raw_bids, data);
  data.logged_allocation = run_auction(data);
  return data;
}

}  // namespace

AuctionData generate_request(const MarketplaceModel& model,
                             const PolicyConfig& policy, std::uint64_t seed,
                             std::uint64_t request_index) {
  AuctionData data = build_request(model, policy, seed, request_index);
  Rng clicks(seed, "click", request_index);
  const auto probs =
      true_click_probabilities(model.true_click, data.logged_allocation);
  data.logged_clicks.reserve(probs.size());
  for (double p : probs) data.logged_clicks.push_back(clicks.bernoulli(p));
  return data;
}

const PolicyConfig& LogDataset::policy_at(std::size_t index) const {
  if (drift && index >= drift->drift_index) return drift->drifted_policy;
  return logging_policy;
}

LogDataset generate_logs(const MarketplaceModel& model,
                         const PolicyConfig& policy, std::size_t n_requests,
                         const std::optional<DriftSpec>& drift,
                         std::uint64_t seed, int workers) {
  if (n_requests < 1) throw ConfigError("n_requests must be >= 1");
  model.validate();
  LogDataset out;
  out.logging_policy = policy;
  out.drift = drift;
  out.records.resize(n_requests);
  parallel_chunks(n_requests, resolve_workers(workers),
                  [&](std::size_t begin, std::size_t end, std::size_t) {
                    for (std::size_t i = begin; i < end; ++i) {
                      out.records[i] =
                          generate_request(model, out.policy_at(i), seed, i);
                    }
                  });
  return out;
}

std::vector<KpiRecord> ground_truth_outcomes(const MarketplaceModel& model,
                                             const PolicyConfig& policy,
                                             std::size_t n_requests,
                                             std::uint64_t seed, int workers) {
  if (n_requests < 1) throw ConfigError("n_requests must be >= 1");
  model.validate();
  std::vector<KpiRecord> out(n_requests);
  parallel_chunks(
      n_requests, resolve_workers(workers),
      [&](std::size_t begin, std::size_t end, std::size_t) {
        for (std::size_t i = begin; i < end; ++i) {
          const AuctionData data = build_request(model, policy, seed, i);
          out[i] = kpi_from_allocation(
              data.logged_allocation,
              true_click_probabilities(model.true_click,
                                       data.logged_allocation),
              data.query_class);
        }
      });
  return out;
}

DataCube ground_truth_kpi(const MarketplaceModel& model,
                          const PolicyConfig& policy, std::size_t n_requests,
                          std::uint64_t seed,
                          const std::vector<std::string>& dimensions,
                          int workers) {
  DataCube cube(dimensions);
  for (const auto& kpi :
       ground_truth_outcomes(model, policy, n_requests, seed, workers)) {
    cube.merge_from(request_cube(kpi, dimensions));
  }
  return cube;
}

DataCube true_kpi_of_logs(const MarketplaceModel& model,
                          const std::vector<AuctionData>& records,
                          const std::vector<std::string>& dimensions) {
  DataCube cube(dimensions);
  for (const auto& r : records) {
    const KpiRecord kpi = kpi_from_allocation(
        r.logged_allocation,
        true_click_probabilities(model.true_click, r.logged_allocation),
        r.query_class);
    cube.merge_from(request_cube(kpi, dimensions));
  }
  return cube;
}

}  // namespace genie
