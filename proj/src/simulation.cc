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

#include "genie/simulation.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "genie/errors.h"
#include "genie/parallel.h"

namespace genie {

void Restorer::restore(AuctionData& data) const {
  if (bids_) {
    for (std::size_t i = 0; i < data.ads.size(); ++i) data.ads[i].bid = (*bids_)[i];
  }
  if (qualities_) {
    for (std::size_t i = 0; i < data.ads.size(); ++i) {
      data.ads[i].quality = (*qualities_)[i];
    }
  }
  if (templates_) data.page_templates = *templates_;
  if (policy_) data.policy_params = *policy_;
}

Restorer Modifier::apply(AuctionData& data) const {
  for (const auto& [knob, value] : point_.setting) validate_knob(knob, value);
  PolicyConfig policy = data.policy_params.with(point_.setting);

  Restorer restorer;
  restorer.policy_ = data.policy_params;
  const auto& s = point_.setting;

  if (auto it = s.find(std::string(kBidMultiplier)); it != s.end()) {
    const double logged = data.policy_params.get(kBidMultiplier);
    const double factor = it->second / logged;
    std::vector<double> bids;
    bids.reserve(data.ads.size());
    for (auto& ad : data.ads) {
      bids.push_back(ad.bid);
      ad.bid *= factor;
    }
    restorer.bids_ = std::move(bids);
  }
  if (auto it = s.find(std::string(kQualityExponent)); it != s.end()) {
    std::vector<double> qualities;
    qualities.reserve(data.ads.size());
    for (auto& ad : data.ads) {
      qualities.push_back(ad.quality);
      ad.quality = std::pow(ad.pclick, it->second);
    }
    restorer.qualities_ = std::move(qualities);
  }
  const bool capacity = s.count(std::string(kMainlineCapacity)) > 0;
  const bool min_pclick = s.count(std::string(kMainlineMinPclick)) > 0;
  if (capacity || min_pclick) {
    restorer.templates_ = data.page_templates;
    const int cap = static_cast<int>(std::lround(policy.get(kMainlineCapacity)));
    for (auto& t : data.page_templates) {
      for (auto& b : t.blocks) {
        if (b.name != kMainline) continue;
        const int layout = b.layout_capacity > 0 ? b.layout_capacity : b.capacity;
        if (capacity) b.capacity = std::min(layout, cap);
        if (min_pclick) b.min_pclick = policy.get(kMainlineMinPclick);
      }
    }
  }
  data.policy_params = std::move(policy);
  return restorer;
}

std::vector<Modifier> generate_modifiers(std::span<const GridPoint> grid) {
  if (grid.empty()) throw ConfigError("grid is empty");
  std::vector<Modifier> out;
  out.reserve(grid.size());
  for (const auto& point : grid) {
    for (const auto& [knob, value] : point.setting) {
      if (find_knob(knob) == nullptr) throw ConfigError("unknown knob: " + knob);
    }
    out.emplace_back(point);
  }
  return out;
}

std::vector<GridPoint> with_baseline(std::span<const GridPoint> grid) {
  std::vector<GridPoint> out;
  std::set<std::int64_t> ids;
  bool has_baseline = false;
  for (const auto& p : grid) {
    if (p.id == kBaselineGridId) {
      if (!p.setting.empty()) {
        throw ConfigError("grid point 0 is the baseline and takes no setting");
      }
      has_baseline = true;
    }
    if (!ids.insert(p.id).second) {
      throw ConfigError("duplicate grid point id " + std::to_string(p.id));
    }
  }
  if (!has_baseline) out.push_back(GridPoint{kBaselineGridId, {}});
  out.insert(out.end(), grid.begin(), grid.end());
  return out;
}

std::vector<double> predicted_clicks(const ClickModel& model,
                                     const AuctionData& data,
                                     const PageAllocation& allocation) {
  std::vector<double> out;
  out.reserve(allocation.placements.size());
  for (std::size_t i = 0; i < allocation.placements.size(); ++i) {
    out.push_back(model.predict(impression_features(
        data, allocation.placements[i], static_cast<int>(i))));
  }
  return out;
}

ClickFunction model_click_function(const ClickModel& model) {
  return [&model](const AuctionData& data, const PageAllocation& allocation) {
    return predicted_clicks(model, data, allocation);
  };
}

ClickFunction true_click_function(const TrueClickParams& params) {
  return [params](const AuctionData&, const PageAllocation& allocation) {
    return true_click_probabilities(params, allocation);
  };
}

std::vector<SimulationResult> simulate_request(AuctionData& data,
                                               std::span<const GridPoint> grid,
                                               const ClickFunction& clicks) {
  const std::vector<GridPoint> points = with_baseline(grid);
  const std::vector<Modifier> modifiers = generate_modifiers(points);
  std::vector<SimulationResult> results;
  results.reserve(points.size());
  for (const auto& m : modifiers) {
    SimulationResult result;
    result.point = m.grid_point();
    result.kpi.grid_point_id = m.grid_point().id;
    result.kpi.query_class = data.query_class;
    Restorer restorer;
    bool applied = false;
    try {
      restorer = m.apply(data);
      applied = true;
      const PageAllocation allocation = run_auction(data);
      KpiRecord kpi = kpi_from_allocation(allocation, clicks(data, allocation),
                                          data.query_class);
      kpi.grid_point_id = m.grid_point().id;
      result.kpi = std::move(kpi);
    } catch (const GenieError& e) {
      result.kpi.error = e.what();
    }
    if (applied) restorer.restore(data);
    results.push_back(std::move(result));
  }
  return results;
}

std::vector<SimulationResult> simulate_request(AuctionData& data,
                                               std::span<const GridPoint> grid,
                                               const ClickModel& model) {
  return simulate_request(data, grid, model_click_function(model));
}

DataCube simulate_dataset(std::span<const AuctionData> records,
                          std::span<const GridPoint> grid,
                          const ClickFunction& clicks,
                          const std::vector<std::string>& dimensions,
                          int workers) {
  const int chunks = resolve_workers(workers);
  std::vector<DataCube> partial(
      std::max<std::size_t>(1, std::min<std::size_t>(chunks, records.size())),
      DataCube(dimensions));
  parallel_chunks(records.size(), chunks,
                  [&](std::size_t begin, std::size_t end, std::size_t chunk) {
                    DataCube& cube = partial[chunk];
                    for (std::size_t i = begin; i < end; ++i) {
                      AuctionData data = records[i];
                      for (const auto& r : simulate_request(data, grid, clicks)) {
                        cube.merge_from(request_cube(r.kpi, dimensions));
                      }
                    }
                  });
  DataCube out(dimensions);
  for (const auto& p : partial) out.merge_from(p);
  return out;
}

DataCube simulate_dataset(std::span<const AuctionData> records,
                          std::span<const GridPoint> grid,
                          const ClickModel& model,
                          const std::vector<std::string>& dimensions,
                          int workers) {
  return simulate_dataset(records, grid, model_click_function(model),
                          dimensions, workers);
}

SimulationAccuracy replay_check(std::span<const AuctionData> records) {
  SimulationAccuracy acc;
  acc.total = records.size();
  for (const auto& r : records) {
    if (same_allocation(run_auction(r), r.logged_allocation)) {
      ++acc.matched;
    } else {
      acc.mismatched_request_ids.push_back(r.request_id);
    }
  }
  acc.accuracy = acc.total == 0 ? 1.0
                                : static_cast<double>(acc.matched) /
                                      static_cast<double>(acc.total);
  return acc;
}

}  // namespace genie
