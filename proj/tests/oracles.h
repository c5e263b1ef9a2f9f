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

#ifndef GENIE_TESTS_ORACLES_H_
#define GENIE_TESTS_ORACLES_H_

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "genie/auction.h"
#include "genie/kpi_cube.h"
#include "genie/policy.h"
#include "genie/random.h"

namespace genie::testing {

// Brute-force GSP allocation: every slot scans all ads for the best eligible
// one, every template is filled and the best utility wins.
inline PageAllocation brute_force_allocation(const AuctionData& data) {
  const double reserve = data.policy_params.get(kReserveScore);
  auto better = [](const AdRecord& a, const AdRecord& b) {
    const double ra = a.bid * a.quality;
    const double rb = b.bid * b.quality;
    return ra > rb || (ra == rb && a.ad_id < b.ad_id);
  };
  std::vector<PageAllocation> pages;
  for (const PageTemplate& t : data.page_templates) {
    PageAllocation page;
    page.template_id = t.template_id;
    std::vector<std::int64_t> used;
    auto is_used = [&](std::int64_t id) {
      for (auto u : used) {
        if (u == id) return true;
      }
      return false;
    };
    for (const Block& block : t.blocks) {
      for (int slot = 0; slot < block.capacity; ++slot) {
        const AdRecord* first = nullptr;
        const AdRecord* second = nullptr;
        for (const AdRecord& ad : data.ads) {
          if (is_used(ad.ad_id) || ad.bid * ad.quality < reserve ||
              ad.pclick < block.min_pclick) {
            continue;
          }
          if (first == nullptr || better(ad, *first)) {
            second = first;
            first = &ad;
          } else if (second == nullptr || better(ad, *second)) {
            second = &ad;
          }
        }
        if (first == nullptr) break;
        Placement p;
        p.block = block.name;
        p.slot = slot;
        p.ad_id = first->ad_id;
        p.rank_score = first->bid * first->quality;
        p.pricing_score =
            second != nullptr ? second->bid * second->quality : reserve;
        p.pclick = first->pclick;
        double cpc = p.pricing_score / first->quality;
        if (cpc > first->bid) cpc = first->bid;
        if (cpc < 0.0) cpc = 0.0;
        p.cpc = cpc;
        page.utility += p.rank_score;
        page.placements.push_back(p);
        used.push_back(first->ad_id);
      }
    }
    pages.push_back(page);
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < pages.size(); ++i) {
    if (pages[i].utility > pages[best].utility ||
        (pages[i].utility == pages[best].utility &&
         pages[i].template_id < pages[best].template_id)) {
      best = i;
    }
  }
  return pages.at(best);
}

// Small auction with up to `max_ads` ads and `max_templates` templates of up to
// `max_slots` slots per block. Values come from coarse grids half of the time
// so that rank ties are common.
inline AuctionData random_instance(Rng& rng, int max_ads = 5,
                                   int max_templates = 3, int max_slots = 3) {
  static const double kBids[] = {0.5, 1.0, 2.0};
  static const double kQualities[] = {0.1, 0.2, 0.4};
  AuctionData data;
  data.request_id = rng.index(1000000);
  const bool coarse = rng.bernoulli(0.5);
  const int n_ads = static_cast<int>(rng.index(max_ads + 1));
  std::vector<std::int64_t> ids;
  for (int i = 0; i < n_ads; ++i) {
    std::int64_t id;
    do {
      id = static_cast<std::int64_t>(rng.index(50)) + 1;
    } while (std::find(ids.begin(), ids.end(), id) != ids.end());
    ids.push_back(id);
    AdRecord ad;
    ad.ad_id = id;
    ad.advertiser_id = id;
    ad.bid = coarse ? kBids[rng.index(3)] : rng.uniform(0.1, 3.0);
    ad.pclick = coarse ? kQualities[rng.index(3)] : rng.uniform(0.01, 0.6);
    ad.quality = ad.pclick;
    data.ads.push_back(ad);
  }
  const int n_templates = static_cast<int>(rng.index(max_templates)) + 1;
  for (int t = 0; t < n_templates; ++t) {
    PageTemplate tmpl;
    tmpl.template_id = t;
    for (const char* name : {"mainline", "sidebar"}) {
      if (rng.bernoulli(0.3)) continue;
      Block b;
      b.name = name;
      b.capacity = static_cast<int>(rng.index(max_slots + 1));
      b.layout_capacity = b.capacity;
      b.min_pclick = rng.bernoulli(0.3) ? rng.uniform(0.0, 0.3) : 0.0;
      tmpl.blocks.push_back(b);
    }
    data.page_templates.push_back(tmpl);
  }
  const double reserve = rng.bernoulli(0.5) ? 0.0 : rng.uniform(0.0, 0.3);
  data.policy_params = PolicyConfig({{std::string(kReserveScore), reserve}});
  return data;
}

// A grid point setting a random non-empty subset of knobs to values drawn
// inside practical ranges.
inline GridPoint random_grid_point(Rng& rng, std::int64_t id) {
  GridPoint point{id, {}};
  while (point.setting.empty()) {
    if (rng.bernoulli(0.5)) point.setting["bid_multiplier"] = rng.uniform(0.5, 2.0);
    if (rng.bernoulli(0.5)) point.setting["reserve_score"] = rng.uniform(0.0, 0.3);
    if (rng.bernoulli(0.5)) {
      point.setting["quality_exponent"] = rng.uniform(0.5, 1.5);
    }
    if (rng.bernoulli(0.3)) {
      point.setting["mainline_capacity"] = static_cast<double>(rng.index(6));
    }
    if (rng.bernoulli(0.3)) {
      point.setting["mainline_min_pclick"] = rng.uniform(0.0, 0.2);
    }
  }
  return point;
}

inline DataCube::Key random_key(Rng& rng, std::size_t dims) {
  DataCube::Key key;
  for (std::size_t d = 0; d < dims; ++d) {
    key.push_back(static_cast<std::int64_t>(rng.index(4)));
  }
  return key;
}

inline CellCounters random_counters(Rng& rng) {
  CellCounters c;
  c.requests = static_cast<std::int64_t>(rng.index(100));
  c.impressions = static_cast<std::int64_t>(rng.index(1000));
  c.mainline_impressions = static_cast<std::int64_t>(rng.index(500));
  c.expected_clicks_nanos = static_cast<std::int64_t>(rng.index(1u << 30));
  c.revenue_micros = static_cast<std::int64_t>(rng.index(1u << 30));
  return c;
}

inline DataCube random_cube(Rng& rng, const std::vector<std::string>& dims) {
  DataCube cube(dims);
  const std::size_t cells = rng.index(12);
  for (std::size_t i = 0; i < cells; ++i) {
    cube.add(random_key(rng, dims.size()), random_counters(rng));
  }
  return cube;
}

}  // namespace genie::testing

#endif  // GENIE_TESTS_ORACLES_H_
