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

#include "genie/auction.h"

#include <algorithm>
#include <numeric>
#include <optional>

#include "genie/errors.h"

namespace genie {

int PageTemplate::total_capacity() const {
  int total = 0;
  for (const auto& b : blocks) total += b.capacity;
  return total;
}

int PageAllocation::mainline_count() const {
  return static_cast<int>(
      std::count_if(placements.begin(), placements.end(),
                    [](const Placement& p) { return p.is_mainline(); }));
}

namespace {

struct RankedAd {
  std::size_t index;
  double rank_score;
};

double gsp_cpc(double pricing_score, const AdRecord& ad) {
  double cpc;
  if (ad.quality > 0.0) {
    cpc = pricing_score / ad.quality;
  } else {
    cpc = pricing_score > 0.0 ? ad.bid : 0.0;
  }
  return std::clamp(cpc, 0.0, ad.bid);
}

PageAllocation fill_template(const PageTemplate& tmpl,
                             const std::vector<AdRecord>& ads,
                             const std::vector<RankedAd>& order,
                             double reserve) {
  PageAllocation page;
  page.template_id = tmpl.template_id;
  std::vector<bool> placed(ads.size(), false);

  for (const Block& block : tmpl.blocks) {
    auto eligible = [&](const RankedAd& r) {
      return !placed[r.index] && r.rank_score >= reserve &&
             ads[r.index].pclick >= block.min_pclick;
    };
    for (int slot = 0; slot < block.capacity; ++slot) {
      auto winner = std::find_if(order.begin(), order.end(), eligible);
      if (winner == order.end()) break;
      auto runnerup = std::find_if(winner + 1, order.end(), eligible);

      const AdRecord& ad = ads[winner->index];
      Placement p;
      p.block = block.name;
      p.slot = slot;
      p.ad_id = ad.ad_id;
      p.rank_score = winner->rank_score;
      p.pricing_score =
          runnerup != order.end() ? runnerup->rank_score : reserve;
      p.pclick = ad.pclick;
      p.cpc = gsp_cpc(p.pricing_score, ad);
      page.utility += p.rank_score;
      page.placements.push_back(std::move(p));
      placed[winner->index] = true;
    }
  }
  return page;
}

}  // namespace

PageAllocation run_auction(const AuctionData& data) {
  if (data.page_templates.empty()) {
    throw SchemaError("request " + std::to_string(data.request_id) +
                      " has no page templates");
  }
  std::vector<RankedAd> order;
  order.reserve(data.ads.size());
  for (std::size_t i = 0; i < data.ads.size(); ++i) {
    order.push_back({i, data.ads[i].rank_score()});
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](const RankedAd& a, const RankedAd& b) {
                     if (a.rank_score != b.rank_score) {
                       return a.rank_score > b.rank_score;
                     }
                     return data.ads[a.index].ad_id < data.ads[b.index].ad_id;
                   });
  const double reserve = data.policy_params.get(kReserveScore);

  std::optional<PageAllocation> best;
  for (const PageTemplate& tmpl : data.page_templates) {
    PageAllocation page = fill_template(tmpl, data.ads, order, reserve);
    if (!best || page.utility > best->utility ||
        (page.utility == best->utility &&
         page.template_id < best->template_id)) {
      best = std::move(page);
    }
  }
  return *std::move(best);
}

bool same_allocation(const PageAllocation& a, const PageAllocation& b) {
  if (a.template_id != b.template_id ||
      a.placements.size() != b.placements.size() || a.utility != b.utility) {
    return false;
  }
  for (std::size_t i = 0; i < a.placements.size(); ++i) {
    const Placement& x = a.placements[i];
    const Placement& y = b.placements[i];
    if (x.block != y.block || x.slot != y.slot || x.ad_id != y.ad_id ||
        x.rank_score != y.rank_score || x.pricing_score != y.pricing_score ||
        x.cpc != y.cpc) {
      return false;
    }
  }
  return true;
}

}  // namespace genie
