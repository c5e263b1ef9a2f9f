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

#ifndef GENIE_AUCTION_H_
#define GENIE_AUCTION_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "genie/policy.h"

namespace genie {

inline constexpr std::string_view kMainline = "mainline";
inline constexpr std::string_view kSidebar = "sidebar";

struct AdRecord {
  std::int64_t ad_id = 0;
  std::int64_t advertiser_id = 0;
  // Currency per click, > 0.
  double bid = 0.0;
  // Position-independent click probability estimate in (0, 1).
  double pclick = 0.0;
  // Click quality under the active quality policy (q = pclick^exponent).
  double quality = 0.0;
  std::map<std::string, std::string> metadata;

  double rank_score() const { return bid * quality; }

  bool operator==(const AdRecord&) const = default;
};

struct Block {
  std::string name;
  int capacity = 0;
  // Capacity before the mainline_capacity knob; mainline blocks hold
  // min(layout_capacity, knob) slots.
  int layout_capacity = 0;
  // Ads below this pclick are not eligible for the block.
  double min_pclick = 0.0;

  bool operator==(const Block&) const = default;
};

// Blocks are ordered most significant first.
struct PageTemplate {
  std::int64_t template_id = 0;
  std::vector<Block> blocks;

  int total_capacity() const;

  bool operator==(const PageTemplate&) const = default;
};

struct Placement {
  std::string block;
  int slot = 0;
  std::int64_t ad_id = 0;
  double rank_score = 0.0;
  double pricing_score = 0.0;
  double pclick = 0.0;
  double cpc = 0.0;

  bool is_mainline() const { return block == kMainline; }

  bool operator==(const Placement&) const = default;
};

// Placements are in page order: blocks in template order, slots ascending.
// The index of a placement in `placements` is its page position.
struct PageAllocation {
  std::int64_t template_id = -1;
  std::vector<Placement> placements;
  double utility = 0.0;

  bool empty() const { return placements.empty(); }
  int mainline_count() const;

  bool operator==(const PageAllocation&) const = default;
};

// One logged request, reconstructed into the form the auction consumes.
struct AuctionData {
  std::uint64_t request_id = 0;
  std::int64_t query_class = 0;
  std::vector<AdRecord> ads;
  PolicyConfig policy_params;
  std::vector<PageTemplate> page_templates;
  PageAllocation logged_allocation;
  // Realized click per logged placement (1 = click), parallel to
  // logged_allocation.placements.
  std::vector<std::uint8_t> logged_clicks;

  bool operator==(const AuctionData&) const = default;
};

// Runs the GSP page allocation over every template and returns the one with
// the highest utility (ties go to the lowest template_id).
//
// Ads are ranked by bid * quality, ties broken by ascending ad_id. Each slot
// takes the first eligible ad; its pricing score is the rank score of the next
// ad eligible for the same block, or the reserve score when there is none.
// cpc = pricing_score / quality, clamped to [0, bid]. An ad is eligible for a
// block when its rank score clears the reserve, it is not already on the page,
// and its pclick clears the block's minimum.
//
// Throws SchemaError when `data` has no page templates.
PageAllocation run_auction(const AuctionData& data);

// Allocation equality on the replay-relevant fields: template, placed ads
// and their order, rank/pricing scores and cpc. Click estimates are ignored.
bool same_allocation(const PageAllocation& a, const PageAllocation& b);

}  // namespace genie

#endif  // GENIE_AUCTION_H_
