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

#ifndef GENIE_SIMULATION_H_
#define GENIE_SIMULATION_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "genie/auction.h"
#include "genie/click_model.h"
#include "genie/kpi_cube.h"
#include "genie/marketplace.h"
#include "genie/policy.h"

namespace genie {

// Undo record for one applied modifier. Holds the original values of every
// field the modifier touched, so restoring is exact.
class Restorer {
 public:
  void restore(AuctionData& data) const;

 private:
  friend class Modifier;
  std::optional<std::vector<double>> bids_;
  std::optional<std::vector<double>> qualities_;
  std::optional<std::vector<PageTemplate>> templates_;
  std::optional<PolicyConfig> policy_;
};

// In-place mutation of auction data for one grid point. Knob values are
// absolute settings: bid_multiplier rescales bids by new / logged multiplier,
// quality_exponent recomputes quality from pclick, mainline_capacity and
// mainline_min_pclick rewrite mainline blocks, reserve_score is read by the
// auction from the policy.
class Modifier {
 public:
  explicit Modifier(GridPoint point) : point_(std::move(point)) {}

  const GridPoint& grid_point() const { return point_; }

  // Applies the setting and returns its restorer. Throws ConfigError for
  // out-of-range values, leaving `data` untouched.
  Restorer apply(AuctionData& data) const;

 private:
  GridPoint point_;
};

// One modifier per grid point, in grid order. Throws ConfigError for an
// empty grid or an unregistered knob.
std::vector<Modifier> generate_modifiers(std::span<const GridPoint> grid);

// `grid` with the baseline point (id 0, empty setting) prepended if absent.
// Throws ConfigError when id 0 carries a non-empty setting or ids repeat.
std::vector<GridPoint> with_baseline(std::span<const GridPoint> grid);

struct SimulationResult {
  GridPoint point;
  KpiRecord kpi;
};

// For each grid point: modify, run the auction, re-predict the click
// probability of each placement, compute the request KPI, restore. `data` is
// bit-identical to its input on return. Results follow grid order and always
// start with the baseline unless the grid already contains it. A failing
// modifier yields a result with `kpi.error` set.
std::vector<SimulationResult> simulate_request(AuctionData& data,
                                               std::span<const GridPoint> grid,
                                               const ClickModel& model);

// Click probabilities used for an allocation: either a trained model or the
// ground-truth click function.
std::vector<double> predicted_clicks(const ClickModel& model,
                                     const AuctionData& data,
                                     const PageAllocation& allocation);

// Click probabilities of every placement of an allocation.
using ClickFunction = std::function<std::vector<double>(
    const AuctionData& data, const PageAllocation& allocation)>;

ClickFunction model_click_function(const ClickModel& model);
// The ground-truth click function of a synthetic marketplace.
ClickFunction true_click_function(const TrueClickParams& params);

std::vector<SimulationResult> simulate_request(AuctionData& data,
                                               std::span<const GridPoint> grid,
                                               const ClickFunction& clicks);

// Simulates every record and folds the outcomes into one cube. Workers own
// private copies of their records; partial cubes merge exactly, so the cube
// is independent of `workers`.
DataCube simulate_dataset(std::span<const AuctionData> records,
                          std::span<const GridPoint> grid,
                          const ClickModel& model,
                          const std::vector<std::string>& dimensions =
                              default_dimensions(),
                          int workers = 1);
DataCube simulate_dataset(std::span<const AuctionData> records,
                          std::span<const GridPoint> grid,
                          const ClickFunction& clicks,
                          const std::vector<std::string>& dimensions =
                              default_dimensions(),
                          int workers = 1);

struct SimulationAccuracy {
  std::size_t total = 0;
  std::size_t matched = 0;
  double accuracy = 1.0;
  std::vector<std::uint64_t> mismatched_request_ids;
};

// Fraction of records whose unmodified replay reproduces the logged
// allocation exactly.
SimulationAccuracy replay_check(std::span<const AuctionData> records);

}  // namespace genie

#endif  // GENIE_SIMULATION_H_
