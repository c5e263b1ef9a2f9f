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

#ifndef GENIE_MARKETPLACE_H_
#define GENIE_MARKETPLACE_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "genie/auction.h"
#include "genie/kpi_cube.h"
#include "genie/policy.h"
#include "genie/randomization.h"

namespace genie {

struct AdvertiserSpec {
  std::int64_t id = 0;
  double bid_mean = 1.0;
  double bid_stddev = 0.3;
  // Position-independent click quality in (0, 1).
  double base_quality = 0.1;

  bool operator==(const AdvertiserSpec&) const = default;
};

struct QueryClass {
  std::int64_t id = 0;
  double arrival_probability = 1.0;
  // One multiplier per advertiser, in [0, 2].
  std::vector<double> relevance_multiplier;

  bool operator==(const QueryClass&) const = default;
};

// Coefficients of the ground-truth click logit
//   intercept + relevance * l + position * pos + sidebar * [sidebar]
//     + interaction * pos * l
// where l = logit(pclick) and pos is the 0-based page position.
struct TrueClickParams {
  double intercept = 0.3;
  double relevance = 1.0;
  double position = -0.25;
  double sidebar = -0.7;
  double interaction = 0.4;

  std::vector<double> as_vector() const;
  static TrueClickParams from_vector(const std::vector<double>& v);

  bool operator==(const TrueClickParams&) const = default;
};

struct GeneratorConfig {
  int advertisers = 20;
  int query_classes = 5;
  double bid_mean_min = 0.5;
  double bid_mean_max = 2.0;
  // Bid stddev as a fraction of the mean.
  double bid_cv = 0.3;
  double quality_min = 0.05;
  double quality_max = 0.35;
  // Relevance multipliers are drawn from [1 - spread, 1 + spread].
  double multiplier_spread = 0.5;
  // Probability that an advertiser enters a given auction.
  double participation = 0.4;
  // Stddev of the per-request logit noise on an ad's relevance.
  double relevance_noise = 0.3;
  TrueClickParams true_click;
  // Page layouts offered to every request. Mainline capacities are capped by
  // the mainline_capacity knob.
  std::vector<PageTemplate> layouts = default_layouts();

  static std::vector<PageTemplate> default_layouts();
  // Throws ConfigError.
  void validate() const;
};

// The synthetic ground truth: who bids, what users search for, and how they
// click.
struct MarketplaceModel {
  std::vector<AdvertiserSpec> advertisers;
  std::vector<QueryClass> query_classes;
  TrueClickParams true_click;
  std::uint64_t seed = 0;
  double participation = 0.4;
  double relevance_noise = 0.3;
  std::vector<PageTemplate> layouts;

  // Throws ConfigError when an invariant is broken.
  void validate() const;

  bool operator==(const MarketplaceModel&) const = default;
};

MarketplaceModel generate_marketplace(const GeneratorConfig& config,
                                      std::uint64_t seed);

// Ground-truth click probability of an ad with the given pclick shown at a
// 0-based page position.
double true_click_probability(const TrueClickParams& params, int position,
                              bool sidebar, double pclick);

// True click probability of every placement of an allocation.
std::vector<double> true_click_probabilities(const TrueClickParams& params,
                                             const PageAllocation& allocation);

// Writes the policy into the request: bids scaled by bid_multiplier, quality
// recomputed from pclick, templates rebuilt from layouts. `raw_bids` are the
// advertiser bids before the multiplier.
void materialize_policy(const MarketplaceModel& model,
                        const PolicyConfig& policy,
                        const std::vector<double>& raw_bids,
                        AuctionData& data);

// The request inputs for a request index. Depends only on (model, seed,
// request_index), never on the policy, so the same index under two policies
// sees the same query and the same ads.
struct RequestInputs {
  std::int64_t query_class = 0;
  std::vector<AdRecord> ads;  // bid holds the raw advertiser bid
};
RequestInputs sample_request(const MarketplaceModel& model, std::uint64_t seed,
                             std::uint64_t request_index);

// Builds the logged record for one request under `policy`: runs the auction
// and samples click outcomes from the true click function.
AuctionData generate_request(const MarketplaceModel& model,
                             const PolicyConfig& policy, std::uint64_t seed,
                             std::uint64_t request_index);

struct DriftSpec {
  std::size_t drift_index = 0;
  PolicyConfig drifted_policy;

  bool operator==(const DriftSpec&) const = default;
};

struct LogDataset {
  std::vector<AuctionData> records;
  PolicyConfig logging_policy;
  std::optional<DriftSpec> drift;
  // Present when knobs were randomized per request; the sampled values are in
  // each record's policy_params.
  std::optional<RandomizationSpec> randomization;

  // Policy that generated the record at `index`.
  const PolicyConfig& policy_at(std::size_t index) const;

  bool operator==(const LogDataset&) const = default;
};

// Records 0..drift_index-1 are generated under `policy`, the rest under the
// drifted policy. Deterministic per seed and independent of `workers`.
LogDataset generate_logs(const MarketplaceModel& model,
                         const PolicyConfig& policy, std::size_t n_requests,
                         const std::optional<DriftSpec>& drift,
                         std::uint64_t seed, int workers = 1);

// Per-request outcomes under `policy` with true click probabilities.
std::vector<KpiRecord> ground_truth_outcomes(const MarketplaceModel& model,
                                             const PolicyConfig& policy,
                                             std::size_t n_requests,
                                             std::uint64_t seed,
                                             int workers = 1);

// The oracle KPI cube: same requests as generate_logs with the same seed,
// evaluated with true click probabilities rather than a trained model.
DataCube ground_truth_kpi(const MarketplaceModel& model,
                          const PolicyConfig& policy, std::size_t n_requests,
                          std::uint64_t seed,
                          const std::vector<std::string>& dimensions =
                              default_dimensions(),
                          int workers = 1);

// KPI cube of logged records evaluated with true click probabilities.
DataCube true_kpi_of_logs(const MarketplaceModel& model,
                          const std::vector<AuctionData>& records,
                          const std::vector<std::string>& dimensions =
                              default_dimensions());

}  // namespace genie

#endif  // GENIE_MARKETPLACE_H_
