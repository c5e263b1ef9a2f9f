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

#ifndef GENIE_IMPORTANCE_SAMPLING_H_
#define GENIE_IMPORTANCE_SAMPLING_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "genie/auction.h"
#include "genie/marketplace.h"
#include "genie/randomization.h"

namespace genie {

// Counterfactual knob distribution P*(x). Each knob is truncated to the
// bounds of the logging distribution so weights stay bounded.
struct ProposalDistribution {
  std::vector<RandomizedKnob> knobs;

  // Same stddev and bounds as `logging`, means moved to `means` (one per
  // logging knob, in order).
  static ProposalDistribution shifted(const RandomizationSpec& logging,
                                      const std::vector<double>& means);
  // P* = P.
  static ProposalDistribution same_as(const RandomizationSpec& logging);
};

// Human-readable problems when the proposal's support leaves the logging
// support (weights would be unbounded there). Empty when contained.
std::vector<std::string> support_warnings(const ProposalDistribution& target,
                                          const RandomizationSpec& logging);

// Logs whose randomized knobs are drawn i.i.d. per request from truncated
// Gaussians on top of `base_policy` (or the drifted policy past the drift
// index). Clicks are Bernoulli draws from the true click function. Request
// inputs match generate_logs with the same seed.
LogDataset generate_randomized_logs(const MarketplaceModel& model,
                                    const PolicyConfig& base_policy,
                                    const RandomizationSpec& spec,
                                    std::size_t n_requests, std::uint64_t seed,
                                    const std::optional<DriftSpec>& drift = {},
                                    int workers = 1);

using MetricExtractor = std::function<double(const AuctionData&)>;

// Realized per-request outcomes of a logged record.
double realized_revenue(const AuctionData& record);
double realized_clicks(const AuctionData& record);
double logged_impressions(const AuctionData& record);
double logged_mainline_impressions(const AuctionData& record);

struct IsEstimate {
  double estimate = 0.0;
  // (sum w)^2 / sum w^2.
  double ess = 0.0;
  std::size_t n = 0;
  double weight_sum = 0.0;
  // Weighted stddev of the metric over sqrt(ess).
  double standard_error = 0.0;
};

// w(x) = P*(x) / P(x) for every record, evaluated in log space so that P* = P
// gives exactly 1. Throws WeightError for a sample outside the logging
// support and SchemaError when the logs carry no randomization.
std::vector<double> importance_weights(const LogDataset& logs,
                                       const ProposalDistribution& target);

// (1/N) sum w_i y_i, or sum w_i y_i / sum w_i when self-normalized.
IsEstimate is_estimate(const LogDataset& logs,
                       const ProposalDistribution& target,
                       const MetricExtractor& metric,
                       bool self_normalized = false);

}  // namespace genie

#endif  // GENIE_IMPORTANCE_SAMPLING_H_
