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

#ifndef GENIE_PROBIT_H_
#define GENIE_PROBIT_H_

#include <cstdint>
#include <span>
#include <vector>

#include "genie/binning.h"
#include "genie/features.h"

namespace genie {

struct ProbitPrior {
  double mean = 0.0;
  double variance = 1.0;

  bool operator==(const ProbitPrior&) const = default;
};

// Online Bayesian probit regression over one-hot binned features. Every bin
// carries a Gaussian belief N(mu, sigma2) over its weight.
struct ProbitModel {
  BinningSpec binning;
  std::vector<double> mu;
  std::vector<double> sigma2;
  double beta = 1.0;
  ProbitPrior prior;
  // Impressions that failed to bin during training.
  std::int64_t skipped = 0;

  bool operator==(const ProbitModel&) const = default;
};

// Model in its prior state. Throws ConfigError for beta <= 0 or a
// non-positive prior variance.
ProbitModel probit_init(BinningSpec binning, const ProbitPrior& prior = {},
                        double beta = 1.0);

// One message-passing update for an impression with label +1 or -1. Only the
// active bins change; their variances shrink by a factor in (0, 1).
void probit_update(ProbitModel& model, const BinnedVector& x, int label);

// Single pass over `data` in order.
ProbitModel probit_train(std::span<const LabeledImpression> data,
                         BinningSpec binning, const ProbitPrior& prior = {},
                         double beta = 1.0);

// Phi(mu / sqrt(sigma2 + beta^2)) with mu and sigma2 summed over the active
// bins. Throws SchemaError when x does not match the model's binning.
double probit_predict(const ProbitModel& model, const BinnedVector& x);
double probit_predict(const ProbitModel& model, const RawFeatures& features);

// Standard normal pdf and cdf.
double normal_pdf(double t);
double normal_cdf(double t);

}  // namespace genie

#endif  // GENIE_PROBIT_H_
