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

#include "genie/probit.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "genie/errors.h"

namespace genie {

double normal_pdf(double t) {
  return std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::numbers::pi);
}

double normal_cdf(double t) {
  return 0.5 * std::erfc(-t / std::numbers::sqrt2);
}

namespace {

// N(t) / Phi(t). The direct ratio underflows far in the left tail, where the
// asymptotic expansion of the Mills ratio takes over.
double v_function(double t) {
  if (t < -30.0) {
    const double t2 = t * t;
    return -t / (1.0 - 1.0 / t2 + 3.0 / (t2 * t2));
  }
  return normal_pdf(t) / normal_cdf(t);
}

void check_binned(const ProbitModel& model, const BinnedVector& x) {
  const auto& features = model.binning.features;
  if (x.active_bins.size() != features.size()) {
    throw SchemaError("binned vector has " +
                      std::to_string(x.active_bins.size()) +
                      " features, model expects " +
                      std::to_string(features.size()));
  }
  for (std::size_t k = 0; k < x.active_bins.size(); ++k) {
    const auto [j, b] = x.active_bins[k];
    if (j < 0 || static_cast<std::size_t>(j) >= features.size() ||
        b < 0 || b >= features[j].bin_count()) {
      throw SchemaError("binned vector does not match the model binning");
    }
  }
}

}  // namespace

ProbitModel probit_init(BinningSpec binning, const ProbitPrior& prior,
                        double beta) {
  if (!(beta > 0.0)) throw ConfigError("beta must be > 0");
  if (!(prior.variance > 0.0)) {
    throw ConfigError("prior variance must be > 0");
  }
  ProbitModel model;
  model.binning = std::move(binning);
  const int n = model.binning.total_bins();
  model.mu.assign(n, prior.mean);
  model.sigma2.assign(n, prior.variance);
  model.beta = beta;
  model.prior = prior;
  return model;
}

void probit_update(ProbitModel& model, const BinnedVector& x, int label) {
  check_label(label);
  check_binned(model, x);
  const std::vector<int> offsets = model.binning.offsets();
  double mean = 0.0;
  double variance = model.beta * model.beta;
  for (const auto& [j, b] : x.active_bins) {
    mean += model.mu[offsets[j] + b];
    variance += model.sigma2[offsets[j] + b];
  }
  const double y = static_cast<double>(label);
  const double sd = std::sqrt(variance);
  const double t = y * mean / sd;
  const double v = v_function(t);
  const double u = v * (v + t);
  const double below_one = std::nextafter(1.0, 0.0);
  for (const auto& [j, b] : x.active_bins) {
    const int i = offsets[j] + b;
    const double s2 = model.sigma2[i];
    model.mu[i] += y * (s2 / sd) * v;
    double factor = 1.0 - (s2 / variance) * u;
    factor = std::clamp(factor, std::numeric_limits<double>::min(), below_one);
    model.sigma2[i] = s2 * factor;
  }
}

ProbitModel probit_train(std::span<const LabeledImpression> data,
                         BinningSpec binning, const ProbitPrior& prior,
                         double beta) {
  ProbitModel model = probit_init(std::move(binning), prior, beta);
  for (const auto& impression : data) {
    BinnedVector x;
    try {
      check_label(impression.label);
      x = bin_features(impression.features, model.binning);
    } catch (const SchemaError&) {
      ++model.skipped;
      continue;
    }
    probit_update(model, x, impression.label);
  }
  return model;
}

double probit_predict(const ProbitModel& model, const BinnedVector& x) {
  check_binned(model, x);
  const std::vector<int> offsets = model.binning.offsets();
  double mean = 0.0;
  double variance = model.beta * model.beta;
  for (const auto& [j, b] : x.active_bins) {
    mean += model.mu[offsets[j] + b];
    variance += model.sigma2[offsets[j] + b];
  }
  const double p = normal_cdf(mean / std::sqrt(variance));
  return std::clamp(p, std::numeric_limits<double>::min(),
                    std::nextafter(1.0, 0.0));
}

double probit_predict(const ProbitModel& model, const RawFeatures& features) {
  return probit_predict(model, bin_features(features, model.binning));
}

}  // namespace genie
