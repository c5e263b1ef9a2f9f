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

#include "genie/metrics.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "genie/errors.h"

namespace genie {

namespace {

void check_lengths(std::size_t a, std::size_t b) {
  if (a != b) {
    throw SchemaError("prediction/label length mismatch: " +
                      std::to_string(a) + " vs " + std::to_string(b));
  }
}

}  // namespace

double eval_cumulative_error(std::span<const double> predictions,
                             std::span<const double> labels) {
  check_lengths(predictions.size(), labels.size());
  double sum_y = 0.0;
  double sum_p = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    sum_y += labels[i];
    sum_p += predictions[i];
  }
  if (sum_y == 0.0) {
    throw UndefinedMetricError("cumulative error needs at least one click");
  }
  return std::abs(sum_y - sum_p) / sum_y;
}

double eval_logloss(std::span<const double> predictions,
                    std::span<const double> labels) {
  check_lengths(predictions.size(), labels.size());
  if (labels.empty()) throw UndefinedMetricError("log loss of no samples");
  double total = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double p =
        std::clamp(predictions[i], kLogLossEpsilon, 1.0 - kLogLossEpsilon);
    total -= labels[i] * std::log(p) + (1.0 - labels[i]) * std::log1p(-p);
  }
  return total / static_cast<double>(labels.size());
}

}  // namespace genie
