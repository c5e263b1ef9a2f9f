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

#ifndef GENIE_METRICS_H_
#define GENIE_METRICS_H_

#include <span>

namespace genie {

inline constexpr double kLogLossEpsilon = 1e-12;

// |sum(y) - sum(p)| / sum(y). Throws SchemaError on length mismatch and
// UndefinedMetricError when sum(y) is zero.
double eval_cumulative_error(std::span<const double> predictions,
                             std::span<const double> labels);

// Mean log loss with predictions clipped to [eps, 1 - eps]. Labels in
// {0, 1}. Throws SchemaError on length mismatch.
double eval_logloss(std::span<const double> predictions,
                    std::span<const double> labels);

}  // namespace genie

#endif  // GENIE_METRICS_H_
