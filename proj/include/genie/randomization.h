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

#ifndef GENIE_RANDOMIZATION_H_
#define GENIE_RANDOMIZATION_H_

#include <string>
#include <vector>

#include "genie/random.h"

namespace genie {

// Gaussian restricted to [lower, upper].
struct TruncatedGaussian {
  double mean = 0.0;
  double stddev = 1.0;
  double lower = -1.0;
  double upper = 1.0;

  // -infinity outside the bounds.
  double log_density(double x) const;
  double sample(Rng& rng) const;

  bool operator==(const TruncatedGaussian&) const = default;
};

struct RandomizedKnob {
  std::string knob;
  TruncatedGaussian distribution;

  bool operator==(const RandomizedKnob&) const = default;
};

// Per-request randomization of knob values at logging time.
struct RandomizationSpec {
  std::vector<RandomizedKnob> knobs;

  // Gaussian truncated at mean +- sigmas * stddev.
  static RandomizationSpec single(const std::string& knob, double mean,
                                  double stddev, double sigmas = 3.0);

  // Throws ConfigError: stddev must be positive, bounds must contain the mean
  // and knobs must be registered.
  void validate() const;

  bool operator==(const RandomizationSpec&) const = default;
};

}  // namespace genie

#endif  // GENIE_RANDOMIZATION_H_
