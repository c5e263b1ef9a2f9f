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

#ifndef GENIE_EXPLORE_H_
#define GENIE_EXPLORE_H_

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "genie/random.h"
#include "genie/regression.h"

namespace genie {

// Bound on one metric's predicted delta. "cy>=-0.01", "mliy<=0.02" and
// "|cy|<=0.01" are the accepted textual forms.
struct Constraint {
  std::string metric;
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  bool absolute = false;

  bool satisfied(double value) const;
  static Constraint parse(const std::string& text);
};

// "max:rpm" or "min:cpc", plus optional constraints.
struct Objective {
  std::string metric = "rpm";
  bool maximize = true;
  std::vector<Constraint> constraints;

  static Objective parse(const std::string& text);
  // Metrics the objective and its constraints read.
  std::vector<std::string> metrics() const;
};

using Range = std::pair<double, double>;

struct ExploreParams {
  int batches = 20;
  int population = 5000;
  int top_k = 10;
  Objective objective;
  std::vector<Range> ranges;
  std::uint64_t seed = 0;

  // Throws ConfigError.
  void validate() const;
};

// `population` candidates, each a uniformly chosen parent with a random
// non-empty subset of its dimensions resampled uniformly within `ranges`.
// The subset size is uniform on 1..dims.
std::vector<std::vector<double>> explore(
    const std::vector<std::vector<double>>& current, int population,
    const std::vector<Range>& ranges, Rng& rng);

struct Candidate {
  std::vector<double> x;
  std::map<std::string, double> predicted;
  // Order of creation; input points come first.
  std::size_t creation_index = 0;
};

struct OptimizeResult {
  bool feasible = false;
  std::vector<Candidate> top;
  // Best feasible objective of the selected set after each iteration, the
  // first entry being the input set.
  std::vector<double> best_objective;
  std::map<std::string, RegressionModel> surrogates;
};

// Fits one surrogate per metric the objective needs, then runs `batches`
// rounds of explore -> predict -> keep the best `population` of the union
// with the previous set. Returns the top-k feasible candidates by the
// objective. Input points keep their observed deltas. Candidates outside the
// ranges or violating a constraint never reach the result; when none is left
// `feasible` is false and `top` is empty.
OptimizeResult optimize(const std::vector<std::vector<double>>& x,
                        const std::map<std::string, std::vector<double>>& deltas,
                        const RegressionSpec& surrogate,
                        const ExploreParams& params);

}  // namespace genie

#endif  // GENIE_EXPLORE_H_
