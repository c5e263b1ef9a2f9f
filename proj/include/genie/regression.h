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

#ifndef GENIE_REGRESSION_H_
#define GENIE_REGRESSION_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace genie {

// All monomials of total degree <= degree, starting with the constant 1.
// Within a degree, monomials follow lexicographic order of their sorted
// variable indices: (a, b), degree 2 -> [1, a, b, a^2, ab, b^2].
std::vector<double> poly_features(std::span<const double> x, int degree);
std::size_t poly_feature_count(int dims, int degree);
// Human-readable names of the monomials, e.g. "x0*x1".
std::vector<std::string> poly_feature_names(
    int dims, int degree, const std::vector<std::string>& dim_names = {});

enum class RegressionKind { kLinear, kRidge };

const char* to_string(RegressionKind kind);
RegressionKind regression_kind_from_string(const std::string& s);

struct RegressionSpec {
  RegressionKind kind = RegressionKind::kLinear;
  double lambda = 0.0;
  int degree = 3;
};

struct RegressionModel {
  RegressionKind kind = RegressionKind::kLinear;
  int degree = 1;
  double lambda = 0.0;
  int dims = 0;
  // One coefficient per polynomial feature, in original units.
  std::vector<double> coefficients;
  std::string target_metric;

  double predict(std::span<const double> x) const;
};

// Least squares over polynomial features, or ridge with penalty lambda on
// every coefficient except the intercept. Features are standardized before
// solving and the coefficients mapped back. Throws SingularityError naming
// the collinear features when the linear system is rank deficient, and
// SchemaError for shape problems.
RegressionModel fit_regression(const std::vector<std::vector<double>>& x,
                               std::span<const double> y,
                               const RegressionSpec& spec,
                               const std::string& target_metric = "");

double rmse(const RegressionModel& model,
            const std::vector<std::vector<double>>& x,
            std::span<const double> y);

// Mean held-out RMSE over `folds` random folds (seeded assignment).
// Throws SchemaError when there are fewer rows than folds.
double rmse_cv(const std::vector<std::vector<double>>& x,
               std::span<const double> y, int folds, const RegressionSpec& spec,
               std::uint64_t seed);

}  // namespace genie

#endif  // GENIE_REGRESSION_H_
