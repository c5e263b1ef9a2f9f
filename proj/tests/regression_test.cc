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

#include "genie/regression.h"

#include <cmath>

#include <gtest/gtest.h>

#include "genie/errors.h"
#include "genie/random.h"

namespace genie {
namespace {

// Gaussian elimination with partial pivoting on the normal equations.
std::vector<double> reference_ols(const std::vector<std::vector<double>>& phi,
                                  const std::vector<double>& y) {
  const std::size_t p = phi.front().size();
  std::vector<std::vector<long double>> a(p, std::vector<long double>(p + 1));
  for (std::size_t r = 0; r < phi.size(); ++r) {
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = 0; j < p; ++j) a[i][j] += phi[r][i] * phi[r][j];
      a[i][p] += phi[r][i] * y[r];
    }
  }
  for (std::size_t c = 0; c < p; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < p; ++r) {
      if (std::fabs(a[r][c]) > std::fabs(a[piv][c])) piv = r;
    }
    std::swap(a[c], a[piv]);
    for (std::size_t r = 0; r < p; ++r) {
      if (r == c) continue;
      const long double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k <= p; ++k) a[r][k] -= f * a[c][k];
    }
  }
  std::vector<double> beta(p);
  for (std::size_t i = 0; i < p; ++i) beta[i] = a[i][p] / a[i][i];
  return beta;
}

TEST(PolyFeaturesTest, OrderingAndCount) {
  const std::vector<double> x = {2.0, 3.0};
  EXPECT_EQ(poly_features(x, 1), (std::vector<double>{1, 2, 3}));
  EXPECT_EQ(poly_features(x, 2), (std::vector<double>{1, 2, 3, 4, 6, 9}));
  EXPECT_EQ(poly_features(x, 3),
            (std::vector<double>{1, 2, 3, 4, 6, 9, 8, 12, 18, 27}));
  EXPECT_EQ(poly_feature_names(2, 2, {"a", "b"}),
            (std::vector<std::string>{"1", "a", "b", "a*a", "a*b", "b*b"}));
  for (int dims = 1; dims <= 6; ++dims) {
    for (int degree = 1; degree <= 3; ++degree) {
      const std::vector<double> z(dims, 1.0);
      EXPECT_EQ(poly_features(z, degree).size(),
                poly_feature_count(dims, degree));
      EXPECT_EQ(poly_feature_names(dims, degree).size(),
                poly_feature_count(dims, degree));
    }
  }
  EXPECT_THROW(poly_features(x, 0), ConfigError);
  EXPECT_THROW(poly_features(x, 4), ConfigError);
}

TEST(RegressionTest, MatchesNormalEquations) {
  Rng rng(1, "ols");
  for (int trial = 0; trial < 50; ++trial) {
    const int dims = 1 + static_cast<int>(rng.index(3));
    const int degree = 1 + static_cast<int>(rng.index(3));
    const std::size_t n = 40 + rng.index(60);
    std::vector<std::vector<double>> x(n, std::vector<double>(dims));
    std::vector<std::vector<double>> phi;
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (auto& v : x[i]) v = rng.uniform(-1.0, 2.0);
      phi.push_back(poly_features(x[i], degree));
      y[i] = rng.normal(0.0, 1.0) + x[i][0];
    }
    const RegressionModel m = fit_regression(x, y, {RegressionKind::kLinear, 0.0, degree});
    const std::vector<double> ref = reference_ols(phi, y);
    ASSERT_EQ(m.coefficients.size(), ref.size());
    for (std::size_t j = 0; j < ref.size(); ++j) {
      EXPECT_NEAR(m.coefficients[j], ref[j], 1e-6 * (1.0 + std::fabs(ref[j])))
          << "trial " << trial << " coefficient " << j;
    }
  }
}

TEST(RegressionTest, RecoversExactPolynomial) {
  std::vector<std::vector<double>> x;
  std::vector<double> y;
  for (int i = 0; i < 30; ++i) {
    const double a = 0.1 * i;
    x.push_back({a});
    y.push_back(1.0 - 2.0 * a + 0.5 * a * a * a);
  }
  const RegressionModel m = fit_regression(x, y, {RegressionKind::kLinear, 0.0, 3});
  const std::vector<double> expected = {1.0, -2.0, 0.0, 0.5};
  for (std::size_t j = 0; j < expected.size(); ++j) {
    EXPECT_NEAR(m.coefficients[j], expected[j], 1e-8);
  }
  EXPECT_LT(rmse(m, x, y), 1e-9);
}

TEST(RegressionTest, RidgeShrinksMonotonically) {
  Rng rng(2, "ridge");
  std::vector<std::vector<double>> x;
  std::vector<double> y;
  for (int i = 0; i < 80; ++i) {
    const double a = rng.uniform(), b = rng.uniform();
    x.push_back({a, b});
    y.push_back(3.0 * a - b + rng.normal(0.0, 0.1));
  }
  double mean = 0.0;
  for (double v : y) mean += v / y.size();
  double prev_fit = 0.0;
  double prev_spread = 1e300;
  for (double lambda : {0.0, 0.1, 1.0, 10.0, 100.0, 1e4, 1e8}) {
    const RegressionModel m =
        fit_regression(x, y, {RegressionKind::kRidge, lambda, 2});
    const double fit = rmse(m, x, y);
    EXPECT_GE(fit, prev_fit - 1e-12) << lambda;
    prev_fit = fit;
    double spread = 0.0;
    for (const auto& row : x) spread += std::pow(m.predict(row) - mean, 2);
    EXPECT_LE(spread, prev_spread + 1e-9) << lambda;
    prev_spread = spread;
  }
  EXPECT_LT(prev_spread, 1e-6);
  EXPECT_THROW(fit_regression(x, y, {RegressionKind::kRidge, -1.0, 1}),
               ConfigError);
}

TEST(RegressionTest, SingularDesignNamesColumns) {
  std::vector<std::vector<double>> x;
  std::vector<double> y;
  for (int i = 0; i < 20; ++i) {
    x.push_back({0.1 * i, 0.2 * i});
    y.push_back(i);
  }
  try {
    fit_regression(x, y, {RegressionKind::kLinear, 0.0, 1});
    FAIL() << "collinear columns accepted";
  } catch (const SingularityError& e) {
    EXPECT_FALSE(e.columns().empty());
  }
  // Ridge regularizes the same design.
  EXPECT_NO_THROW(fit_regression(x, y, {RegressionKind::kRidge, 0.5, 1}));
  // Too few rows for a cubic in two variables.
  x.resize(5);
  y.resize(5);
  EXPECT_THROW(fit_regression(x, y, {RegressionKind::kLinear, 0.0, 3}),
               SingularityError);
}

TEST(RegressionTest, InputValidation) {
  const std::vector<double> y = {1.0, 2.0};
  EXPECT_THROW(fit_regression({}, {}, {}), SchemaError);
  EXPECT_THROW(fit_regression({{1.0}}, y, {}), SchemaError);
  EXPECT_THROW(fit_regression({{1.0}, {1.0, 2.0}}, y, {}), SchemaError);
  EXPECT_THROW(rmse_cv({{1.0}, {2.0}}, y, 1, {}, 0), ConfigError);
  EXPECT_THROW(rmse_cv({{1.0}, {2.0}}, y, 3, {}, 0), SchemaError);
  EXPECT_EQ(regression_kind_from_string("ridge"), RegressionKind::kRidge);
  EXPECT_THROW(regression_kind_from_string("lasso"), ConfigError);
}

TEST(RegressionTest, CrossValidationPrefersTrueDegree) {
  Rng rng(3, "cv");
  std::vector<std::vector<double>> x;
  std::vector<double> y;
  for (int i = 0; i < 300; ++i) {
    const double a = rng.uniform(-1.0, 1.0);
    x.push_back({a});
    y.push_back(a * a + rng.normal(0.0, 0.05));
  }
  const double d1 = rmse_cv(x, y, 5, {RegressionKind::kLinear, 0.0, 1}, 7);
  const double d2 = rmse_cv(x, y, 5, {RegressionKind::kLinear, 0.0, 2}, 7);
  EXPECT_LT(d2, d1);
  EXPECT_EQ(d2, rmse_cv(x, y, 5, {RegressionKind::kLinear, 0.0, 2}, 7));
}

}  // namespace
}  // namespace genie
