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

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "genie/errors.h"
#include "genie/random.h"

namespace genie {

namespace {

// Visits every sorted index tuple of length `degree` over `dims` variables.
template <typename Fn>
void for_each_monomial(int dims, int degree, Fn&& fn) {
  std::vector<int> idx(degree, 0);
  if (degree == 0) {
    fn(idx);
    return;
  }
  while (true) {
    fn(idx);
    int pos = degree - 1;
    while (pos >= 0 && idx[pos] == dims - 1) --pos;
    if (pos < 0) return;
    ++idx[pos];
    for (int q = pos + 1; q < degree; ++q) idx[q] = idx[pos];
  }
}

void check_degree(int degree) {
  if (degree < 1 || degree > 3) {
    throw ConfigError("polynomial degree must be 1, 2 or 3");
  }
}

}  // namespace

std::vector<double> poly_features(std::span<const double> x, int degree) {
  check_degree(degree);
  std::vector<double> out;
  out.reserve(poly_feature_count(static_cast<int>(x.size()), degree));
  out.push_back(1.0);
  for (int d = 1; d <= degree; ++d) {
    for_each_monomial(static_cast<int>(x.size()), d,
                      [&](const std::vector<int>& idx) {
                        double v = 1.0;
                        for (int i : idx) v *= x[i];
                        out.push_back(v);
                      });
  }
  return out;
}

std::size_t poly_feature_count(int dims, int degree) {
  // C(dims + degree, degree)
  std::size_t c = 1;
  for (int i = 1; i <= degree; ++i) {
    c = c * static_cast<std::size_t>(dims + i) / static_cast<std::size_t>(i);
  }
  return c;
}

std::vector<std::string> poly_feature_names(
    int dims, int degree, const std::vector<std::string>& dim_names) {
  check_degree(degree);
  auto name = [&](int i) {
    return static_cast<std::size_t>(i) < dim_names.size()
               ? dim_names[i]
               : "x" + std::to_string(i);
  };
  std::vector<std::string> out = {"1"};
  for (int d = 1; d <= degree; ++d) {
    for_each_monomial(dims, d, [&](const std::vector<int>& idx) {
      std::string s;
      for (std::size_t k = 0; k < idx.size(); ++k) {
        if (k > 0) s += "*";
        s += name(idx[k]);
      }
      out.push_back(std::move(s));
    });
  }
  return out;
}

const char* to_string(RegressionKind kind) {
  return kind == RegressionKind::kRidge ? "ridge" : "linear";
}

RegressionKind regression_kind_from_string(const std::string& s) {
  if (s == "linear") return RegressionKind::kLinear;
  if (s == "ridge") return RegressionKind::kRidge;
  throw ConfigError("unknown regression kind: " + s);
}

double RegressionModel::predict(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dims) {
    throw SchemaError("regression input has " + std::to_string(x.size()) +
                      " dims, model expects " + std::to_string(dims));
  }
  const std::vector<double> phi = poly_features(x, degree);
  double y = 0.0;
  for (std::size_t j = 0; j < phi.size(); ++j) y += coefficients[j] * phi[j];
  return y;
}

RegressionModel fit_regression(const std::vector<std::vector<double>>& x,
                               std::span<const double> y,
                               const RegressionSpec& spec,
                               const std::string& target_metric) {
  check_degree(spec.degree);
  if (x.empty()) throw SchemaError("regression needs at least one row");
  if (x.size() != y.size()) {
    throw SchemaError("regression has " + std::to_string(x.size()) +
                      " rows but " + std::to_string(y.size()) + " targets");
  }
  const int dims = static_cast<int>(x.front().size());
  if (dims < 1) throw SchemaError("regression rows have no dimensions");
  for (const auto& row : x) {
    if (static_cast<int>(row.size()) != dims) {
      throw SchemaError("regression rows differ in length");
    }
  }
  if (spec.kind == RegressionKind::kRidge && !(spec.lambda >= 0.0)) {
    throw ConfigError("ridge lambda must be >= 0");
  }
  const double lambda = spec.kind == RegressionKind::kRidge ? spec.lambda : 0.0;

  const Eigen::Index n = static_cast<Eigen::Index>(x.size());
  const Eigen::Index m =
      static_cast<Eigen::Index>(poly_feature_count(dims, spec.degree));
  Eigen::MatrixXd z(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::vector<double> phi = poly_features(x[i], spec.degree);
    for (Eigen::Index j = 0; j < m; ++j) z(i, j) = phi[j];
  }
  Eigen::VectorXd target(n);
  for (Eigen::Index i = 0; i < n; ++i) target(i) = y[i];

  // Standardize every column but the intercept.
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd scale = Eigen::VectorXd::Ones(m);
  for (Eigen::Index j = 1; j < m; ++j) {
    mean(j) = z.col(j).mean();
    z.col(j).array() -= mean(j);
    const double sd = std::sqrt(z.col(j).squaredNorm() / static_cast<double>(n));
    if (sd > 0.0) {
      scale(j) = sd;
      z.col(j) /= sd;
    }
  }

  Eigen::MatrixXd a = z.transpose() * z;
  for (Eigen::Index j = 1; j < m; ++j) a(j, j) += lambda;

  if (lambda == 0.0) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(z);
    qr.setThreshold(1e-10);
    if (qr.rank() < m) {
      const auto names = poly_feature_names(dims, spec.degree);
      std::vector<std::string> collinear;
      Eigen::MatrixXd kept(n, 0);
      Eigen::Index rank = 0;
      for (Eigen::Index j = 0; j < m; ++j) {
        Eigen::MatrixXd trial(n, kept.cols() + 1);
        trial << kept, z.col(j);
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> q(trial);
        q.setThreshold(1e-10);
        if (q.rank() > rank) {
          kept = std::move(trial);
          rank = q.rank();
        } else {
          collinear.push_back(names[j]);
        }
      }
      std::string what = "rank-deficient least squares (rank " +
                         std::to_string(qr.rank()) + " of " +
                         std::to_string(m) + "); collinear features:";
      for (const auto& c : collinear) what += " " + c;
      what += "; use ridge";
      throw SingularityError(what, collinear);
    }
  }

  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success) {
    throw SingularityError("normal equations are not positive definite", {});
  }
  const Eigen::VectorXd b = llt.solve(z.transpose() * target);

  RegressionModel model;
  model.kind = spec.kind;
  model.degree = spec.degree;
  model.lambda = lambda;
  model.dims = dims;
  model.target_metric = target_metric;
  model.coefficients.assign(m, 0.0);
  double intercept = b(0);
  for (Eigen::Index j = 1; j < m; ++j) {
    model.coefficients[j] = b(j) / scale(j);
    intercept -= b(j) * mean(j) / scale(j);
  }
  model.coefficients[0] = intercept;
  return model;
}

double rmse(const RegressionModel& model,
            const std::vector<std::vector<double>>& x,
            std::span<const double> y) {
  if (x.size() != y.size()) throw SchemaError("rmse length mismatch");
  if (x.empty()) throw SchemaError("rmse of no rows");
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = model.predict(x[i]) - y[i];
    total += e * e;
  }
  return std::sqrt(total / static_cast<double>(x.size()));
}

double rmse_cv(const std::vector<std::vector<double>>& x,
               std::span<const double> y, int folds, const RegressionSpec& spec,
               std::uint64_t seed) {
  if (folds < 2) throw ConfigError("cross validation needs at least 2 folds");
  if (x.size() != y.size()) throw SchemaError("rmse_cv length mismatch");
  if (x.size() < static_cast<std::size_t>(folds)) {
    throw SchemaError("fewer rows than folds");
  }
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed, "cv");
  std::shuffle(order.begin(), order.end(), rng.engine());

  double total = 0.0;
  for (int f = 0; f < folds; ++f) {
    std::vector<std::vector<double>> train_x;
    std::vector<double> train_y;
    std::vector<std::vector<double>> test_x;
    std::vector<double> test_y;
    for (std::size_t k = 0; k < order.size(); ++k) {
      const std::size_t i = order[k];
      if (static_cast<int>(k % folds) == f) {
        test_x.push_back(x[i]);
        test_y.push_back(y[i]);
      } else {
        train_x.push_back(x[i]);
        train_y.push_back(y[i]);
      }
    }
    total += rmse(fit_regression(train_x, train_y, spec), test_x, test_y);
  }
  return total / folds;
}

}  // namespace genie
