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

#include "genie/click_model.h"

#include <cmath>

#include <gtest/gtest.h>

#include "genie/binning.h"
#include "genie/errors.h"
#include "genie/gbt.h"
#include "genie/marketplace.h"
#include "genie/metrics.h"
#include "genie/probit.h"
#include "genie/random.h"

namespace genie {
namespace {

std::vector<FeatureSchema> two_feature_schema() {
  return {{"x", FeatureKind::kContinuous}, {"c", FeatureKind::kCategorical}};
}

std::vector<LabeledImpression> toy_data(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<LabeledImpression> out;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = rng.uniform();
    const int c = static_cast<int>(rng.index(3));
    // Interaction: the category flips the slope in x.
    const double logit = (c == 0 ? 3.0 : -3.0) * (x - 0.5) + 0.5 * c - 1.0;
    LabeledImpression imp;
    imp.features = {{"x", x}, {"c", "k" + std::to_string(c)}};
    imp.label = rng.bernoulli(1.0 / (1.0 + std::exp(-logit))) ? 1 : -1;
    out.push_back(std::move(imp));
  }
  return out;
}

TEST(BinningTest, ContinuousAndCategoricalBins) {
  FeatureBins f{"x", FeatureKind::kContinuous, {1.0, 2.0}, {}};
  EXPECT_EQ(f.bin_count(), 3);
  EXPECT_EQ(f.bin_of(-5.0), 0);
  EXPECT_EQ(f.bin_of(1.0), 1);
  EXPECT_EQ(f.bin_of(1.5), 1);
  EXPECT_EQ(f.bin_of(9.0), 2);
  EXPECT_THROW(f.bin_of(std::string("a")), SchemaError);
  FeatureBins c{"c", FeatureKind::kCategorical, {}, {"a", "b"}};
  EXPECT_EQ(c.bin_count(), 3);
  EXPECT_EQ(c.bin_of(std::string("b")), 1);
  EXPECT_EQ(c.bin_of(std::string("zzz")), 2);
}

TEST(BinningTest, OneActiveBinPerFeature) {
  const auto data = toy_data(500, 1);
  std::vector<RawFeatures> raw;
  for (const auto& d : data) raw.push_back(d.features);
  const BinningSpec spec = fit_binning(raw, two_feature_schema(), 8);
  EXPECT_LE(spec.features[0].bin_count(), 8);
  for (const auto& r : raw) {
    const BinnedVector v = bin_features(r, spec);
    ASSERT_EQ(v.active_bins.size(), 2u);
    EXPECT_EQ(v.active_bins[0].first, 0);
    EXPECT_EQ(v.active_bins[1].first, 1);
  }
  EXPECT_THROW(bin_features({{"x", 0.1}}, spec), SchemaError);
  EXPECT_THROW(bin_features({{"x", 0.1}, {"c", "k0"}, {"extra", 1.0}}, spec),
               SchemaError);
}

TEST(ProbitTest, UpdateDirectionAndVarianceShrink) {
  const BinningSpec spec{{{"c", FeatureKind::kCategorical, {}, {"a", "b"}}}};
  ProbitModel m = probit_init(spec);
  const BinnedVector a = bin_features({{"c", "a"}}, spec);
  double p = probit_predict(m, a);
  EXPECT_DOUBLE_EQ(p, 0.5);
  for (int i = 0; i < 50; ++i) {
    const auto before = m.sigma2;
    probit_update(m, a, +1);
    const double next = probit_predict(m, a);
    EXPECT_GT(next, p);
    p = next;
    EXPECT_LT(m.sigma2[0], before[0]);
    EXPECT_GT(m.sigma2[0], 0.0);
    EXPECT_EQ(m.sigma2[1], before[1]);
  }
  probit_update(m, a, -1);
  EXPECT_LT(probit_predict(m, a), p);
  EXPECT_THROW(probit_update(m, a, 0), SchemaError);
}

TEST(ProbitTest, ExtremeSurpriseStaysFinite) {
  const BinningSpec spec{{{"c", FeatureKind::kCategorical, {}, {"a"}}}};
  ProbitModel m = probit_init(spec, {50.0, 1.0}, 0.05);
  const BinnedVector a = bin_features({{"c", "a"}}, spec);
  probit_update(m, a, -1);
  EXPECT_TRUE(std::isfinite(m.mu[0]));
  EXPECT_GT(m.sigma2[0], 0.0);
  EXPECT_LT(m.sigma2[0], 1.0);
  const double p = probit_predict(m, a);
  EXPECT_GT(p, 0.0);
  EXPECT_LT(p, 1.0);
}

TEST(ProbitTest, InvalidPriorRejected) {
  EXPECT_THROW(probit_init({}, {0.0, 0.0}), ConfigError);
  EXPECT_THROW(probit_init({}, {}, 0.0), ConfigError);
}

TEST(ProbitTest, SymmetryAndOrderDeterminism) {
  const auto data = toy_data(2000, 2);
  std::vector<RawFeatures> raw;
  for (const auto& d : data) raw.push_back(d.features);
  const BinningSpec spec = fit_binning(raw, two_feature_schema());
  const ProbitModel a = probit_train(data, spec);
  EXPECT_EQ(a, probit_train(data, spec));
  ProbitModel neg = a;
  for (double& mu : neg.mu) mu = -mu;
  for (const auto& r : raw) {
    EXPECT_NEAR(probit_predict(neg, r), 1.0 - probit_predict(a, r), 1e-12);
  }
}

TEST(GbtTest, SingleTreeOnConstantLabels) {
  std::vector<LabeledImpression> data(50);
  for (std::size_t i = 0; i < data.size(); ++i) {
    data[i].features = {{"x", static_cast<double>(i)}};
    data[i].label = 1;
  }
  GbtParams p;
  p.n_trees = 1;
  const GbtModel m = gbt_train(data, {{"x", FeatureKind::kContinuous}}, p);
  for (const auto& d : data) EXPECT_GT(gbt_predict(m, d.features), 0.5);
  p.n_trees = 0;
  EXPECT_THROW(gbt_train(data, {{"x", FeatureKind::kContinuous}}, p),
               ConfigError);
  EXPECT_THROW(gbt_train({}, {{"x", FeatureKind::kContinuous}}, GbtParams{}),
               ConfigError);
}

TEST(GbtTest, TrainingLossNonIncreasingForSmallSteps) {
  const auto data = toy_data(3000, 3);
  GbtParams p;
  p.n_trees = 40;
  p.learning_rate = 0.1;
  std::vector<double> loss;
  const GbtModel m = gbt_train(data, two_feature_schema(), p, &loss);
  ASSERT_EQ(loss.size(), 41u);
  for (std::size_t i = 1; i < loss.size(); ++i) {
    EXPECT_LE(loss[i], loss[i - 1] + 1e-15) << "tree " << i;
  }
  for (const auto& t : m.trees) EXPECT_TRUE(tree_well_formed(t, m.features));
}

TEST(GbtTest, LearnsInteractionBetterThanProbit) {
  const auto train = toy_data(20000, 4);
  const auto test = toy_data(5000, 5);
  ClickModelSpec probit;
  ClickModelSpec gbt;
  gbt.kind = ClickModelKind::kGbt;
  gbt.gbt.n_trees = 100;
  auto loss = [&](const ClickModel& m) {
    std::vector<double> p, y;
    for (const auto& t : test) {
      p.push_back(m.predict(t.features));
      y.push_back(label_to_binary(t.label));
    }
    return eval_logloss(p, y);
  };
  // The toy schema is not the impression schema, so train directly.
  std::vector<RawFeatures> raw;
  for (const auto& d : train) raw.push_back(d.features);
  const ClickModel pm(probit_train(train, fit_binning(raw, two_feature_schema())));
  const ClickModel gm(gbt_train(train, two_feature_schema(), gbt.gbt));
  EXPECT_LT(loss(gm), loss(pm));
}

TEST(GbtTest, SigmoidSymmetry) {
  for (double s : {-40.0, -3.0, -0.1, 0.0, 0.7, 5.0, 800.0}) {
    EXPECT_NEAR(sigmoid(-s), 1.0 - sigmoid(s), 1e-15);
  }
  const auto data = toy_data(500, 6);
  GbtParams p;
  p.n_trees = 5;
  GbtModel m = gbt_train(data, two_feature_schema(), p);
  GbtModel neg = m;
  neg.base_score = -neg.base_score;
  for (auto& t : neg.trees) {
    for (auto& n : t.nodes) n.value = -n.value;
  }
  for (const auto& d : data) {
    EXPECT_NEAR(gbt_predict(neg, d.features), 1.0 - gbt_predict(m, d.features),
                1e-12);
  }
  EXPECT_THROW(gbt_predict(m, {{"x", 0.5}}), SchemaError);
}

TEST(ClickModelTest, SerializationIsByteStable) {
  const auto model = generate_marketplace(GeneratorConfig{}, 2);
  const auto logs = generate_logs(model, PolicyConfig(), 300, std::nullopt, 2);
  const auto imps = impressions_from_logs(logs.records);
  ClickModelSpec gbt;
  gbt.kind = ClickModelKind::kGbt;
  gbt.gbt.n_trees = 10;
  for (const ClickModelSpec& spec : {ClickModelSpec{}, gbt}) {
    const ClickModel m = train_click_model(imps, spec);
    const std::string text = serialize_click_model(m);
    const ClickModel back = parse_click_model(text);
    EXPECT_EQ(back, m);
    EXPECT_EQ(serialize_click_model(back), text);
    for (const auto& i : imps) {
      EXPECT_EQ(back.predict(i.features), m.predict(i.features));
    }
  }
  EXPECT_THROW(parse_click_model("{\"format\": \"other\"}"), SchemaError);
  EXPECT_THROW(parse_click_model("not json"), SchemaError);
}

TEST(ClickModelTest, SpecJson) {
  ClickModelSpec s;
  s.kind = ClickModelKind::kGbt;
  s.gbt.n_trees = 12;
  s.beta = 0.5;
  const ClickModelSpec back = click_model_spec_from_json(to_json(s));
  EXPECT_EQ(back.kind, ClickModelKind::kGbt);
  EXPECT_EQ(back.gbt.n_trees, 12);
  EXPECT_EQ(back.beta, 0.5);
  EXPECT_THROW(click_model_spec_from_json({{"trees", 3}}), ConfigError);
}

// Direct re-implementations of the evaluation metrics.
double reference_logloss(const std::vector<double>& p,
                         const std::vector<double>& y) {
  long double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const long double q =
        std::min(std::max<long double>(p[i], 1e-12L), 1.0L - 1e-12L);
    total += -(y[i] * std::log(q) + (1.0L - y[i]) * std::log(1.0L - q));
  }
  return static_cast<double>(total / p.size());
}

TEST(MetricsTest, AgreesWithReference) {
  Rng rng(9);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = rng.index(50) + 1;
    std::vector<double> p(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = rng.uniform();
      y[i] = rng.bernoulli(0.4) ? 1.0 : 0.0;
    }
    y[0] = 1.0;
    EXPECT_NEAR(eval_logloss(p, y), reference_logloss(p, y), 1e-12);
    double sp = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sp += p[i];
      sy += y[i];
    }
    EXPECT_NEAR(eval_cumulative_error(p, y), std::abs(sy - sp) / sy, 1e-12);
  }
}

TEST(MetricsTest, WorkedValues) {
  using V = std::vector<double>;
  EXPECT_NEAR(eval_logloss(V(4, 0.5), V{0, 1, 1, 0}),
              std::log(2.0), 1e-15);
  EXPECT_NEAR(eval_logloss(V{0.25}, V{1.0}), -std::log(0.25), 1e-15);
  EXPECT_LE(eval_logloss(V{1.0, 0.0}, V{1.0, 0.0}), 1.1e-12);
  std::vector<double> labels(1000, 0.0), preds(1000, 0.11);
  for (int i = 0; i < 100; ++i) labels[i] = 1.0;
  EXPECT_NEAR(eval_cumulative_error(preds, labels), 0.10, 1e-12);
  EXPECT_EQ(eval_cumulative_error(labels, labels), 0.0);
  EXPECT_THROW(eval_cumulative_error(V{0.1}, V{0.0}), UndefinedMetricError);
  EXPECT_THROW(eval_logloss(V{0.1, 0.2}, V{0.0}), SchemaError);
}

}  // namespace
}  // namespace genie
