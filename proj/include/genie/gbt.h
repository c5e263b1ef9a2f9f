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

#ifndef GENIE_GBT_H_
#define GENIE_GBT_H_

#include <span>
#include <string>
#include <vector>

#include "genie/features.h"

namespace genie {

struct GbtParams {
  int n_trees = 300;
  double learning_rate = 1.0;
  int max_depth = 4;
  int min_samples_leaf = 20;
  // Candidate split points per continuous feature.
  int max_bins = 64;
};

// A node either splits or is a leaf. Continuous splits send x <= threshold
// left; categorical splits send the categories in `left_categories` left.
struct TreeNode {
  int feature = -1;  // -1 for a leaf
  double threshold = 0.0;
  std::vector<int> left_categories;  // sorted category codes
  int left = -1;
  int right = -1;
  double value = 0.0;  // leaf weight, already scaled by the learning rate

  bool is_leaf() const { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

struct RegressionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  bool operator==(const RegressionTree&) const = default;
};

struct GbtFeature {
  std::string name;
  FeatureKind kind = FeatureKind::kContinuous;
  std::vector<std::string> categories;  // code = index

  bool operator==(const GbtFeature&) const = default;
};

struct GbtModel {
  std::vector<GbtFeature> features;
  // Constant logit added before the trees.
  double base_score = 0.0;
  std::vector<RegressionTree> trees;
  double learning_rate = 1.0;
  int max_depth = 4;
  int min_samples_leaf = 20;

  bool operator==(const GbtModel&) const = default;
};

// Gradient tree boosting on log loss. Iteration t fits a least-squares
// regression tree to the negative loss gradient y - p (labels mapped to
// {0, 1}, gradient taken with respect to the additive score) and adds its
// leaf means times the learning rate. The initial score is the logit of the
// base click rate.
//
// Throws ConfigError for empty data or n_trees < 1. When
// `training_loss` is non-null it receives the training log loss after the
// initial score and after each tree.
GbtModel gbt_train(std::span<const LabeledImpression> data,
                   const std::vector<FeatureSchema>& schema,
                   const GbtParams& params,
                   std::vector<double>* training_loss = nullptr);

// base_score + sum of traversed leaf weights.
double gbt_raw_score(const GbtModel& model, const RawFeatures& features);

// sigmoid(gbt_raw_score). Throws SchemaError for a missing feature.
double gbt_predict(const GbtModel& model, const RawFeatures& features);

// Every split is reachable: along each root-to-leaf path, thresholds stay
// inside the interval left by earlier splits on the same feature and
// categorical splits partition a non-empty category set.
bool tree_well_formed(const RegressionTree& tree,
                      const std::vector<GbtFeature>& features);

double sigmoid(double x);

}  // namespace genie

#endif  // GENIE_GBT_H_
