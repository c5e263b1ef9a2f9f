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

#include "genie/gbt.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>

#include "genie/errors.h"
#include "genie/metrics.h"

namespace genie {

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

namespace {

// Training data in columnar form. Continuous values are bucketed against
// candidate thresholds: bucket k holds values in (t_{k-1}, t_k], so a split
// after bucket k sends x <= t_k left. Categorical values hold their codes.
struct Column {
  FeatureKind kind = FeatureKind::kContinuous;
  std::vector<double> thresholds;
  std::vector<std::uint16_t> bucket;
  int buckets = 0;
};

struct Split {
  double gain = 0.0;
  int feature = -1;
  int bucket = -1;                  // continuous: last bucket going left
  std::vector<int> left_categories;  // categorical
};

class TreeBuilder {
 public:
  TreeBuilder(const std::vector<Column>& columns, const GbtParams& params,
              const std::vector<double>& target)
      : columns_(columns), params_(params), target_(target) {}

  RegressionTree build(std::vector<std::uint32_t> rows) {
    tree_.nodes.clear();
    grow(rows, 0);
    return std::move(tree_);
  }

 private:
  int grow(std::vector<std::uint32_t>& rows, int depth) {
    const int index = static_cast<int>(tree_.nodes.size());
    tree_.nodes.emplace_back();
    double sum = 0.0;
    for (auto r : rows) sum += target_[r];
    const double n = static_cast<double>(rows.size());

    Split best;
    if (depth < params_.max_depth &&
        rows.size() >= 2 * static_cast<std::size_t>(params_.min_samples_leaf)) {
      best = find_split(rows, sum);
    }
    if (best.feature < 0) {
      tree_.nodes[index].value = params_.learning_rate * sum / n;
      return index;
    }

    const Column& col = columns_[best.feature];
    std::vector<bool> go_left(col.buckets, false);
    if (col.kind == FeatureKind::kContinuous) {
      for (int k = 0; k <= best.bucket; ++k) go_left[k] = true;
    } else {
      for (int c : best.left_categories) go_left[c] = true;
    }
    std::vector<std::uint32_t> left;
    std::vector<std::uint32_t> right;
    for (auto r : rows) {
      (go_left[col.bucket[r]] ? left : right).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();

    TreeNode node;
    node.feature = best.feature;
    if (col.kind == FeatureKind::kContinuous) {
      node.threshold = col.thresholds[best.bucket];
    } else {
      node.left_categories = best.left_categories;
    }
    const int l = grow(left, depth + 1);
    const int r = grow(right, depth + 1);
    node.left = l;
    node.right = r;
    tree_.nodes[index] = std::move(node);
    return index;
  }

  Split find_split(const std::vector<std::uint32_t>& rows, double sum) const {
    const double n = static_cast<double>(rows.size());
    const double parent = sum * sum / n;
    const auto min_leaf = static_cast<std::int64_t>(params_.min_samples_leaf);
    const std::int64_t total = static_cast<std::int64_t>(rows.size());
    Split best;
    best.gain = 1e-12 * std::max(1.0, parent);

    std::vector<double> s;
    std::vector<std::int64_t> c;
    for (std::size_t f = 0; f < columns_.size(); ++f) {
      const Column& col = columns_[f];
      s.assign(col.buckets, 0.0);
      c.assign(col.buckets, 0);
      for (auto r : rows) {
        s[col.bucket[r]] += target_[r];
        ++c[col.bucket[r]];
      }
      std::vector<int> order;
      if (col.kind == FeatureKind::kContinuous) {
        order.resize(col.buckets);
        std::iota(order.begin(), order.end(), 0);
      } else {
        for (int k = 0; k < col.buckets; ++k) {
          if (c[k] > 0) order.push_back(k);
        }
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
          return s[a] / static_cast<double>(c[a]) <
                 s[b] / static_cast<double>(c[b]);
        });
      }
      double sl = 0.0;
      std::int64_t cl = 0;
      // The last bucket can never be the end of the left side.
      for (std::size_t i = 0; i + 1 < order.size(); ++i) {
        sl += s[order[i]];
        cl += c[order[i]];
        if (c[order[i]] == 0) continue;
        const std::int64_t cr = total - cl;
        if (cl < min_leaf) continue;
        if (cr < min_leaf) break;
        const double sr = sum - sl;
        const double gain = sl * sl / static_cast<double>(cl) +
                            sr * sr / static_cast<double>(cr) - parent;
        if (gain > best.gain) {
          best.gain = gain;
          best.feature = static_cast<int>(f);
          if (col.kind == FeatureKind::kContinuous) {
            best.bucket = order[i];
            best.left_categories.clear();
          } else {
            best.bucket = -1;
            best.left_categories.assign(order.begin(), order.begin() + i + 1);
            std::sort(best.left_categories.begin(),
                      best.left_categories.end());
          }
        }
      }
    }
    return best;
  }

  const std::vector<Column>& columns_;
  const GbtParams& params_;
  const std::vector<double>& target_;
  RegressionTree tree_;
};

int category_code(const GbtFeature& f, const std::string& value) {
  auto it = std::lower_bound(f.categories.begin(), f.categories.end(), value);
  if (it != f.categories.end() && *it == value) {
    return static_cast<int>(it - f.categories.begin());
  }
  return static_cast<int>(f.categories.size());
}

const FeatureValue& lookup(const RawFeatures& features, const GbtFeature& f) {
  auto it = features.find(f.name);
  if (it == features.end()) throw SchemaError("missing feature: " + f.name);
  return it->second;
}

double continuous_value(const FeatureValue& v, const std::string& name) {
  const double* d = std::get_if<double>(&v);
  if (d == nullptr) throw SchemaError("feature " + name + " expects a number");
  return *d;
}

const std::string& categorical_value(const FeatureValue& v,
                                     const std::string& name) {
  const std::string* s = std::get_if<std::string>(&v);
  if (s == nullptr) {
    throw SchemaError("feature " + name + " expects a category");
  }
  return *s;
}

}  // namespace

GbtModel gbt_train(std::span<const LabeledImpression> data,
                   const std::vector<FeatureSchema>& schema,
                   const GbtParams& params, std::vector<double>* training_loss) {
  if (data.empty()) throw ConfigError("gbt_train needs at least one sample");
  if (params.n_trees < 1) throw ConfigError("n_trees must be >= 1");
  if (!(params.learning_rate > 0.0) || params.learning_rate > 1.0) {
    throw ConfigError("learning_rate must be in (0, 1]");
  }
  if (params.max_depth < 0) throw ConfigError("max_depth must be >= 0");
  if (params.min_samples_leaf < 1) {
    throw ConfigError("min_samples_leaf must be >= 1");
  }
  if (params.max_bins < 2 || params.max_bins > 65535) {
    throw ConfigError("max_bins must be in [2, 65535]");
  }

  const std::size_t n = data.size();
  GbtModel model;
  model.learning_rate = params.learning_rate;
  model.max_depth = params.max_depth;
  model.min_samples_leaf = params.min_samples_leaf;

  std::vector<Column> columns;
  for (const auto& s : schema) {
    GbtFeature feature{s.name, s.kind, {}};
    Column col;
    col.kind = s.kind;
    col.bucket.resize(n);
    if (s.kind == FeatureKind::kContinuous) {
      std::vector<double> values(n);
      for (std::size_t i = 0; i < n; ++i) {
        values[i] = continuous_value(lookup(data[i].features, feature), s.name);
        if (std::isnan(values[i])) {
          throw SchemaError("feature " + s.name + " is NaN");
        }
      }
      std::vector<double> sorted = values;
      std::sort(sorted.begin(), sorted.end());
      sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
      // Every threshold is an observed value below the maximum.
      if (static_cast<int>(sorted.size()) <= params.max_bins) {
        col.thresholds.assign(sorted.begin(), sorted.end() - 1);
      } else {
        std::vector<double> all = values;
        std::sort(all.begin(), all.end());
        for (int k = 1; k < params.max_bins; ++k) {
          const double t = all[static_cast<std::size_t>(k) * n /
                               static_cast<std::size_t>(params.max_bins)];
          if (t >= sorted.back()) continue;
          if (!col.thresholds.empty() && t <= col.thresholds.back()) continue;
          col.thresholds.push_back(t);
        }
      }
      col.buckets = static_cast<int>(col.thresholds.size()) + 1;
      for (std::size_t i = 0; i < n; ++i) {
        col.bucket[i] = static_cast<std::uint16_t>(
            std::lower_bound(col.thresholds.begin(), col.thresholds.end(),
                             values[i]) -
            col.thresholds.begin());
      }
    } else {
      std::set<std::string> seen;
      for (std::size_t i = 0; i < n; ++i) {
        seen.insert(
            categorical_value(lookup(data[i].features, feature), s.name));
      }
      if (seen.size() > 65535) {
        throw ConfigError("too many categories for feature " + s.name);
      }
      feature.categories.assign(seen.begin(), seen.end());
      col.buckets = static_cast<int>(feature.categories.size());
      for (std::size_t i = 0; i < n; ++i) {
        col.bucket[i] = static_cast<std::uint16_t>(category_code(
            feature,
            categorical_value(lookup(data[i].features, feature), s.name)));
      }
    }
    model.features.push_back(std::move(feature));
    columns.push_back(std::move(col));
  }

  std::vector<double> y(n);
  double positives = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    check_label(data[i].label);
    y[i] = label_to_binary(data[i].label);
    positives += y[i];
  }
  const double rate = std::clamp(positives / static_cast<double>(n), 1e-6,
                                 1.0 - 1e-6);
  model.base_score = std::log(rate / (1.0 - rate));

  std::vector<double> score(n, model.base_score);
  std::vector<double> target(n);
  std::vector<double> prob(n);
  auto record_loss = [&] {
    if (training_loss == nullptr) return;
    for (std::size_t i = 0; i < n; ++i) prob[i] = sigmoid(score[i]);
    training_loss->push_back(eval_logloss(prob, y));
  };
  record_loss();

  std::vector<std::uint32_t> all_rows(n);
  std::iota(all_rows.begin(), all_rows.end(), 0u);
  TreeBuilder builder(columns, params, target);
  for (int t = 0; t < params.n_trees; ++t) {
    for (std::size_t i = 0; i < n; ++i) target[i] = y[i] - sigmoid(score[i]);
    RegressionTree tree = builder.build(all_rows);
    // Scores are updated via the training buckets, which route every row
    // exactly as the stored thresholds do.
    for (std::size_t i = 0; i < n; ++i) {
      int node = 0;
      while (!tree.nodes[node].is_leaf()) {
        const TreeNode& nd = tree.nodes[node];
        const Column& col = columns[nd.feature];
        bool left;
        if (col.kind == FeatureKind::kContinuous) {
          left = col.bucket[i] < col.thresholds.size() &&
                 col.thresholds[col.bucket[i]] <= nd.threshold;
        } else {
          left = std::binary_search(nd.left_categories.begin(),
                                    nd.left_categories.end(),
                                    static_cast<int>(col.bucket[i]));
        }
        node = left ? nd.left : nd.right;
      }
      score[i] += tree.nodes[node].value;
    }
    model.trees.push_back(std::move(tree));
    record_loss();
  }
  return model;
}

double gbt_raw_score(const GbtModel& model, const RawFeatures& features) {
  std::vector<double> values(model.features.size());
  std::vector<int> codes(model.features.size());
  for (std::size_t f = 0; f < model.features.size(); ++f) {
    const GbtFeature& feature = model.features[f];
    const FeatureValue& v = lookup(features, feature);
    if (feature.kind == FeatureKind::kContinuous) {
      values[f] = continuous_value(v, feature.name);
    } else {
      codes[f] = category_code(feature, categorical_value(v, feature.name));
    }
  }
  double score = model.base_score;
  for (const auto& tree : model.trees) {
    int node = 0;
    while (!tree.nodes[node].is_leaf()) {
      const TreeNode& nd = tree.nodes[node];
      bool left;
      if (model.features[nd.feature].kind == FeatureKind::kContinuous) {
        left = values[nd.feature] <= nd.threshold;
      } else {
        left = std::binary_search(nd.left_categories.begin(),
                                  nd.left_categories.end(), codes[nd.feature]);
      }
      node = left ? nd.left : nd.right;
    }
    score += tree.nodes[node].value;
  }
  return score;
}

double gbt_predict(const GbtModel& model, const RawFeatures& features) {
  return sigmoid(gbt_raw_score(model, features));
}

namespace {

struct PathState {
  std::vector<double> lo;
  std::vector<double> hi;
  std::vector<std::set<int>> allowed;
};

bool check_node(const RegressionTree& tree,
                const std::vector<GbtFeature>& features, int index,
                PathState state, std::vector<bool>& visited) {
  if (index < 0 || static_cast<std::size_t>(index) >= tree.nodes.size()) {
    return false;
  }
  if (visited[index]) return false;
  visited[index] = true;
  const TreeNode& node = tree.nodes[index];
  if (node.is_leaf()) return std::isfinite(node.value);
  if (static_cast<std::size_t>(node.feature) >= features.size()) return false;
  const int f = node.feature;
  PathState left = state;
  PathState right = std::move(state);
  if (features[f].kind == FeatureKind::kContinuous) {
    if (!(node.threshold > left.lo[f] && node.threshold < left.hi[f])) {
      return false;
    }
    left.hi[f] = node.threshold;
    right.lo[f] = node.threshold;
  } else {
    if (node.left_categories.empty()) return false;
    std::set<int> l;
    for (int c : node.left_categories) {
      if (left.allowed[f].count(c) == 0) return false;
      l.insert(c);
    }
    if (l.size() >= left.allowed[f].size()) return false;
    for (int c : l) right.allowed[f].erase(c);
    left.allowed[f] = std::move(l);
  }
  return check_node(tree, features, node.left, std::move(left), visited) &&
         check_node(tree, features, node.right, std::move(right), visited);
}

}  // namespace

bool tree_well_formed(const RegressionTree& tree,
                      const std::vector<GbtFeature>& features) {
  if (tree.nodes.empty()) return false;
  PathState state;
  const double inf = std::numeric_limits<double>::infinity();
  state.lo.assign(features.size(), -inf);
  state.hi.assign(features.size(), inf);
  for (const auto& f : features) {
    std::set<int> codes;
    // The trailing code stands for categories unseen in training.
    for (int c = 0; c <= static_cast<int>(f.categories.size()); ++c) {
      codes.insert(c);
    }
    state.allowed.push_back(std::move(codes));
  }
  std::vector<bool> visited(tree.nodes.size(), false);
  return check_node(tree, features, 0, std::move(state), visited);
}

}  // namespace genie
