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

#include "genie/binning.h"

#include <algorithm>
#include <cmath>

#include "genie/errors.h"

namespace genie {

int FeatureBins::bin_count() const {
  if (kind == FeatureKind::kCategorical) {
    return static_cast<int>(categories.size()) + 1;
  }
  return static_cast<int>(boundaries.size()) + 1;
}

int FeatureBins::bin_of(const FeatureValue& value) const {
  if (kind == FeatureKind::kContinuous) {
    const double* v = std::get_if<double>(&value);
    if (v == nullptr) {
      throw SchemaError("feature " + name + " expects a number");
    }
    if (std::isnan(*v)) throw SchemaError("feature " + name + " is NaN");
    return static_cast<int>(
        std::upper_bound(boundaries.begin(), boundaries.end(), *v) -
        boundaries.begin());
  }
  const std::string* s = std::get_if<std::string>(&value);
  if (s == nullptr) {
    throw SchemaError("feature " + name + " expects a category");
  }
  auto it = std::lower_bound(categories.begin(), categories.end(), *s);
  if (it != categories.end() && *it == *s) {
    return static_cast<int>(it - categories.begin());
  }
  return static_cast<int>(categories.size());
}

int BinningSpec::total_bins() const {
  int total = 0;
  for (const auto& f : features) total += f.bin_count();
  return total;
}

std::vector<int> BinningSpec::offsets() const {
  std::vector<int> out;
  out.reserve(features.size());
  int offset = 0;
  for (const auto& f : features) {
    out.push_back(offset);
    offset += f.bin_count();
  }
  return out;
}

int BinningSpec::feature_index(std::string_view name) const {
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (features[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

BinnedVector bin_features(const RawFeatures& impression,
                          const BinningSpec& spec) {
  for (const auto& [name, value] : impression) {
    if (spec.feature_index(name) < 0) {
      throw SchemaError("unknown feature: " + name);
    }
  }
  BinnedVector out;
  out.active_bins.reserve(spec.features.size());
  for (std::size_t j = 0; j < spec.features.size(); ++j) {
    const FeatureBins& f = spec.features[j];
    auto it = impression.find(f.name);
    if (it == impression.end()) {
      throw SchemaError("missing feature: " + f.name);
    }
    out.active_bins.emplace_back(static_cast<int>(j), f.bin_of(it->second));
  }
  return out;
}

BinningSpec fit_binning(std::span<const RawFeatures> data,
                        const std::vector<FeatureSchema>& schema,
                        int max_bins) {
  if (max_bins < 1) throw ConfigError("max_bins must be >= 1");
  BinningSpec spec;
  for (const auto& s : schema) {
    FeatureBins bins;
    bins.name = s.name;
    bins.kind = s.kind;
    if (s.kind == FeatureKind::kContinuous) {
      std::vector<double> values;
      values.reserve(data.size());
      for (const auto& row : data) {
        auto it = row.find(s.name);
        if (it == row.end()) continue;
        const double* v = std::get_if<double>(&it->second);
        if (v == nullptr) {
          throw SchemaError("feature " + s.name + " expects a number");
        }
        if (!std::isnan(*v)) values.push_back(*v);
      }
      std::sort(values.begin(), values.end());
      if (!values.empty()) {
        const std::size_t n = values.size();
        for (int k = 1; k < max_bins; ++k) {
          const double b = values[static_cast<std::size_t>(k) * n /
                                  static_cast<std::size_t>(max_bins)];
          if (b <= values.front()) continue;
          if (!bins.boundaries.empty() && b <= bins.boundaries.back()) continue;
          bins.boundaries.push_back(b);
        }
      }
    } else {
      for (const auto& row : data) {
        auto it = row.find(s.name);
        if (it == row.end()) continue;
        const std::string* v = std::get_if<std::string>(&it->second);
        if (v == nullptr) {
          throw SchemaError("feature " + s.name + " expects a category");
        }
        bins.categories.push_back(*v);
      }
      std::sort(bins.categories.begin(), bins.categories.end());
      bins.categories.erase(
          std::unique(bins.categories.begin(), bins.categories.end()),
          bins.categories.end());
    }
    spec.features.push_back(std::move(bins));
  }
  return spec;
}

}  // namespace genie
