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

#ifndef GENIE_BINNING_H_
#define GENIE_BINNING_H_

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "genie/features.h"

namespace genie {

// Bins of one feature. A continuous feature with boundaries b_0 < ... <
// b_{m-2} has m bins; value v lands in the number of boundaries <= v, so
// values beyond either end clamp to the edge bins. A categorical feature has
// one bin per known category plus a trailing bin for unseen values.
struct FeatureBins {
  std::string name;
  FeatureKind kind = FeatureKind::kContinuous;
  std::vector<double> boundaries;
  std::vector<std::string> categories;

  int bin_count() const;
  // Throws SchemaError when the value type does not match the kind.
  int bin_of(const FeatureValue& value) const;

  bool operator==(const FeatureBins&) const = default;
};

struct BinningSpec {
  std::vector<FeatureBins> features;

  int total_bins() const;
  // Flat index of the first bin of each feature.
  std::vector<int> offsets() const;
  int feature_index(std::string_view name) const;

  bool operator==(const BinningSpec&) const = default;
};

// Exactly one active (feature index, bin index) pair per feature, in
// feature order.
struct BinnedVector {
  std::vector<std::pair<int, int>> active_bins;
};

// Throws SchemaError when the impression has a feature the spec does not
// know, or lacks one the spec requires.
BinnedVector bin_features(const RawFeatures& impression,
                          const BinningSpec& spec);

// Equal-frequency boundaries for continuous features (at most `max_bins`
// bins, fewer when values repeat) and the sorted observed categories for
// categorical ones.
BinningSpec fit_binning(std::span<const RawFeatures> data,
                        const std::vector<FeatureSchema>& schema,
                        int max_bins = 16);

}  // namespace genie

#endif  // GENIE_BINNING_H_
