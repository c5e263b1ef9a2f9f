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

#ifndef GENIE_FEATURES_H_
#define GENIE_FEATURES_H_

#include <map>
#include <string>
#include <variant>
#include <vector>

namespace genie {

using FeatureValue = std::variant<double, std::string>;
using RawFeatures = std::map<std::string, FeatureValue>;

enum class FeatureKind { kContinuous, kCategorical };

struct FeatureSchema {
  std::string name;
  FeatureKind kind = FeatureKind::kContinuous;

  bool operator==(const FeatureSchema&) const = default;
};

// One impression with its click outcome. Labels are +1 (click) or -1.
struct LabeledImpression {
  RawFeatures features;
  int label = -1;
};

// Throws SchemaError unless label is -1 or +1.
void check_label(int label);

inline double label_to_binary(int label) { return label > 0 ? 1.0 : 0.0; }

const char* to_string(FeatureKind kind);
FeatureKind feature_kind_from_string(const std::string& s);

}  // namespace genie

#endif  // GENIE_FEATURES_H_
