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

#include "genie/features.h"

#include "genie/errors.h"

namespace genie {

void check_label(int label) {
  if (label != -1 && label != 1) {
    throw SchemaError("label must be -1 or +1, got " + std::to_string(label));
  }
}

const char* to_string(FeatureKind kind) {
  return kind == FeatureKind::kCategorical ? "categorical" : "continuous";
}

FeatureKind feature_kind_from_string(const std::string& s) {
  if (s == "continuous") return FeatureKind::kContinuous;
  if (s == "categorical") return FeatureKind::kCategorical;
  throw SchemaError("unknown feature kind: " + s);
}

}  // namespace genie
