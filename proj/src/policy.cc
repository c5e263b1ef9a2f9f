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

#include "genie/policy.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "genie/errors.h"
#include "genie/grid_file.h"

namespace genie {

const std::vector<KnobSpec>& knob_registry() {
  static const std::vector<KnobSpec> kRegistry = {
      {std::string(kBidMultiplier), 1.0, 1e-6, 1e3,
       "Scales every advertiser bid."},
      {std::string(kReserveScore), 0.0, 0.0, 1e6,
       "Minimum rank score to be shown; pricing floor without a runner-up."},
      {std::string(kQualityExponent), 1.0, 1e-3, 10.0,
       "Quality policy: quality = pclick ^ exponent."},
      {std::string(kMainlineCapacity), 4.0, 0.0, 16.0,
       "Caps the slot count of mainline blocks."},
      {std::string(kMainlineMinPclick), 0.0, 0.0, 1.0,
       "Minimum pclick for mainline eligibility."},
  };
  return kRegistry;
}

const KnobSpec* find_knob(std::string_view name) {
  for (const auto& k : knob_registry()) {
    if (k.name == name) return &k;
  }
  return nullptr;
}

void validate_knob(std::string_view name, double value) {
  const KnobSpec* spec = find_knob(name);
  if (spec == nullptr) {
    throw ConfigError("unknown knob '" + std::string(name) + "'");
  }
  if (!std::isfinite(value) || value < spec->min_value ||
      value > spec->max_value) {
    std::ostringstream msg;
    msg << "knob '" << name << "' value " << value << " outside ["
        << spec->min_value << ", " << spec->max_value << "]";
    throw ConfigError(msg.str());
  }
}

PolicyConfig::PolicyConfig(std::map<std::string, double> knobs,
                           int schema_version)
    : schema_version_(schema_version) {
  if (schema_version < 1 || schema_version > kSchemaVersion) {
    throw ConfigError("unsupported policy schema version " +
                      std::to_string(schema_version));
  }
  for (const auto& [name, value] : knobs) validate_knob(name, value);
  knobs_ = std::move(knobs);
}

double PolicyConfig::get(std::string_view name) const {
  if (auto it = knobs_.find(std::string(name)); it != knobs_.end()) {
    return it->second;
  }
  const KnobSpec* spec = find_knob(name);
  if (spec == nullptr) {
    throw ConfigError("unknown knob '" + std::string(name) + "'");
  }
  return spec->default_value;
}

bool PolicyConfig::has(std::string_view name) const {
  return knobs_.count(std::string(name)) > 0;
}

void PolicyConfig::set(std::string_view name, double value) {
  validate_knob(name, value);
  knobs_[std::string(name)] = value;
}

PolicyConfig PolicyConfig::resolved() const {
  PolicyConfig out = *this;
  for (const auto& k : knob_registry()) {
    out.knobs_.try_emplace(k.name, k.default_value);
  }
  return out;
}

PolicyConfig PolicyConfig::with(
    const std::map<std::string, double>& overrides) const {
  PolicyConfig out = *this;
  for (const auto& [name, value] : overrides) out.set(name, value);
  return out;
}

std::string format_setting(const std::map<std::string, double>& setting) {
  std::string out;
  for (const auto& [name, value] : setting) {
    if (!out.empty()) out += ',';
    out += name;
    out += '=';
    out += format_double(value);
  }
  return out;
}

}  // namespace genie
