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

#ifndef GENIE_POLICY_H_
#define GENIE_POLICY_H_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace genie {

// A tunable system parameter. New behaviour is always introduced behind a new
// knob whose default reproduces the old behaviour, so old logs keep replaying.
struct KnobSpec {
  std::string name;
  double default_value;
  double min_value;
  double max_value;
  std::string description;
};

inline constexpr std::string_view kBidMultiplier = "bid_multiplier";
inline constexpr std::string_view kReserveScore = "reserve_score";
inline constexpr std::string_view kQualityExponent = "quality_exponent";
inline constexpr std::string_view kMainlineCapacity = "mainline_capacity";
inline constexpr std::string_view kMainlineMinPclick = "mainline_min_pclick";

const std::vector<KnobSpec>& knob_registry();

// Null when the knob is not registered.
const KnobSpec* find_knob(std::string_view name);

// Throws ConfigError for unregistered names or out-of-range values.
void validate_knob(std::string_view name, double value);

// The set of active policy settings, keyed by knob name. Absent knobs take
// their registry default.
class PolicyConfig {
 public:
  static constexpr int kSchemaVersion = 1;

  PolicyConfig() = default;
  // Validates every entry against the registry.
  explicit PolicyConfig(std::map<std::string, double> knobs,
                        int schema_version = kSchemaVersion);

  double get(std::string_view name) const;
  bool has(std::string_view name) const;
  void set(std::string_view name, double value);

  // Every registered knob, explicit or defaulted.
  PolicyConfig resolved() const;
  // This policy with `overrides` applied on top.
  PolicyConfig with(const std::map<std::string, double>& overrides) const;

  const std::map<std::string, double>& knobs() const { return knobs_; }
  int schema_version() const { return schema_version_; }

  bool operator==(const PolicyConfig&) const = default;

 private:
  std::map<std::string, double> knobs_;
  int schema_version_ = kSchemaVersion;
};

// One counterfactual assignment of knob values. Id 0 is reserved for the
// unmodified baseline and always has an empty setting.
struct GridPoint {
  std::int64_t id = 0;
  std::map<std::string, double> setting;

  bool operator==(const GridPoint&) const = default;
};

inline constexpr std::int64_t kBaselineGridId = 0;

// "k=v,k=v" with keys in sorted order; empty string for no knobs.
std::string format_setting(const std::map<std::string, double>& setting);

}  // namespace genie

#endif  // GENIE_POLICY_H_
