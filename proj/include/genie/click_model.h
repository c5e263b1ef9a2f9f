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

#ifndef GENIE_CLICK_MODEL_H_
#define GENIE_CLICK_MODEL_H_

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "genie/auction.h"
#include "genie/features.h"
#include "genie/gbt.h"
#include "genie/probit.h"

namespace genie {

// Features of one placed ad: page position, block name, the ad's pclick and
// the query class.
const std::vector<FeatureSchema>& impression_schema();
RawFeatures impression_features(const AuctionData& data,
                                const Placement& placement, int position);

// One labeled impression per logged placement.
std::vector<LabeledImpression> impressions_from_logs(
    std::span<const AuctionData> records);

enum class ClickModelKind { kProbit, kGbt };

struct ClickModelSpec {
  ClickModelKind kind = ClickModelKind::kProbit;
  ProbitPrior prior;
  double beta = 1.0;
  int continuous_bins = 16;
  GbtParams gbt;
};

class ClickModel {
 public:
  static constexpr int kFormatVersion = 1;

  explicit ClickModel(ProbitModel model) : model_(std::move(model)) {}
  explicit ClickModel(GbtModel model) : model_(std::move(model)) {}

  ClickModelKind kind() const;
  double predict(const RawFeatures& features) const;

  const ProbitModel* probit() const { return std::get_if<ProbitModel>(&model_); }
  const GbtModel* gbt() const { return std::get_if<GbtModel>(&model_); }

  bool operator==(const ClickModel&) const = default;

 private:
  std::variant<ProbitModel, GbtModel> model_;
};

ClickModel train_click_model(std::span<const LabeledImpression> data,
                             const ClickModelSpec& spec);

// Position bins used by the probit model: 0, 1, 2, 3, 4, 5+.
FeatureBins position_bins();

// Versioned JSON with the binning spec embedded. Serializing, parsing and
// serializing again yields identical bytes.
nlohmann::json to_json(const ClickModel& model);
ClickModel click_model_from_json(const nlohmann::json& j);
std::string serialize_click_model(const ClickModel& model);
ClickModel parse_click_model(const std::string& text);

// {"kind": "gbt", "n_trees": 50, ...}; absent fields keep their defaults.
nlohmann::json to_json(const ClickModelSpec& spec);
ClickModelSpec click_model_spec_from_json(const nlohmann::json& j);

const char* to_string(ClickModelKind kind);
ClickModelKind click_model_kind_from_string(const std::string& s);

}  // namespace genie

#endif  // GENIE_CLICK_MODEL_H_
