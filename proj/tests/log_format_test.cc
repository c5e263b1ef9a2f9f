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

#include "genie/log_format.h"

#include <sstream>

#include <gtest/gtest.h>

#include "genie/errors.h"
#include "genie/importance_sampling.h"
#include "genie/marketplace.h"

namespace genie {
namespace {

std::string dataset_text(const LogDataset& logs) {
  std::ostringstream out;
  write_log_dataset(out, logs);
  return out.str();
}

class LogFormatTest : public ::testing::Test {
 protected:
  MarketplaceModel model_ = generate_marketplace(GeneratorConfig{}, 4);
};

TEST_F(LogFormatTest, DatasetRoundTrip) {
  const auto logs = generate_logs(model_, PolicyConfig({{"reserve_score", 0.1}}),
                                  100, DriftSpec{50, PolicyConfig()}, 3);
  std::istringstream in(dataset_text(logs));
  const LogDataset back = read_log_dataset(in);
  EXPECT_EQ(back, logs);
  EXPECT_EQ(dataset_text(back), dataset_text(logs));
}

TEST_F(LogFormatTest, RandomizedKnobsRoundTrip) {
  const auto spec = RandomizationSpec::single("reserve_score", 0.1, 0.02);
  const auto logs =
      generate_randomized_logs(model_, PolicyConfig(), spec, 50, 3);
  std::istringstream in(dataset_text(logs));
  const LogDataset back = read_log_dataset(in);
  EXPECT_EQ(back, logs);
  ASSERT_TRUE(back.randomization.has_value());
  EXPECT_EQ(*back.randomization, spec);
}

TEST_F(LogFormatTest, ConversionCountsTruncatedLine) {
  const auto logs = generate_logs(model_, PolicyConfig(), 100, std::nullopt, 3);
  std::string text = dataset_text(logs);
  // Truncate the last record.
  text.resize(text.size() - 40);
  text += "\n";
  std::istringstream in(text);
  auto [records, stats] = validate_and_convert(in);
  EXPECT_EQ(stats.total, 100u);
  EXPECT_EQ(stats.converted, 99u);
  EXPECT_DOUBLE_EQ(stats.conversion_success, 0.99);
  ASSERT_EQ(stats.rejections.size(), 1u);
  EXPECT_EQ(stats.rejections[0].line_number, 101u);
  EXPECT_EQ(records.size(), 99u);
}

TEST_F(LogFormatTest, EmptyStream) {
  std::istringstream in("");
  auto [records, stats] = validate_and_convert(in);
  EXPECT_TRUE(records.empty());
  EXPECT_EQ(stats.conversion_success, 1.0);
  EXPECT_TRUE(stats.zero_total);
}

TEST_F(LogFormatTest, RejectsBrokenInvariants) {
  const auto logs = generate_logs(model_, PolicyConfig(), 1, std::nullopt, 3);
  const nlohmann::json good = to_json(logs.records[0]);
  EXPECT_EQ(auction_data_from_json(good), logs.records[0]);

  auto broken = [&](auto mutate) {
    nlohmann::json j = good;
    mutate(j);
    return j;
  };
  EXPECT_THROW(auction_data_from_json(broken([](auto& j) { j["ads"][0]["bid"] = -1.0; })),
               SchemaError);
  EXPECT_THROW(auction_data_from_json(broken([](auto& j) { j["ads"][0]["pclick"] = 1.5; })),
               SchemaError);
  EXPECT_THROW(auction_data_from_json(broken([](auto& j) { j["ads"] = nlohmann::json::array(); })),
               SchemaError);
  EXPECT_THROW(auction_data_from_json(broken([](auto& j) { j["templates"] = nlohmann::json::array(); })),
               SchemaError);
  EXPECT_THROW(auction_data_from_json(broken([](auto& j) { j["clicks"].push_back(1); })),
               SchemaError);
  EXPECT_THROW(auction_data_from_json(broken([](auto& j) { j.erase("ads"); })),
               SchemaError);
}

TEST_F(LogFormatTest, DuplicateRequestIdRejected) {
  const auto logs = generate_logs(model_, PolicyConfig(), 2, std::nullopt, 3);
  const std::string line = to_json(logs.records[0]).dump();
  std::istringstream in(line + "\n" + line + "\n");
  auto [records, stats] = validate_and_convert(in);
  EXPECT_EQ(records.size(), 1u);
  EXPECT_EQ(stats.rejections.size(), 1u);
}

TEST_F(LogFormatTest, StrictReaderRejectsGarbage) {
  const auto logs = generate_logs(model_, PolicyConfig(), 3, std::nullopt, 3);
  std::istringstream in(dataset_text(logs) + "{not json\n");
  EXPECT_THROW(read_log_dataset(in), SchemaError);
}

TEST_F(LogFormatTest, MarketplaceAndGeneratorRoundTrip) {
  EXPECT_EQ(marketplace_from_json(to_json(model_)), model_);
  GeneratorConfig c;
  c.advertisers = 7;
  c.true_click.interaction = 0.3;
  const GeneratorConfig back = generator_config_from_json(to_json(c));
  EXPECT_EQ(back.advertisers, 7);
  EXPECT_EQ(back.true_click, c.true_click);
  EXPECT_THROW(generator_config_from_json({{"advertisrs", 3}}), ConfigError);
}

}  // namespace
}  // namespace genie
