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

#ifndef GENIE_LOG_FORMAT_H_
#define GENIE_LOG_FORMAT_H_

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "genie/auction.h"
#include "genie/marketplace.h"
#include "genie/policy.h"

namespace genie {

// Log files hold one JSON object per line, one AuctionData each, with named
// fields so that a truncated line fails to parse on its own. Lines starting
// with '#' are comments; the first may carry dataset metadata as
// "#meta <json>".

nlohmann::json to_json(const PolicyConfig& policy);
PolicyConfig policy_from_json(const nlohmann::json& j);

nlohmann::json to_json(const PageTemplate& t);
PageTemplate template_from_json(const nlohmann::json& j);

nlohmann::json to_json(const PageAllocation& allocation);
PageAllocation allocation_from_json(const nlohmann::json& j);

nlohmann::json to_json(const AuctionData& data);
// Throws SchemaError when a field is missing or has the wrong type, or when
// a record invariant is broken.
AuctionData auction_data_from_json(const nlohmann::json& j);

std::string format_log_line(const AuctionData& data);

nlohmann::json to_json(const GeneratorConfig& config);
GeneratorConfig generator_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const MarketplaceModel& model);
MarketplaceModel marketplace_from_json(const nlohmann::json& j);

struct Rejection {
  std::size_t line_number = 0;  // 1-based
  std::string reason;
};

struct ConversionStats {
  std::size_t total = 0;
  std::size_t converted = 0;
  std::vector<Rejection> rejections;
  // converted / total; 1.0 with zero_total set for an empty stream.
  double conversion_success = 1.0;
  bool zero_total = false;
};

// Parses and validates log lines. Malformed lines are counted and skipped.
// Throws IoError when the stream cannot be read.
std::pair<std::vector<AuctionData>, ConversionStats> validate_and_convert(
    std::istream& in);

void write_log_dataset(std::ostream& out, const LogDataset& dataset);
// Strict reader: metadata line plus records; any malformed line throws
// SchemaError.
LogDataset read_log_dataset(std::istream& in);

void write_log_file(const std::string& path, const LogDataset& dataset);
LogDataset read_log_file(const std::string& path);

// Reads a whole file; IoError when it cannot be opened.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace genie

#endif  // GENIE_LOG_FORMAT_H_
