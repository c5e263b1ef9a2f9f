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

#include "genie/grid_file.h"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "genie/errors.h"

namespace genie {

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw GenieError("cannot format double");
  return std::string(buf, ptr);
}

namespace {

double parse_double(const std::string& text, std::size_t line_no) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError("grid line " + std::to_string(line_no) +
                      ": bad number '" + text + "'");
  }
  return v;
}

}  // namespace

std::vector<GridPoint> read_grid(std::istream& in) {
  std::vector<GridPoint> grid;
  std::set<std::int64_t> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    std::istringstream tokens(line);
    std::string token;
    GridPoint point;
    bool has_id = false;
    bool any = false;
    while (tokens >> token) {
      any = true;
      const auto eq = token.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw ConfigError("grid line " + std::to_string(line_no) +
                          ": expected key=value, got '" + token + "'");
      }
      const std::string key = token.substr(0, eq);
      const std::string value = token.substr(eq + 1);
      if (key == "id") {
        point.id = static_cast<std::int64_t>(parse_double(value, line_no));
        has_id = true;
        continue;
      }
      const double v = parse_double(value, line_no);
      validate_knob(key, v);
      if (!point.setting.emplace(key, v).second) {
        throw ConfigError("grid line " + std::to_string(line_no) +
                          ": repeated knob '" + key + "'");
      }
    }
    if (!any) continue;
    if (!has_id) point.id = static_cast<std::int64_t>(grid.size()) + 1;
    if (!ids.insert(point.id).second) {
      throw ConfigError("grid line " + std::to_string(line_no) +
                        ": repeated id " + std::to_string(point.id));
    }
    grid.push_back(std::move(point));
  }
  if (in.bad()) throw IoError("failed reading grid");
  return grid;
}

std::vector<GridPoint> read_grid_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open grid file '" + path + "'");
  return read_grid(in);
}

void write_grid(std::ostream& out, const std::vector<GridPoint>& grid) {
  for (const auto& g : grid) {
    out << "id=" << g.id;
    for (const auto& [k, v] : g.setting) out << ' ' << k << '=' << format_double(v);
    out << '\n';
  }
}

void write_grid_file(const std::string& path,
                     const std::vector<GridPoint>& grid) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write grid file '" + path + "'");
  write_grid(out, grid);
}

}  // namespace genie
