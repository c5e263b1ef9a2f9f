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

#include "genie/kpi_cube.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "genie/errors.h"
#include "genie/grid_file.h"

namespace genie {

KpiRecord kpi_from_allocation(const PageAllocation& allocation,
                              const std::vector<double>& click_probabilities,
                              std::int64_t query_class) {
  if (click_probabilities.size() != allocation.placements.size()) {
    throw SchemaError("one click probability per placement expected");
  }
  KpiRecord kpi;
  kpi.query_class = query_class;
  kpi.template_id = allocation.template_id;
  for (std::size_t i = 0; i < allocation.placements.size(); ++i) {
    const Placement& p = allocation.placements[i];
    ++kpi.impressions;
    if (p.is_mainline()) ++kpi.mainline_impressions;
    kpi.expected_clicks += click_probabilities[i];
    kpi.revenue += click_probabilities[i] * p.cpc;
  }
  return kpi;
}

CellCounters& CellCounters::operator+=(const CellCounters& other) {
  requests += other.requests;
  impressions += other.impressions;
  mainline_impressions += other.mainline_impressions;
  expected_clicks_nanos += other.expected_clicks_nanos;
  revenue_micros += other.revenue_micros;
  return *this;
}

const std::vector<std::string>& known_dimensions() {
  static const std::vector<std::string> kDims = {
      std::string(kDimGridPoint), std::string(kDimQueryClass),
      std::string(kDimTemplate)};
  return kDims;
}

std::vector<std::string> default_dimensions() {
  return {std::string(kDimGridPoint), std::string(kDimQueryClass)};
}

DataCube::DataCube(std::vector<std::string> dimensions)
    : dimensions_(std::move(dimensions)) {
  std::set<std::string> seen;
  for (const auto& d : dimensions_) {
    const auto& known = known_dimensions();
    if (std::find(known.begin(), known.end(), d) == known.end()) {
      throw ConfigError("unknown cube dimension '" + d + "'");
    }
    if (!seen.insert(d).second) {
      throw ConfigError("repeated cube dimension '" + d + "'");
    }
  }
}

void DataCube::add(const Key& key, const CellCounters& counters) {
  if (key.size() != dimensions_.size()) {
    throw SchemaError("cube key has " + std::to_string(key.size()) +
                      " components, expected " +
                      std::to_string(dimensions_.size()));
  }
  cells_[key] += counters;
}

void DataCube::merge_from(const DataCube& other) {
  if (other.dimensions_ != dimensions_) {
    throw SchemaError("cannot merge cubes with different dimensions");
  }
  for (const auto& [key, counters] : other.cells_) cells_[key] += counters;
}

int DataCube::dimension_index(std::string_view name) const {
  for (std::size_t i = 0; i < dimensions_.size(); ++i) {
    if (dimensions_[i] == name) return static_cast<int>(i);
  }
  return -1;
}

DataCube request_cube(const KpiRecord& record,
                      const std::vector<std::string>& dimensions) {
  DataCube cube(dimensions);
  if (record.error) return cube;
  DataCube::Key key;
  key.reserve(dimensions.size());
  for (const auto& d : dimensions) {
    if (d == kDimGridPoint) {
      key.push_back(record.grid_point_id);
    } else if (d == kDimQueryClass) {
      key.push_back(record.query_class);
    } else {
      key.push_back(record.template_id);
    }
  }
  CellCounters c;
  c.requests = 1;
  c.impressions = record.impressions;
  c.mainline_impressions = record.mainline_impressions;
  c.expected_clicks_nanos =
      std::llround(record.expected_clicks * static_cast<double>(kNanosPerClick));
  c.revenue_micros =
      std::llround(record.revenue * static_cast<double>(kMicrosPerUnit));
  cube.add(key, c);
  return cube;
}

DataCube merge_cubes(const DataCube& a, const DataCube& b) {
  DataCube out = a;
  out.merge_from(b);
  return out;
}

DataCube rollup(const DataCube& cube, const std::vector<std::string>& keep) {
  DataCube out(keep);
  std::vector<int> idx;
  for (const auto& d : keep) {
    const int i = cube.dimension_index(d);
    if (i < 0) throw SchemaError("cube has no dimension '" + d + "'");
    idx.push_back(i);
  }
  for (const auto& [key, counters] : cube.cells()) {
    DataCube::Key k;
    k.reserve(idx.size());
    for (int i : idx) k.push_back(key[i]);
    out.add(k, counters);
  }
  return out;
}

std::optional<double> KpiMetrics::get(std::string_view metric) const {
  if (metric == "rpm") return rpm;
  if (metric == "cy") return cy;
  if (metric == "iy") return iy;
  if (metric == "mliy") return mliy;
  if (metric == "cpc") return cpc;
  throw ConfigError("unknown metric '" + std::string(metric) + "'");
}

const std::vector<std::string>& metric_names() {
  static const std::vector<std::string> kNames = {"rpm", "cy", "iy", "mliy",
                                                  "cpc"};
  return kNames;
}

KpiMetrics compute_metrics(const CellCounters& c) {
  KpiMetrics m;
  if (c.requests > 0) {
    const double n = static_cast<double>(c.requests);
    m.rpm = 1000.0 * c.revenue() / n;
    m.cy = c.expected_clicks() / n;
    m.iy = static_cast<double>(c.impressions) / n;
    m.mliy = static_cast<double>(c.mainline_impressions) / n;
  }
  if (c.expected_clicks_nanos > 0) m.cpc = c.revenue() / c.expected_clicks();
  return m;
}

namespace {

std::optional<double> relative(std::optional<double> t,
                               std::optional<double> b) {
  if (!t || !b || *b == 0.0) return std::nullopt;
  return (*t - *b) / *b;
}

}  // namespace

KpiDelta compute_delta(const KpiMetrics& t, const KpiMetrics& b) {
  KpiDelta d;
  d.rpm = relative(t.rpm, b.rpm);
  d.cy = relative(t.cy, b.cy);
  d.iy = relative(t.iy, b.iy);
  d.mliy = relative(t.mliy, b.mliy);
  d.cpc = relative(t.cpc, b.cpc);
  return d;
}

const ReportRow* KpiReport::total(std::int64_t grid_point_id) const {
  for (const auto& r : rows) {
    if (r.rollup && r.grid_point_id == grid_point_id) return &r;
  }
  return nullptr;
}

KpiReport kpi_report(const DataCube& cube, std::int64_t baseline_grid_id,
                     const std::map<std::int64_t, std::string>& settings) {
  const int gi = cube.dimension_index(kDimGridPoint);
  if (gi < 0) throw SchemaError("report needs a grid_point_id dimension");

  KpiReport report;
  for (std::size_t i = 0; i < cube.dimensions().size(); ++i) {
    if (static_cast<int>(i) != gi) {
      report.cell_dimensions.push_back(cube.dimensions()[i]);
    }
  }

  // grid id -> (cell key -> counters), plus the per-grid total.
  std::map<std::int64_t, std::map<std::vector<std::int64_t>, CellCounters>>
      by_grid;
  std::map<std::int64_t, CellCounters> totals;
  for (const auto& [key, counters] : cube.cells()) {
    std::vector<std::int64_t> cell;
    for (std::size_t i = 0; i < key.size(); ++i) {
      if (static_cast<int>(i) != gi) cell.push_back(key[i]);
    }
    by_grid[key[gi]][cell] += counters;
    totals[key[gi]] += counters;
  }
  if (!by_grid.count(baseline_grid_id)) {
    throw ConfigError("baseline grid point " +
                      std::to_string(baseline_grid_id) + " not in cube");
  }
  const auto& base_cells = by_grid.at(baseline_grid_id);
  const KpiMetrics base_total = compute_metrics(totals.at(baseline_grid_id));

  for (const auto& [grid_id, cells] : by_grid) {
    std::string setting;
    if (auto it = settings.find(grid_id); it != settings.end()) {
      setting = it->second;
    }
    ReportRow total;
    total.grid_point_id = grid_id;
    total.rollup = true;
    total.setting = setting;
    total.counters = totals.at(grid_id);
    total.metrics = compute_metrics(total.counters);
    total.delta = compute_delta(total.metrics, base_total);
    report.rows.push_back(std::move(total));

    for (const auto& [cell, counters] : cells) {
      ReportRow row;
      row.grid_point_id = grid_id;
      row.cell = cell;
      row.setting = setting;
      row.counters = counters;
      row.metrics = compute_metrics(counters);
      if (auto b = base_cells.find(cell); b != base_cells.end()) {
        row.delta = compute_delta(row.metrics, compute_metrics(b->second));
      }
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

namespace {

std::string fixed_point(std::int64_t value, std::int64_t scale, int digits) {
  const bool negative = value < 0;
  const std::int64_t mag = negative ? -value : value;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s%lld.%0*lld", negative ? "-" : "",
                static_cast<long long>(mag / scale), digits,
                static_cast<long long>(mag % scale));
  return buf;
}

std::int64_t parse_fixed_point(const std::string& text, std::int64_t scale) {
  const bool negative = !text.empty() && text[0] == '-';
  const std::string body = negative ? text.substr(1) : text;
  const auto dot = body.find('.');
  std::int64_t whole = std::stoll(body.substr(0, dot));
  std::int64_t frac = 0;
  if (dot != std::string::npos) {
    std::string f = body.substr(dot + 1);
    std::int64_t s = scale;
    for (char c : f) {
      s /= 10;
      frac += (c - '0') * s;
    }
  }
  const std::int64_t v = whole * scale + frac;
  return negative ? -v : v;
}

std::string metric_text(const std::optional<double>& v) {
  return v ? format_double(*v) : "NA";
}

std::optional<double> parse_metric(const std::string& s) {
  if (s == "NA") return std::nullopt;
  return std::stod(s);
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find('\t', start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

const std::vector<std::string>& counter_columns() {
  static const std::vector<std::string> kCols = {
      "requests", "impressions", "mainline_impressions", "expected_clicks",
      "revenue"};
  return kCols;
}

}  // namespace

void write_report(std::ostream& out, const KpiReport& report) {
  out << kDimGridPoint;
  for (const auto& d : report.cell_dimensions) out << '\t' << d;
  out << "\tsetting";
  for (const auto& c : counter_columns()) out << '\t' << c;
  for (const auto& m : metric_names()) out << '\t' << m;
  for (const auto& m : metric_names()) out << "\td_" << m;
  out << '\n';
  for (const auto& row : report.rows) {
    out << row.grid_point_id;
    for (std::size_t i = 0; i < report.cell_dimensions.size(); ++i) {
      out << '\t';
      if (row.rollup) {
        out << '*';
      } else {
        out << row.cell[i];
      }
    }
    out << '\t' << (row.setting.empty() ? "-" : row.setting);
    out << '\t' << row.counters.requests << '\t' << row.counters.impressions
        << '\t' << row.counters.mainline_impressions << '\t'
        << fixed_point(row.counters.expected_clicks_nanos, kNanosPerClick, 9)
        << '\t' << fixed_point(row.counters.revenue_micros, kMicrosPerUnit, 6);
    for (const auto& m : metric_names()) out << '\t' << metric_text(row.metrics.get(m));
    for (const auto& m : metric_names()) out << '\t' << metric_text(row.delta.get(m));
    out << '\n';
  }
}

KpiReport read_report(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw SchemaError("empty report");
  const auto header = split_tabs(line);
  if (header.empty() || header[0] != kDimGridPoint) {
    throw SchemaError("report header must start with grid_point_id");
  }
  KpiReport report;
  std::size_t col = 1;
  while (col < header.size() && header[col] != "setting") {
    report.cell_dimensions.push_back(header[col++]);
  }
  const std::size_t expected = col + 1 + counter_columns().size() +
                               2 * metric_names().size();
  if (header.size() != expected) throw SchemaError("unexpected report columns");

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_tabs(line);
    if (f.size() != expected) {
      throw SchemaError("report line " + std::to_string(line_no) +
                        " has " + std::to_string(f.size()) + " fields");
    }
    try {
      ReportRow row;
      row.grid_point_id = std::stoll(f[0]);
      std::size_t i = 1;
      row.rollup = report.cell_dimensions.empty() ? true : f[1] == "*";
      for (std::size_t d = 0; d < report.cell_dimensions.size(); ++d, ++i) {
        if (!row.rollup) row.cell.push_back(std::stoll(f[i]));
      }
      row.setting = f[i] == "-" ? "" : f[i];
      ++i;
      row.counters.requests = std::stoll(f[i++]);
      row.counters.impressions = std::stoll(f[i++]);
      row.counters.mainline_impressions = std::stoll(f[i++]);
      row.counters.expected_clicks_nanos = parse_fixed_point(f[i++], kNanosPerClick);
      row.counters.revenue_micros = parse_fixed_point(f[i++], kMicrosPerUnit);
      row.metrics.rpm = parse_metric(f[i++]);
      row.metrics.cy = parse_metric(f[i++]);
      row.metrics.iy = parse_metric(f[i++]);
      row.metrics.mliy = parse_metric(f[i++]);
      row.metrics.cpc = parse_metric(f[i++]);
      row.delta.rpm = parse_metric(f[i++]);
      row.delta.cy = parse_metric(f[i++]);
      row.delta.iy = parse_metric(f[i++]);
      row.delta.mliy = parse_metric(f[i++]);
      row.delta.cpc = parse_metric(f[i++]);
      report.rows.push_back(std::move(row));
    } catch (const std::logic_error& e) {
      throw SchemaError("report line " + std::to_string(line_no) + ": " +
                        e.what());
    }
  }
  return report;
}

void write_cube_file(std::ostream& out, const CubeFile& file) {
  nlohmann::json j;
  j["format"] = "genie-cube";
  j["version"] = 1;
  j["dimensions"] = file.cube.dimensions();
  nlohmann::json grid = nlohmann::json::array();
  for (const auto& g : file.grid) {
    grid.push_back({{"id", g.id}, {"setting", g.setting}});
  }
  j["grid"] = std::move(grid);
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& [key, c] : file.cube.cells()) {
    cells.push_back({{"key", key},
                     {"requests", c.requests},
                     {"impressions", c.impressions},
                     {"mainline_impressions", c.mainline_impressions},
                     {"expected_clicks_nanos", c.expected_clicks_nanos},
                     {"revenue_micros", c.revenue_micros}});
  }
  j["cells"] = std::move(cells);
  out << j.dump() << '\n';
}

CubeFile read_cube_file(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
    if (j.at("format") != "genie-cube" || j.at("version") != 1) {
      throw SchemaError("not a version-1 cube file");
    }
    CubeFile file{DataCube(j.at("dimensions").get<std::vector<std::string>>()),
                  {}};
    for (const auto& g : j.at("grid")) {
      file.grid.push_back(
          {g.at("id").get<std::int64_t>(),
           g.at("setting").get<std::map<std::string, double>>()});
    }
    for (const auto& c : j.at("cells")) {
      CellCounters counters;
      counters.requests = c.at("requests").get<std::int64_t>();
      counters.impressions = c.at("impressions").get<std::int64_t>();
      counters.mainline_impressions =
          c.at("mainline_impressions").get<std::int64_t>();
      counters.expected_clicks_nanos =
          c.at("expected_clicks_nanos").get<std::int64_t>();
      counters.revenue_micros = c.at("revenue_micros").get<std::int64_t>();
      file.cube.add(c.at("key").get<DataCube::Key>(), counters);
    }
    return file;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed cube file: ") + e.what());
  }
}

}  // namespace genie
