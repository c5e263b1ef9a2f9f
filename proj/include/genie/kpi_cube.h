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

#ifndef GENIE_KPI_CUBE_H_
#define GENIE_KPI_CUBE_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "genie/auction.h"
#include "genie/policy.h"

namespace genie {

// Outcome of one request under one grid point, in floating point. Converted
// to fixed point when it enters a cube.
struct KpiRecord {
  std::int64_t grid_point_id = kBaselineGridId;
  std::int64_t query_class = 0;
  std::int64_t template_id = -1;
  int impressions = 0;
  int mainline_impressions = 0;
  double expected_clicks = 0.0;
  // Sum of click probability * cpc.
  double revenue = 0.0;
  // Set when the grid point's modifier failed; the counters are then empty.
  std::optional<std::string> error;

  bool operator==(const KpiRecord&) const = default;
};

// KPI of an allocation given a click probability per placement.
KpiRecord kpi_from_allocation(const PageAllocation& allocation,
                              const std::vector<double>& click_probabilities,
                              std::int64_t query_class);

inline constexpr std::int64_t kMicrosPerUnit = 1'000'000;
inline constexpr std::int64_t kNanosPerClick = 1'000'000'000;

// Additive counters of one cube cell. Revenue is stored in micro-currency and
// expected clicks in nano-clicks so that merging is exact integer addition.
struct CellCounters {
  std::int64_t requests = 0;
  std::int64_t impressions = 0;
  std::int64_t mainline_impressions = 0;
  std::int64_t expected_clicks_nanos = 0;
  std::int64_t revenue_micros = 0;

  double expected_clicks() const {
    return static_cast<double>(expected_clicks_nanos) / kNanosPerClick;
  }
  double revenue() const {
    return static_cast<double>(revenue_micros) / kMicrosPerUnit;
  }

  CellCounters& operator+=(const CellCounters& other);
  bool operator==(const CellCounters&) const = default;
};

inline constexpr std::string_view kDimGridPoint = "grid_point_id";
inline constexpr std::string_view kDimQueryClass = "query_class";
inline constexpr std::string_view kDimTemplate = "template_id";

const std::vector<std::string>& known_dimensions();
std::vector<std::string> default_dimensions();

// n-dimensionally keyed additive counters.
class DataCube {
 public:
  using Key = std::vector<std::int64_t>;

  DataCube() : DataCube(default_dimensions()) {}
  // Throws ConfigError for unknown or repeated dimension names.
  explicit DataCube(std::vector<std::string> dimensions);

  const std::vector<std::string>& dimensions() const { return dimensions_; }
  const std::map<Key, CellCounters>& cells() const { return cells_; }
  bool empty() const { return cells_.empty(); }

  // Throws SchemaError when the key length differs from the dimension count.
  void add(const Key& key, const CellCounters& counters);
  // Cell-wise sum. Throws SchemaError on dimension mismatch.
  void merge_from(const DataCube& other);
  // Index of a dimension, or -1.
  int dimension_index(std::string_view name) const;

  bool operator==(const DataCube&) const = default;

 private:
  std::vector<std::string> dimensions_;
  std::map<Key, CellCounters> cells_;
};

// Single-request cube for one (request, grid point) outcome. Records with an
// error contribute nothing.
DataCube request_cube(const KpiRecord& record,
                      const std::vector<std::string>& dimensions);

DataCube merge_cubes(const DataCube& a, const DataCube& b);

// Sums cells over every dimension not in `keep` (which keeps its order).
DataCube rollup(const DataCube& cube, const std::vector<std::string>& keep);

// Ratios derived from aggregated counters; nullopt marks an undefined metric
// (zero denominator).
struct KpiMetrics {
  std::optional<double> rpm;
  std::optional<double> cy;
  std::optional<double> iy;
  std::optional<double> mliy;
  std::optional<double> cpc;

  std::optional<double> get(std::string_view metric) const;
};

// (treatment - baseline) / baseline per metric.
using KpiDelta = KpiMetrics;

const std::vector<std::string>& metric_names();

KpiMetrics compute_metrics(const CellCounters& counters);
KpiDelta compute_delta(const KpiMetrics& treatment, const KpiMetrics& baseline);

// One report row. `cell` holds the non-grid dimension values; a roll-up row
// over all cells of a grid point has an empty `cell`.
struct ReportRow {
  std::int64_t grid_point_id = 0;
  std::vector<std::int64_t> cell;
  bool rollup = false;
  std::string setting;
  CellCounters counters;
  KpiMetrics metrics;
  KpiDelta delta;
};

struct KpiReport {
  std::vector<std::string> cell_dimensions;
  std::vector<ReportRow> rows;

  // Roll-up row of a grid point, or null.
  const ReportRow* total(std::int64_t grid_point_id) const;
};

// Builds per-grid-point metrics and deltas against `baseline_grid_id`.
// Each cell row is compared with the baseline row of the same cell; one
// roll-up row per grid point is compared with the baseline roll-up. Ratios
// are only ever computed from aggregated counters.
// Throws SchemaError when the cube lacks a grid_point_id dimension and
// ConfigError when the baseline grid point is absent.
KpiReport kpi_report(const DataCube& cube, std::int64_t baseline_grid_id,
                     const std::map<std::int64_t, std::string>& settings = {});

// Tab-separated report with a header line. Undefined values print as NA.
void write_report(std::ostream& out, const KpiReport& report);
// Reads a report written by write_report.
KpiReport read_report(std::istream& in);

// Cube plus the grid it was simulated under, as one JSON document.
struct CubeFile {
  DataCube cube;
  std::vector<GridPoint> grid;
};
void write_cube_file(std::ostream& out, const CubeFile& file);
CubeFile read_cube_file(std::istream& in);

}  // namespace genie

#endif  // GENIE_KPI_CUBE_H_
