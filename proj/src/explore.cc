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

#include "genie/explore.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "genie/errors.h"
#include "genie/kpi_cube.h"

namespace genie {

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

void check_metric(const std::string& metric) {
  const auto& names = metric_names();
  if (std::find(names.begin(), names.end(), metric) == names.end()) {
    throw ConfigError("unknown metric: " + metric);
  }
}

double parse_number(const std::string& s, const std::string& context) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad number in " + context + ": " + s);
  }
}

}  // namespace

bool Constraint::satisfied(double value) const {
  if (std::isnan(value)) return false;
  const double v = absolute ? std::abs(value) : value;
  return v >= lower && v <= upper;
}

Constraint Constraint::parse(const std::string& text) {
  const std::string t = trim(text);
  Constraint c;
  std::size_t op = t.find(">=");
  bool upper = false;
  if (op == std::string::npos) {
    op = t.find("<=");
    upper = true;
  }
  if (op == std::string::npos) {
    throw ConfigError("constraint needs >= or <=: " + text);
  }
  std::string lhs = trim(t.substr(0, op));
  const double bound = parse_number(trim(t.substr(op + 2)), text);
  if (lhs.size() >= 2 && lhs.front() == '|' && lhs.back() == '|') {
    c.absolute = true;
    lhs = trim(lhs.substr(1, lhs.size() - 2));
    if (!upper) throw ConfigError("absolute constraints take <=: " + text);
  }
  check_metric(lhs);
  c.metric = lhs;
  if (upper) {
    c.upper = bound;
  } else {
    c.lower = bound;
  }
  return c;
}

Objective Objective::parse(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    parts.push_back(trim(text.substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  const std::string& head = parts.front();
  const std::size_t colon = head.find(':');
  if (colon == std::string::npos) {
    throw ConfigError("objective must look like max:<metric>: " + text);
  }
  Objective o;
  const std::string dir = trim(head.substr(0, colon));
  if (dir == "max") {
    o.maximize = true;
  } else if (dir == "min") {
    o.maximize = false;
  } else {
    throw ConfigError("objective direction must be max or min: " + text);
  }
  o.metric = trim(head.substr(colon + 1));
  check_metric(o.metric);
  for (std::size_t i = 1; i < parts.size(); ++i) {
    if (!parts[i].empty()) o.constraints.push_back(Constraint::parse(parts[i]));
  }
  return o;
}

std::vector<std::string> Objective::metrics() const {
  std::vector<std::string> out = {metric};
  for (const auto& c : constraints) {
    if (std::find(out.begin(), out.end(), c.metric) == out.end()) {
      out.push_back(c.metric);
    }
  }
  return out;
}

void ExploreParams::validate() const {
  if (batches < 0) throw ConfigError("batches must be >= 0");
  if (population < 1) throw ConfigError("population must be >= 1");
  if (top_k < 1 || top_k > population) {
    throw ConfigError("top_k must be in [1, population]");
  }
  if (ranges.empty()) throw ConfigError("explore needs at least one range");
  for (const auto& [lo, hi] : ranges) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi) {
      throw ConfigError("range minimum must not exceed its maximum");
    }
  }
}

std::vector<std::vector<double>> explore(
    const std::vector<std::vector<double>>& current, int population,
    const std::vector<Range>& ranges, Rng& rng) {
  if (current.empty()) throw ConfigError("explore needs a non-empty set");
  const std::size_t dims = ranges.size();
  std::vector<std::vector<double>> out;
  out.reserve(population);
  std::vector<std::size_t> order(dims);
  for (int p = 0; p < population; ++p) {
    std::vector<double> x = current[rng.index(current.size())];
    if (x.size() != dims) throw SchemaError("candidate dimension mismatch");
    const std::size_t subset = 1 + rng.index(dims);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t k = 0; k < subset; ++k) {
      std::swap(order[k], order[k + rng.index(dims - k)]);
      const auto [lo, hi] = ranges[order[k]];
      x[order[k]] = rng.uniform(lo, hi);
    }
    out.push_back(std::move(x));
  }
  return out;
}

namespace {

struct Scored {
  Candidate candidate;
  bool feasible = false;
  double score = 0.0;  // objective in maximize sense
};

bool in_ranges(const std::vector<double>& x, const std::vector<Range>& ranges) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] >= ranges[i].first && x[i] <= ranges[i].second)) return false;
  }
  return true;
}

Scored score(Candidate c, const ExploreParams& params) {
  Scored s;
  const Objective& o = params.objective;
  const double v = c.predicted.at(o.metric);
  s.score = o.maximize ? v : -v;
  s.feasible = in_ranges(c.x, params.ranges) && std::isfinite(v);
  for (const auto& con : o.constraints) {
    s.feasible = s.feasible && con.satisfied(c.predicted.at(con.metric));
  }
  s.candidate = std::move(c);
  return s;
}

bool better(const Scored& a, const Scored& b) {
  if (a.feasible != b.feasible) return a.feasible;
  if (a.score != b.score) return a.score > b.score;
  return a.candidate.creation_index < b.candidate.creation_index;
}

double best_feasible(const std::vector<Scored>& set, bool maximize) {
  for (const auto& s : set) {
    if (s.feasible) return maximize ? s.score : -s.score;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

OptimizeResult optimize(const std::vector<std::vector<double>>& x,
                        const std::map<std::string, std::vector<double>>& deltas,
                        const RegressionSpec& surrogate,
                        const ExploreParams& params) {
  params.validate();
  if (x.empty()) throw ConfigError("optimize needs at least one point");
  for (const auto& row : x) {
    if (row.size() != params.ranges.size()) {
      throw SchemaError("grid points and ranges differ in dimension");
    }
  }
  OptimizeResult result;
  const auto metrics = params.objective.metrics();
  for (const auto& m : metrics) {
    auto it = deltas.find(m);
    if (it == deltas.end()) throw SchemaError("no observed deltas for " + m);
    if (it->second.size() != x.size()) {
      throw SchemaError("observed " + m + " deltas do not match the points");
    }
    result.surrogates.emplace(m, fit_regression(x, it->second, surrogate, m));
  }

  std::size_t next_index = 0;
  std::vector<Scored> selected;
  for (std::size_t i = 0; i < x.size(); ++i) {
    Candidate c;
    c.x = x[i];
    for (const auto& m : metrics) c.predicted[m] = deltas.at(m)[i];
    c.creation_index = next_index++;
    selected.push_back(score(std::move(c), params));
  }
  std::stable_sort(selected.begin(), selected.end(), better);
  if (selected.size() > static_cast<std::size_t>(params.population)) {
    selected.resize(params.population);
  }
  result.best_objective.push_back(
      best_feasible(selected, params.objective.maximize));

  Rng rng(params.seed, "explore");
  std::vector<std::vector<double>> parents;
  for (int b = 0; b < params.batches; ++b) {
    parents.clear();
    for (const auto& s : selected) parents.push_back(s.candidate.x);
    for (auto& cx : explore(parents, params.population, params.ranges, rng)) {
      Candidate c;
      for (const auto& m : metrics) {
        c.predicted[m] = result.surrogates.at(m).predict(cx);
      }
      c.x = std::move(cx);
      c.creation_index = next_index++;
      selected.push_back(score(std::move(c), params));
    }
    std::stable_sort(selected.begin(), selected.end(), better);
    selected.resize(std::min<std::size_t>(selected.size(), params.population));
    result.best_objective.push_back(
        best_feasible(selected, params.objective.maximize));
  }

  for (const auto& s : selected) {
    if (!s.feasible) break;
    result.top.push_back(s.candidate);
    if (result.top.size() == static_cast<std::size_t>(params.top_k)) break;
  }
  result.feasible = !result.top.empty();
  return result;
}

}  // namespace genie
