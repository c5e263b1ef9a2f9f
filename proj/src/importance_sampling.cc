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

#include "genie/importance_sampling.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include "genie/errors.h"
#include "genie/parallel.h"
#include "genie/probit.h"

namespace genie {

namespace {

// log(Phi(b) - Phi(a)) for a < b, using the upper tail when both bounds sit
// above the mean.
double log_mass(double a, double b) {
  if (a > 0.0) {
    const double upper = 0.5 * std::erfc(a / std::numbers::sqrt2);
    const double lower = 0.5 * std::erfc(b / std::numbers::sqrt2);
    return std::log(upper - lower);
  }
  return std::log(normal_cdf(b) - normal_cdf(a));
}

}  // namespace

double TruncatedGaussian::log_density(double x) const {
  if (!(x >= lower && x <= upper)) {
    return -std::numeric_limits<double>::infinity();
  }
  const double z = (x - mean) / stddev;
  return -0.5 * z * z - std::log(stddev) -
         0.5 * std::log(2.0 * std::numbers::pi) -
         log_mass((lower - mean) / stddev, (upper - mean) / stddev);
}

double TruncatedGaussian::sample(Rng& rng) const {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const double x = rng.normal(mean, stddev);
    if (x >= lower && x <= upper) return x;
  }
  // The bounds hold little mass; invert the CDF by bisection instead.
  const double a = normal_cdf((lower - mean) / stddev);
  const double b = normal_cdf((upper - mean) / stddev);
  const double target = a + rng.uniform() * (b - a);
  double lo = lower;
  double hi = upper;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (normal_cdf((mid - mean) / stddev) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

RandomizationSpec RandomizationSpec::single(const std::string& knob,
                                            double mean, double stddev,
                                            double sigmas) {
  TruncatedGaussian g{mean, stddev, mean - sigmas * stddev,
                      mean + sigmas * stddev};
  if (const KnobSpec* spec = find_knob(knob)) {
    g.lower = std::max(g.lower, spec->min_value);
    g.upper = std::min(g.upper, spec->max_value);
  }
  return RandomizationSpec{{RandomizedKnob{knob, g}}};
}

void RandomizationSpec::validate() const {
  if (knobs.empty()) throw ConfigError("randomization needs at least one knob");
  std::set<std::string> seen;
  for (const auto& k : knobs) {
    const KnobSpec* spec = find_knob(k.knob);
    if (spec == nullptr) throw ConfigError("unknown knob: " + k.knob);
    if (!seen.insert(k.knob).second) {
      throw ConfigError("knob randomized twice: " + k.knob);
    }
    const TruncatedGaussian& g = k.distribution;
    if (!(g.stddev > 0.0)) throw ConfigError("randomization stddev must be > 0");
    if (!(g.lower <= g.mean && g.mean <= g.upper && g.lower < g.upper)) {
      throw ConfigError("randomization bounds must contain the mean");
    }
    if (g.lower < spec->min_value || g.upper > spec->max_value) {
      throw ConfigError("randomization bounds leave the range of " + k.knob);
    }
  }
}

ProposalDistribution ProposalDistribution::shifted(
    const RandomizationSpec& logging, const std::vector<double>& means) {
  if (means.size() != logging.knobs.size()) {
    throw ConfigError("one proposal mean per randomized knob required");
  }
  ProposalDistribution p;
  for (std::size_t i = 0; i < means.size(); ++i) {
    RandomizedKnob k = logging.knobs[i];
    k.distribution.mean = means[i];
    p.knobs.push_back(std::move(k));
  }
  return p;
}

ProposalDistribution ProposalDistribution::same_as(
    const RandomizationSpec& logging) {
  return ProposalDistribution{logging.knobs};
}

std::vector<std::string> support_warnings(const ProposalDistribution& target,
                                          const RandomizationSpec& logging) {
  std::vector<std::string> out;
  for (const auto& t : target.knobs) {
    const RandomizedKnob* l = nullptr;
    for (const auto& k : logging.knobs) {
      if (k.knob == t.knob) l = &k;
    }
    if (l == nullptr) {
      out.push_back(t.knob + " is not randomized in the logs");
      continue;
    }
    if (t.distribution.lower < l->distribution.lower ||
        t.distribution.upper > l->distribution.upper) {
      out.push_back(t.knob + " proposal support leaves the logging support");
    }
  }
  return out;
}

LogDataset generate_randomized_logs(const MarketplaceModel& model,
                                    const PolicyConfig& base_policy,
                                    const RandomizationSpec& spec,
                                    std::size_t n_requests, std::uint64_t seed,
                                    const std::optional<DriftSpec>& drift,
                                    int workers) {
  spec.validate();
  if (n_requests < 1) throw ConfigError("n_requests must be >= 1");
  model.validate();
  LogDataset out;
  out.logging_policy = base_policy;
  out.drift = drift;
  out.randomization = spec;
  out.records.resize(n_requests);
  parallel_chunks(
      n_requests, resolve_workers(workers),
      [&](std::size_t begin, std::size_t end, std::size_t) {
        for (std::size_t i = begin; i < end; ++i) {
          Rng rng(seed, "randomize", i);
          std::map<std::string, double> sampled;
          for (const auto& k : spec.knobs) {
            sampled[k.knob] = k.distribution.sample(rng);
          }
          out.records[i] = generate_request(
              model, out.policy_at(i).with(sampled), seed, i);
        }
      });
  return out;
}

double realized_revenue(const AuctionData& record) {
  double total = 0.0;
  const auto& placements = record.logged_allocation.placements;
  for (std::size_t i = 0; i < placements.size(); ++i) {
    if (i < record.logged_clicks.size() && record.logged_clicks[i]) {
      total += placements[i].cpc;
    }
  }
  return total;
}

double realized_clicks(const AuctionData& record) {
  double total = 0.0;
  for (auto c : record.logged_clicks) total += c;
  return total;
}

double logged_impressions(const AuctionData& record) {
  return static_cast<double>(record.logged_allocation.placements.size());
}

double logged_mainline_impressions(const AuctionData& record) {
  return static_cast<double>(record.logged_allocation.mainline_count());
}

std::vector<double> importance_weights(const LogDataset& logs,
                                       const ProposalDistribution& target) {
  if (!logs.randomization) {
    throw SchemaError("logs carry no knob randomization");
  }
  const auto& logging = logs.randomization->knobs;
  if (target.knobs.size() != logging.size()) {
    throw SchemaError("proposal and logging randomize different knobs");
  }
  for (std::size_t k = 0; k < logging.size(); ++k) {
    if (target.knobs[k].knob != logging[k].knob) {
      throw SchemaError("proposal and logging randomize different knobs");
    }
  }
  std::vector<double> w;
  w.reserve(logs.records.size());
  for (const auto& r : logs.records) {
    double log_w = 0.0;
    for (std::size_t k = 0; k < logging.size(); ++k) {
      const double x = r.policy_params.get(logging[k].knob);
      const double lp = logging[k].distribution.log_density(x);
      if (!std::isfinite(lp)) {
        throw WeightError("request " + std::to_string(r.request_id) + " has " +
                          logging[k].knob +
                          " outside the logging support");
      }
      log_w += target.knobs[k].distribution.log_density(x) - lp;
    }
    w.push_back(std::exp(log_w));
  }
  return w;
}

IsEstimate is_estimate(const LogDataset& logs,
                       const ProposalDistribution& target,
                       const MetricExtractor& metric, bool self_normalized) {
  const std::vector<double> w = importance_weights(logs, target);
  IsEstimate est;
  est.n = w.size();
  if (est.n == 0) throw UndefinedMetricError("importance sampling of no logs");
  std::vector<double> y;
  y.reserve(est.n);
  double sum_wy = 0.0;
  double sum_w2 = 0.0;
  for (std::size_t i = 0; i < est.n; ++i) {
    y.push_back(metric(logs.records[i]));
    sum_wy += w[i] * y[i];
    est.weight_sum += w[i];
    sum_w2 += w[i] * w[i];
  }
  est.estimate = self_normalized && est.weight_sum > 0.0
                     ? sum_wy / est.weight_sum
                     : sum_wy / static_cast<double>(est.n);
  est.ess = sum_w2 > 0.0 ? est.weight_sum * est.weight_sum / sum_w2 : 0.0;
  if (est.weight_sum > 0.0 && est.ess > 0.0) {
    const double mean = sum_wy / est.weight_sum;
    double var = 0.0;
    for (std::size_t i = 0; i < est.n; ++i) {
      var += w[i] * (y[i] - mean) * (y[i] - mean);
    }
    var /= est.weight_sum;
    est.standard_error = std::sqrt(var / est.ess);
  }
  return est;
}

}  // namespace genie
