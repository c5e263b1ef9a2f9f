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

#ifndef GENIE_ERRORS_H_
#define GENIE_ERRORS_H_

#include <stdexcept>
#include <string>
#include <vector>

namespace genie {

class GenieError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid job, generator, grid or policy configuration.
class ConfigError : public GenieError {
 public:
  using GenieError::GenieError;
};

// Data does not match the shape an operation expects (feature names,
// dimensions, vector lengths).
class SchemaError : public GenieError {
 public:
  using GenieError::GenieError;
};

class IoError : public GenieError {
 public:
  using GenieError::GenieError;
};

// A metric whose denominator is zero.
class UndefinedMetricError : public GenieError {
 public:
  using GenieError::GenieError;
};

// An importance weight with zero logging density.
class WeightError : public GenieError {
 public:
  using GenieError::GenieError;
};

// Rank-deficient least-squares system. `columns` names the features that are
// linear combinations of the others.
class SingularityError : public GenieError {
 public:
  SingularityError(const std::string& what, std::vector<std::string> columns)
      : GenieError(what), columns_(std::move(columns)) {}

  const std::vector<std::string>& columns() const { return columns_; }

 private:
  std::vector<std::string> columns_;
};

}  // namespace genie

#endif  // GENIE_ERRORS_H_
