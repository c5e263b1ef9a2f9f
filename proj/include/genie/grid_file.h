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

#ifndef GENIE_GRID_FILE_H_
#define GENIE_GRID_FILE_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "genie/policy.h"

namespace genie {

// Grid files hold one grid point per line as whitespace-separated key=value
// tokens, e.g. "id=3 bid_multiplier=1.2 reserve_score=0.05". A missing id is
// assigned the line's 1-based point index. '#' starts a comment.

// Throws ConfigError for malformed tokens, unknown knobs or repeated ids.
std::vector<GridPoint> read_grid(std::istream& in);
std::vector<GridPoint> read_grid_file(const std::string& path);

void write_grid(std::ostream& out, const std::vector<GridPoint>& grid);
void write_grid_file(const std::string& path,
                     const std::vector<GridPoint>& grid);

std::string format_double(double value);

}  // namespace genie

#endif  // GENIE_GRID_FILE_H_
