// Copyright 2026 The mipt Authors
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

#ifndef MIPT_CONFIG_IO_H_
#define MIPT_CONFIG_IO_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "mipt/trajectory.h"

namespace mipt {

/// Parse or validation failure tied to one configuration key.
struct ConfigError : std::invalid_argument {
  ConfigError(const std::string& field, const std::string& msg)
      : std::invalid_argument(field + ": " + msg), field(field) {}
  std::string field;
};

/// Flat `key = value` text, one key per line; lists use `[a, b, c]`.
/// Missing keys take RunConfig defaults, except T (20 for d = 2, else 30),
/// initial_state (alternating) and pattern (initial_state).
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
/// Writes every key; parse_config(serialize_config(c)) reproduces c.
std::string serialize_config(const RunConfig& config);

struct SweepPlan {
  RunConfig base;
  std::vector<double> p_values;
  std::vector<int> L_values;
  std::vector<MeasurementKind> kinds;
  std::string output_dir = "out";
  int workers = 0;

  void validate() const;
};

/// Plan files hold the base config keys plus p_values, L_values, kinds,
/// output_dir and workers.
SweepPlan parse_plan(const std::string& text);
SweepPlan load_plan(const std::string& path);
std::string serialize_plan(const SweepPlan& plan);

/// Deterministic master seed of one sweep cell.
std::uint64_t cell_seed(std::uint64_t master_seed, MeasurementKind kind, int L, double p);

/// Base config specialized to a cell: L, kind, p, alternating initial state
/// and pattern, cell seed.
RunConfig cell_config(const SweepPlan& plan, MeasurementKind kind, int L, double p);

std::string read_file(const std::string& path);

}  // namespace mipt

#endif  // MIPT_CONFIG_IO_H_
