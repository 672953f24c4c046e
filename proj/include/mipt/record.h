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

#ifndef MIPT_RECORD_H_
#define MIPT_RECORD_H_

#include <cstdint>
#include <vector>

#include "mipt/measurements.h"

namespace mipt {

/// Output of one circuit iteration.
///
/// entropy_half and fluctuation_half are evaluated on the final pure state.
/// The N_* fields come from a single Born sample of the full configuration.
/// Mid sites are L/2 - 1 (left) and L/2 (right), 0-based.
struct TrajectoryRecord {
  std::uint64_t iteration = 0;
  double entropy_half = 0.0;
  double fluctuation_half = 0.0;
  double expected_n_half = 0.0;
  double expected_n_total = 0.0;
  Occupation sampled_config;
  int n_half = 0;
  int n_total = 0;
  int n_mid_left = 0;
  int n_mid_right = 0;
  int measurement_count = 0;
  std::vector<MeasurementEvent> outcomes;

  bool operator==(const TrajectoryRecord&) const = default;
};

/// Fills the derived occupation fields from sampled_config.
void derive_occupations(TrajectoryRecord& r);

}  // namespace mipt

#endif  // MIPT_RECORD_H_
