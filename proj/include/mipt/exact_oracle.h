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

#ifndef MIPT_EXACT_ORACLE_H_
#define MIPT_EXACT_ORACLE_H_

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "mipt/trajectory.h"

namespace mipt {

struct OracleOptions {
  std::uint64_t max_branches = 10'000'000;
  /// Branches whose weight drops below this are discarded.
  double prune_below = 1e-15;
  int workers = 1;
};

struct BranchLimitExceeded : std::runtime_error {
  BranchLimitExceeded(const std::string& msg, double estimate)
      : std::runtime_error(msg), estimate(estimate) {}
  double estimate;
};

/// First and second moments of a per-trajectory quantity.
struct OracleMoments {
  double first = 0.0;
  double second = 0.0;
  double variance() const { return second - first * first; }
};

/// Per-trajectory expectation values at the final time. Region A is the first
/// L/2 sites.
struct OracleAverages {
  OracleMoments n_half;
  OracleMoments n_half_sq;
  OracleMoments entropy;
  OracleMoments fluctuation;
  OracleMoments n_total;
};

struct OracleResult {
  int L = 0;
  int d = 0;
  std::uint64_t branches = 0;
  double kept_weight = 0.0;
  double pruned_weight = 0.0;
  /// Averages with trajectory probabilities as weights.
  OracleAverages trajectory;
  /// Averages with weights placement * Born^2, normalized.
  OracleAverages replica;
  /// Law of the sampled final configuration: joint[n_total][n_half].
  std::vector<std::vector<double>> joint;
  std::vector<double> mid_left;
  std::vector<double> mid_right;

  std::vector<double> n_half_distribution() const;
  std::vector<double> n_total_distribution() const;
  /// Variance of the sampled n_half over all iterations.
  double dispersion() const;
  /// Variance of the sampled n_half among samples with n_total == n.
  double sector_dispersion(int n) const;
  double sector_probability(int n) const;
};

/// Exhaustive sum over measurement placements and outcomes of a small
/// disorder-free circuit, using the engine's propagator.
OracleResult enumerate_trajectories(const RunConfig& config, const OracleOptions& opts = {});

/// Upper bound on the number of leaves: (1 + d)^(L T/dt) for 0 < p < 1.
double branch_count_estimate(const RunConfig& config);

struct AreaLawForms {
  double fluctuation_half = 0.0;
  double dispersion = 0.0;
  double sector_dispersion = 0.0;
  double g = 0.0;
};

/// Leading small-x forms near full measurement for predetermined patterns on
/// an open chain with even L; x = 1 - p and lambda = J / Gamma.
AreaLawForms area_law_closed_forms(const Occupation& pattern, double lambda, double x);

}  // namespace mipt

#endif  // MIPT_EXACT_ORACLE_H_
