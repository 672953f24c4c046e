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

#ifndef MIPT_TRAJECTORY_H_
#define MIPT_TRAJECTORY_H_

#include <cstdint>
#include <memory>
#include <vector>

#include "mipt/bose_hubbard.h"
#include "mipt/fock.h"
#include "mipt/measurements.h"
#include "mipt/record.h"
#include "mipt/statistics.h"

namespace mipt {

/// Full description of an ensemble run. Times are in units of 1/J.
struct RunConfig {
  int L = 4;
  int d = 2;
  /// Evolve in the initial state's number sector. Honoured only for standard
  /// measurements; the predetermined kind always uses the full basis.
  bool sector_restricted = true;
  BHParams bh;
  std::uint64_t disorder_seed = 0;
  MeasurementSpec measurement;
  double dt = 0.02;
  double T = 20.0;
  std::uint64_t iterations = 1;
  std::uint64_t master_seed = 1;
  bool log_outcomes = false;
  Occupation initial_state;
  PropagatorOptions propagator;

  /// Number of circuit layers T/dt; throws if not integral within 1e-9.
  int steps() const;
  bool uses_sector_basis() const {
    return sector_restricted && measurement.kind == MeasurementKind::Standard;
  }
  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// (1,0,1,0,...) of length L.
Occupation alternating_state(int L);

/// Defaults: T = 20 for d = 2 and 30 otherwise, alternating initial state and
/// pattern.
RunConfig default_config(int L, int d, MeasurementKind kind, double p);

/// splitmix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x);

/// Generator for iteration i, independent of scheduling.
Rng iteration_rng(std::uint64_t master_seed, std::uint64_t i);

/// Holds the basis and propagator of a RunConfig; immutable and shareable.
class TrajectoryEngine {
 public:
  explicit TrajectoryEngine(RunConfig config);

  TrajectoryRecord run(std::uint64_t iteration) const;
  /// Final state and record of one iteration.
  TrajectoryRecord run(std::uint64_t iteration, StateVector* final_state) const;

  const RunConfig& config() const { return config_; }
  const BasisPtr& basis() const { return basis_; }
  const Propagator& propagator() const { return *prop_; }

 private:
  RunConfig config_;
  BasisPtr basis_;
  std::shared_ptr<const Propagator> prop_;
};

TrajectoryRecord run_trajectory(const RunConfig& config, std::uint64_t iteration);

struct EnsembleResult {
  std::vector<TrajectoryRecord> records;
  EnsembleStats stats;
};

/// Worker count from MIPT_WORKERS, else hardware concurrency.
int default_worker_count();

/// Runs iterations [0, M). Statistics are accumulated in iteration order so
/// the result does not depend on the number of workers.
EnsembleResult run_ensemble(const RunConfig& config, int workers = 0, bool keep_records = true);
EnsembleResult run_ensemble(const TrajectoryEngine& engine, int workers = 0,
                            bool keep_records = true);

}  // namespace mipt

#endif  // MIPT_TRAJECTORY_H_
