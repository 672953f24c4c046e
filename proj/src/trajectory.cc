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

#include "mipt/trajectory.h"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

namespace mipt {

int RunConfig::steps() const {
  if (!(dt > 0) || !(T > 0)) throw std::invalid_argument("dt and T must be positive");
  const double r = T / dt;
  const double n = std::round(r);
  if (std::abs(r - n) > 1e-9 * std::max(1.0, r) || n < 1) {
    throw std::invalid_argument("T/dt must be a positive integer");
  }
  return static_cast<int>(n);
}

void RunConfig::validate() const {
  auto fail = [](const std::string& field, const std::string& msg) {
    throw std::invalid_argument(field + ": " + msg);
  };
  if (L < 2) fail("L", "must be at least 2");
  if (d < 2) fail("d", "must be at least 2");
  bh.validate();
  measurement.validate(L, d);
  if (!(dt > 0)) fail("dt", "must be positive");
  if (!(T > 0)) fail("T", "must be positive");
  try {
    steps();
  } catch (const std::invalid_argument& e) {
    fail("T", e.what());
  }
  if (iterations < 1) fail("iterations", "must be at least 1");
  if (static_cast<int>(initial_state.size()) != L) fail("initial_state", "must have L entries");
  for (int v : initial_state) {
    if (v < 0 || v >= d) fail("initial_state", "entries must lie in [0, d-1]");
  }
  if (propagator.krylov_max_dim < 2) fail("krylov_max_dim", "must be at least 2");
  if (!(propagator.krylov_tol > 0)) fail("krylov_tol", "must be positive");
}

Occupation alternating_state(int L) {
  Occupation occ(L);
  for (int s = 0; s < L; ++s) occ[s] = (s % 2 == 0) ? 1 : 0;
  return occ;
}

RunConfig default_config(int L, int d, MeasurementKind kind, double p) {
  RunConfig c;
  c.L = L;
  c.d = d;
  c.T = d == 2 ? 20.0 : 30.0;
  c.initial_state = alternating_state(L);
  c.measurement.kind = kind;
  c.measurement.pattern = c.initial_state;
  c.measurement.p = p;
  return c;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng iteration_rng(std::uint64_t master_seed, std::uint64_t i) {
  return Rng(splitmix64(splitmix64(master_seed) ^ splitmix64(i + 0x632be59bd9b4e019ULL)));
}

TrajectoryEngine::TrajectoryEngine(RunConfig config) : config_(std::move(config)) {
  config_.validate();
  std::optional<int> sector;
  if (config_.uses_sector_basis()) {
    int n = 0;
    for (int v : config_.initial_state) n += v;
    sector = n;
  }
  basis_ = build_basis(config_.L, config_.d, sector);
  Rng disorder(splitmix64(config_.disorder_seed));
  const SiteParams sp = draw_site_params(config_.bh, config_.L, &disorder);
  prop_ = std::make_shared<const Propagator>(sp, basis_, config_.dt, config_.propagator);
}

TrajectoryRecord TrajectoryEngine::run(std::uint64_t iteration) const {
  return run(iteration, nullptr);
}

TrajectoryRecord TrajectoryEngine::run(std::uint64_t iteration, StateVector* final_state) const {
  const RunConfig& c = config_;
  Rng rng = iteration_rng(c.master_seed, iteration);
  StateVector psi = StateVector::product(basis_, c.initial_state);
  TrajectoryRecord rec;
  rec.iteration = iteration;
  const int nsteps = c.steps();
  for (int step = 0; step < nsteps; ++step) {
    try {
      evolve_step(psi, *prop_);
    } catch (const std::exception& e) {
      throw std::runtime_error("propagation failed at step " + std::to_string(step) + ": " +
                               e.what());
    }
    auto events = measurement_layer(psi, c.measurement, step, rng);
    rec.measurement_count += static_cast<int>(events.size());
    if (c.log_outcomes) rec.outcomes.insert(rec.outcomes.end(), events.begin(), events.end());
  }
  const std::vector<int> half = site_range(0, c.L / 2);
  rec.entropy_half = schmidt_entropy(psi, c.L / 2);
  auto [m1, m2] = number_moments(psi, half);
  rec.fluctuation_half = m2 - m1 * m1;
  rec.expected_n_half = m1;
  rec.expected_n_total = number_moments(psi, site_range(0, c.L)).first;
  rec.sampled_config = sample_configuration(psi, rng);
  derive_occupations(rec);
  if (final_state) *final_state = psi;
  return rec;
}

TrajectoryRecord run_trajectory(const RunConfig& config, std::uint64_t iteration) {
  return TrajectoryEngine(config).run(iteration);
}

int default_worker_count() {
  if (const char* env = std::getenv("MIPT_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

EnsembleResult run_ensemble(const RunConfig& config, int workers, bool keep_records) {
  return run_ensemble(TrajectoryEngine(config), workers, keep_records);
}

EnsembleResult run_ensemble(const TrajectoryEngine& engine, int workers, bool keep_records) {
  const RunConfig& c = engine.config();
  const std::uint64_t M = c.iterations;
  if (workers <= 0) workers = default_worker_count();
  workers = static_cast<int>(std::min<std::uint64_t>(workers, M));

  constexpr std::uint64_t kChunk = 64;
  const std::uint64_t nchunks = (M + kChunk - 1) / kChunk;
  std::vector<EnsembleStats> partial(nchunks, EnsembleStats(c.L, c.d));
  EnsembleResult result;
  if (keep_records) result.records.resize(M);

  std::atomic<std::uint64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto work = [&]() {
    try {
      for (;;) {
        const std::uint64_t k = next.fetch_add(1);
        if (k >= nchunks) return;
        const std::uint64_t end = std::min(M, (k + 1) * kChunk);
        for (std::uint64_t i = k * kChunk; i < end; ++i) {
          TrajectoryRecord r = engine.run(i);
          partial[k].accumulate(r);
          if (keep_records) result.records[i] = std::move(r);
        }
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mu);
      if (!error) error = std::current_exception();
      next.store(nchunks);
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  result.stats = EnsembleStats(c.L, c.d);
  for (const auto& s : partial) result.stats.merge(s);
  return result;
}

}  // namespace mipt
