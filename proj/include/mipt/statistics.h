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

#ifndef MIPT_STATISTICS_H_
#define MIPT_STATISTICS_H_

#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "mipt/record.h"

namespace mipt {

/// Mean and variance of a real observable from exact fixed-point sums.
///
/// Inputs are rounded to multiples of 2^-40 and summed in wide integers, so
/// accumulation and merging are exactly associative and commutative.
class ExactMoments {
 public:
  static constexpr int kFracBits = 40;

  void add(double x);
  void merge(const ExactMoments& o);

  std::uint64_t count() const { return n_; }
  double mean() const;
  /// Population variance (divides by n).
  double variance() const;
  /// Unbiased variance (divides by n - 1); 0 when n < 2.
  double sample_variance() const;
  /// sqrt(sample_variance / n).
  double standard_error() const;

  bool operator==(const ExactMoments&) const = default;

 private:
  std::uint64_t n_ = 0;
  boost::multiprecision::int256_t sum_ = 0;
  boost::multiprecision::int256_t sum_sq_ = 0;
};

/// Unit-width integer histogram over [0, max_value].
class IntHistogram {
 public:
  IntHistogram() = default;
  explicit IntHistogram(int max_value) : counts_(max_value + 1, 0) {}

  void add(int v);
  void merge(const IntHistogram& o);

  int max_value() const { return static_cast<int>(counts_.size()) - 1; }
  const std::vector<std::uint64_t>& counts() const { return counts_; }
  std::uint64_t count() const;
  double mean() const;
  /// Population variance.
  double variance() const;
  double sample_variance() const;
  double central_moment(int k) const;
  std::vector<double> normalized() const;

  bool operator==(const IntHistogram&) const = default;

 private:
  std::vector<std::uint64_t> counts_;
};

struct SectorStats {
  std::uint64_t count = 0;
  IntHistogram n_half, n_mid_left, n_mid_right;
  ExactMoments entropy, fluctuation;

  bool operator==(const SectorStats&) const = default;
};

/// Mergeable ensemble accumulator over TrajectoryRecords.
class EnsembleStats {
 public:
  EnsembleStats() = default;
  EnsembleStats(int L, int d);

  void accumulate(const TrajectoryRecord& r);
  /// Throws std::invalid_argument when (L, d) differ.
  void merge(const EnsembleStats& o);

  int L = 0;
  int d = 0;
  std::uint64_t count = 0;
  ExactMoments entropy, fluctuation, expected_n_half, expected_n_total;
  IntHistogram n_half, n_total, n_mid_left, n_mid_right;
  std::map<int, SectorStats> sectors;

  bool operator==(const EnsembleStats&) const = default;
};

struct Estimate {
  double value = 0.0;
  double error = 0.0;
};

Estimate mean_estimate(const ExactMoments& m);
Estimate mean_estimate(const IntHistogram& h);
/// Population variance with the large-sample standard error of a variance.
Estimate dispersion_estimate(const IntHistogram& h);

struct InsufficientData : std::runtime_error {
  InsufficientData(const std::string& what, std::uint64_t n)
      : std::runtime_error(what), count(n) {}
  std::uint64_t count;
};

/// Variance of the sampled half-chain number over iterations whose sampled
/// total equals n_target.
Estimate sector_dispersion(const EnsembleStats& stats, int n_target);

/// Least-squares slope of log y against log p over points with p in [lo, hi].
double asymptotic_scaling_fit(const std::vector<std::pair<double, double>>& curve, double lo,
                              double hi);

}  // namespace mipt

#endif  // MIPT_STATISTICS_H_
