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

#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "mipt/statistics.h"

namespace mipt {
namespace {

TEST(ExactMoments, MatchesTwoPassComputation) {
  Rng rng(1);
  std::normal_distribution<double> g(3.0, 2.0);
  std::vector<double> xs(1000);
  for (double& x : xs) x = g(rng);
  ExactMoments m;
  for (double x : xs) m.add(x);
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  EXPECT_NEAR(m.mean(), mean, 1e-11);
  EXPECT_NEAR(m.variance(), ss / xs.size(), 1e-9);
  EXPECT_NEAR(m.sample_variance(), ss / (xs.size() - 1), 1e-9);
  EXPECT_NEAR(m.standard_error(), std::sqrt(ss / (xs.size() - 1) / xs.size()), 1e-11);
}

TEST(ExactMoments, ConstantInputHasExactlyZeroVariance) {
  ExactMoments m;
  for (int i = 0; i < 1000; ++i) m.add(0.1);
  EXPECT_EQ(m.variance(), 0.0);
  EXPECT_EQ(m.standard_error(), 0.0);
}

TEST(ExactMoments, RejectsNonFinite) {
  ExactMoments m;
  EXPECT_THROW(m.add(NAN), std::domain_error);
  EXPECT_THROW(m.add(1e7), std::domain_error);
}

// Merging in any grouping and order gives bit-identical accumulators.
TEST(ExactMoments, MergeIsAssociativeAndCommutative) {
  for (unsigned seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    std::vector<double> xs(200);
    for (double& x : xs) x = u(rng);
    std::uniform_int_distribution<int> cut(1, 198);
    int a = cut(rng), b = cut(rng);
    if (a > b) std::swap(a, b);
    ExactMoments p1, p2, p3, whole;
    for (int i = 0; i < 200; ++i) {
      whole.add(xs[i]);
      (i < a ? p1 : i < b ? p2 : p3).add(xs[i]);
    }
    ExactMoments left = p1;
    left.merge(p2);
    left.merge(p3);
    ExactMoments right = p2;
    right.merge(p3);
    ExactMoments r2 = p3;
    r2.merge(p1);
    r2.merge(p2);
    ExactMoments r1 = p1;
    r1.merge(right);
    EXPECT_EQ(left, whole);
    EXPECT_EQ(r1, whole);
    EXPECT_EQ(r2, whole);
  }
}

TEST(IntHistogram, MomentsAndMerge) {
  IntHistogram h(4), a(4), b(4);
  const int vals[] = {0, 1, 1, 2, 4, 4, 3};
  for (int i = 0; i < 7; ++i) {
    h.add(vals[i]);
    (i % 2 ? a : b).add(vals[i]);
  }
  a.merge(b);
  EXPECT_EQ(a, h);
  EXPECT_EQ(h.count(), 7u);
  EXPECT_NEAR(h.mean(), 15.0 / 7, 1e-15);
  const double m = 15.0 / 7;
  double ss = 0.0, m4 = 0.0;
  for (int v : vals) {
    ss += (v - m) * (v - m);
    m4 += std::pow(v - m, 4);
  }
  EXPECT_NEAR(h.variance(), ss / 7, 1e-14);
  EXPECT_NEAR(h.central_moment(4), m4 / 7, 1e-13);
  EXPECT_THROW(h.add(5), std::out_of_range);
  EXPECT_THROW(h.merge(IntHistogram(3)), std::invalid_argument);
  const auto nrm = h.normalized();
  EXPECT_NEAR(std::accumulate(nrm.begin(), nrm.end(), 0.0), 1.0, 1e-15);
}

// The variance standard error agrees with the spread of replicated estimates.
TEST(DispersionEstimate, ErrorMatchesReplicateSpread) {
  Rng rng(3);
  std::discrete_distribution<int> law({0.2, 0.5, 0.3});
  const int reps = 2000, n = 400;
  ExactMoments vars, errs;
  for (int r = 0; r < reps; ++r) {
    IntHistogram h(2);
    for (int i = 0; i < n; ++i) h.add(law(rng));
    const Estimate e = dispersion_estimate(h);
    vars.add(e.value);
    errs.add(e.error);
  }
  EXPECT_NEAR(errs.mean() / std::sqrt(vars.sample_variance()), 1.0, 0.08);
  // Population variance of the law: E[x^2] - E[x]^2 = 1.7 - 1.21.
  EXPECT_NEAR(vars.mean(), 0.49 * (n - 1.0) / n, 4 * std::sqrt(vars.sample_variance() / reps));
}

TEST(EnsembleStats, AccumulateMergeAndSectors) {
  EnsembleStats a(4, 2), b(4, 2), all(4, 2);
  Rng rng(4);
  for (int i = 0; i < 100; ++i) {
    TrajectoryRecord r;
    r.entropy_half = uniform01(rng);
    r.fluctuation_half = 0.25 * uniform01(rng);
    r.sampled_config = {int(rng() % 2), int(rng() % 2), int(rng() % 2), int(rng() % 2)};
    derive_occupations(r);
    all.accumulate(r);
    (i < 37 ? a : b).accumulate(r);
  }
  b.merge(a);
  EXPECT_EQ(b.count, all.count);
  EXPECT_EQ(b.entropy, all.entropy);
  EXPECT_EQ(b.n_half, all.n_half);
  std::uint64_t in_sectors = 0;
  for (const auto& [n, s] : all.sectors) in_sectors += s.count;
  EXPECT_EQ(in_sectors, 100u);
  EXPECT_THROW(all.merge(EnsembleStats(6, 2)), std::invalid_argument);
  EXPECT_THROW(sector_dispersion(all, 7), InsufficientData);
  EXPECT_NO_THROW(sector_dispersion(all, 2));
}

TEST(ScalingFit, RecoversPowerLaw) {
  std::vector<std::pair<double, double>> curve;
  for (double p = 0.1; p < 1.0; p += 0.1) curve.emplace_back(p, 3.0 * std::pow(p, -2.0));
  EXPECT_NEAR(asymptotic_scaling_fit(curve, 0.2, 0.6), -2.0, 1e-12);
  EXPECT_THROW(asymptotic_scaling_fit(curve, 0.2, 0.35), std::invalid_argument);
  curve.emplace_back(0.95, 0.0);
  EXPECT_THROW(asymptotic_scaling_fit(curve, 0.2, 1.0), std::domain_error);
}

}  // namespace
}  // namespace mipt
