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

#include <gtest/gtest.h>

#include "mipt/measurements.h"

namespace mipt {
namespace {

StateVector random_state(BasisPtr b, unsigned seed) {
  Rng rng(seed);
  std::normal_distribution<double> g;
  Eigen::VectorXcd v(b->dim());
  for (std::size_t i = 0; i < b->dim(); ++i) v(i) = cplx(g(rng), g(rng));
  return StateVector(b, v.normalized());
}

TEST(Kraus, CompletenessForBothKinds) {
  for (int d : {2, 3, 5}) {
    for (auto kind : {MeasurementKind::Standard, MeasurementKind::Predetermined}) {
      for (int alpha = 0; alpha < d; ++alpha) {
        Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(d, d);
        for (const auto& K : site_kraus_operators(kind, d, alpha)) sum += K.transpose() * K;
        EXPECT_LT((sum - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff(), 1e-15);
      }
    }
  }
}

TEST(Kraus, PredeterminedMapsToAlpha) {
  const auto ks = site_kraus_operators(MeasurementKind::Predetermined, 3, 2);
  ASSERT_EQ(ks.size(), 3u);
  for (int m = 0; m < 3; ++m) {
    EXPECT_EQ(ks[m](2, m), 1.0);
    EXPECT_EQ(ks[m].cwiseAbs().sum(), 1.0);
  }
}

TEST(Outcomes, ProbabilitiesSumToOne) {
  auto b = build_basis(4, 3);
  const StateVector psi = random_state(b, 1);
  for (int s = 0; s < 4; ++s) {
    const auto p = outcome_probabilities(psi, s);
    double t = 0.0;
    for (double x : p) t += x;
    EXPECT_NEAR(t, 1.0, 1e-14);
  }
}

TEST(Projection, LeavesSiteDefinite) {
  auto b = build_basis(3, 3);
  StateVector psi = random_state(b, 2);
  const double pm = outcome_probabilities(psi, 1)[2];
  EXPECT_NEAR(project_site(psi, 1, 2), pm, 1e-15);
  EXPECT_NEAR(psi.norm(), 1.0, 1e-14);
  EXPECT_NEAR(outcome_probabilities(psi, 1)[2], 1.0, 1e-14);
}

TEST(Projection, ImpossibleOutcomeThrows) {
  auto b = build_basis(2, 2);
  StateVector psi = StateVector::product(b, {1, 0});
  EXPECT_THROW(project_site(psi, 0, 0), std::domain_error);
}

TEST(Relabel, MovesAmplitudeToAlpha) {
  auto b = build_basis(3, 2);
  StateVector psi = random_state(b, 3);
  project_site(psi, 2, 1);
  const Eigen::VectorXcd before = psi.amps();
  relabel_site(psi, 2, 1, 0);
  for (std::size_t k = 0; k < b->dim(); ++k) {
    if (b->occupation(k, 2) == 0) {
      Occupation o = b->state(k);
      o[2] = 1;
      EXPECT_EQ(psi.amps()(k), before(b->index(o)));
    } else {
      EXPECT_EQ(psi.amps()(k), cplx(0.0));
    }
  }
}

TEST(Relabel, SectorBasisRejectsLeavingTheSector) {
  auto b = build_basis(2, 2, 1);
  StateVector psi = StateVector::product(b, {1, 0});
  EXPECT_THROW(relabel_site(psi, 0, 1, 0), std::domain_error);
}

TEST(Layer, ProbabilityZeroAndOne) {
  auto b = build_basis(4, 2);
  MeasurementSpec spec;
  spec.kind = MeasurementKind::Predetermined;
  spec.pattern = {1, 0, 1, 0};
  Rng rng(4);
  StateVector psi = random_state(b, 4);
  spec.p = 0.0;
  EXPECT_TRUE(measurement_layer(psi, spec, 0, rng).empty());
  spec.p = 1.0;
  const auto ev = measurement_layer(psi, spec, 3, rng);
  ASSERT_EQ(ev.size(), 4u);
  for (int s = 0; s < 4; ++s) {
    EXPECT_EQ(ev[s].site, s);
    EXPECT_EQ(ev[s].step, 3);
  }
  EXPECT_NEAR(std::abs(psi.amps()(b->index({1, 0, 1, 0}))), 1.0, 1e-14);
}

TEST(Layer, StandardOutcomeFrequencies) {
  auto b = build_basis(1, 3);
  Eigen::VectorXcd v(3);
  v << std::sqrt(0.5), std::sqrt(0.3), std::sqrt(0.2);
  Rng rng(8);
  std::vector<int> counts(3, 0);
  const int n = 30000;
  for (int i = 0; i < n; ++i) {
    StateVector psi(b, v);
    counts[apply_standard(psi, 0, rng)]++;
  }
  const double want[3] = {0.5, 0.3, 0.2};
  for (int m = 0; m < 3; ++m) {
    EXPECT_NEAR(counts[m] / double(n), want[m], 4 * std::sqrt(want[m] * (1 - want[m]) / n));
  }
}

TEST(Spec, Validation) {
  MeasurementSpec s;
  s.p = 1.5;
  EXPECT_THROW(s.validate(2, 2), std::invalid_argument);
  s.p = 0.5;
  s.kind = MeasurementKind::Predetermined;
  s.pattern = {1};
  EXPECT_THROW(s.validate(2, 2), std::invalid_argument);
  s.pattern = {2, 0};
  EXPECT_THROW(s.validate(2, 2), std::invalid_argument);
  EXPECT_EQ(measurement_kind_from_string("predetermined"), MeasurementKind::Predetermined);
  EXPECT_THROW(measurement_kind_from_string("weak"), std::invalid_argument);
}

}  // namespace
}  // namespace mipt
