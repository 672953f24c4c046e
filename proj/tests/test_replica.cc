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

#include "mipt/replica.h"

namespace mipt {
namespace {

ReplicaModel predetermined(int L, int d = 2) {
  ReplicaModel m;
  m.L = L;
  m.d = d;
  m.kind = ReplicaKind::Predetermined;
  m.pattern.resize(L);
  for (int s = 0; s < L; ++s) m.pattern[s] = s % 2 == 0 ? 1 : 0;
  return m;
}

Eigen::VectorXcd to_dense(const SparseKet& k, std::uint64_t dim) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
  for (const auto& [c, a] : k) v(c) = a;
  return v;
}

double observable(const ReplicaModel& m, const SparseKet& k, ReplicaObservable o,
                  const std::vector<int>& region) {
  return replica_observable(ReplicaSpace(m.L, m.d), k, o, region).real();
}

TEST(ReplicaSpace, DigitLayoutIsBlockMajor) {
  const ReplicaSpace sp(2, 3);
  EXPECT_EQ(sp.dim(), 6561u);
  // Position 0 (block 0, site 0) is the most significant digit.
  const std::uint64_t code = sp.with_digit(0, 0, 0, 2);
  EXPECT_EQ(code, 2u * 2187u);
  EXPECT_EQ(sp.digit(code, 0, 0), 2);
  EXPECT_EQ(sp.uniform({1, 2}), sp.with_local(sp.with_local(0, 0, 40), 1, 80));
  EXPECT_EQ(sp.local(sp.uniform({1, 2}), 1), 80);
}

TEST(EnlargedOperators, StructuralChecks) {
  const ReplicaModel m = predetermined(2);
  const EnlargedOperators ops = build_enlarged_heff(m, 0.1);
  EXPECT_EQ(ops.Heff.rows(), 256);
  const Eigen::MatrixXcd HBH(ops.HBH), HM(ops.HM);
  EXPECT_LE((HBH - HBH.adjoint()).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_EQ(HM.imag().cwiseAbs().maxCoeff(), 0.0);
  EXPECT_GT((HM - HM.transpose()).cwiseAbs().maxCoeff(), 0.5);
  const ReplicaSpace sp(2, 2);
  const Eigen::VectorXcd g = to_dense({{sp.uniform(m.pattern), 1.0}}, 256);
  EXPECT_EQ((HM * g).norm(), 0.0);
}

TEST(EnlargedOperators, PredeterminedGroundIsUnique) {
  const EnlargedOperators ops = build_enlarged_heff(predetermined(2), 0.0);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es{Eigen::MatrixXcd(ops.HM)};
  int zeros = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) zeros += std::abs(es.eigenvalues()(i)) < 1e-9;
  EXPECT_EQ(zeros, 1);
}

TEST(EnlargedOperators, StandardGroundSpaceHasDimensionDToTheL) {
  for (int d : {2, 3}) {
    ReplicaModel m;
    m.L = d == 2 ? 2 : 1;
    m.d = d;
    m.kind = ReplicaKind::Standard;
    const EnlargedOperators ops = build_enlarged_heff(m, 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es{Eigen::MatrixXd(Eigen::MatrixXcd(ops.HM).real())};
    int zeros = 0;
    for (int i = 0; i < es.eigenvalues().size(); ++i) zeros += std::abs(es.eigenvalues()(i)) < 1e-9;
    EXPECT_EQ(zeros, static_cast<int>(std::pow(d, m.L)));
  }
}

TEST(Biortho, SingleSiteFamilyIsBiorthonormal) {
  const ReplicaModel m = predetermined(1);
  const BiorthoBasis b(m);
  for (std::uint64_t i = 0; i < 16; ++i) {
    const Eigen::VectorXcd li = to_dense(b.left_vector(i), 16);
    for (std::uint64_t j = 0; j < 16; ++j) {
      const Eigen::VectorXcd rj = to_dense(b.right_vector(j), 16);
      EXPECT_NEAR(std::abs(li.dot(rj) - (i == j ? 1.0 : 0.0)), 0.0, 1e-12) << i << " " << j;
    }
  }
}

TEST(Biortho, GroundVectors) {
  const ReplicaModel m = predetermined(2);
  const BiorthoBasis b(m);
  const ReplicaSpace& sp = b.space();
  const SparseKet right = b.right_vector(b.ground_label());
  ASSERT_EQ(right.size(), 1u);
  EXPECT_EQ(right.begin()->first, sp.uniform({1, 0}));
  const SparseKet left = b.left_vector(b.ground_label());
  EXPECT_EQ(left.size(), 4u);
  for (int x0 = 0; x0 < 2; ++x0) {
    for (int x1 = 0; x1 < 2; ++x1) EXPECT_EQ(left.at(sp.uniform({x0, x1})), cplx(1.0));
  }
}

TEST(Biortho, FamilyDiagonalizesMeasurementPart) {
  const ReplicaModel m = predetermined(2);
  const BiorthoBasis b(m);
  const Eigen::MatrixXcd HM(build_enlarged_heff(m, 0.0).HM);
  for (std::uint64_t k = 0; k < 256; ++k) {
    const Eigen::VectorXcd r = to_dense(b.right_vector(k), 256);
    const Eigen::VectorXcd l = to_dense(b.left_vector(k), 256);
    const double E = b.energy(k);
    EXPECT_LE((HM * r - E * r).norm(), 1e-10);
    EXPECT_LE((HM.adjoint() * l - E * l).norm(), 1e-10);
  }
  EXPECT_EQ(b.energy(b.ground_label()), 0);
  ReplicaModel st;
  st.kind = ReplicaKind::Standard;
  EXPECT_THROW(BiorthoBasis{st}, std::invalid_argument);
}

TEST(Perturbation, ZeroLambdaGivesGround) {
  const ReplicaModel m = predetermined(3);
  const SparseKet k = perturb_ground(m, 0.0);
  double off = 0.0;
  const std::uint64_t g = ReplicaSpace(3, 2).uniform(m.pattern);
  for (const auto& [c, a] : k) {
    if (c == g) {
      EXPECT_EQ(a, cplx(1.0));
    } else {
      off += std::abs(a);
    }
  }
  EXPECT_EQ(off, 0.0);
}

TEST(Perturbation, FirstOrderIsImaginary) {
  const SparseKet k = first_order_correction(predetermined(4), 0.1);
  ASSERT_FALSE(k.empty());
  for (const auto& [c, a] : k) EXPECT_EQ(a.real(), 0.0);
}

class ClosedForms : public ::testing::TestWithParam<std::tuple<int, double>> {};

TEST_P(ClosedForms, PredeterminedPattern) {
  const auto [L, lambda] = GetParam();
  const ReplicaModel m = predetermined(L);
  const SparseKet k = perturb_ground(m, lambda);
  const ReplicaClosedForms cf = predetermined_closed_forms(L, lambda);
  const std::vector<int> half = site_range(0, L / 2), all = site_range(0, L);
  EXPECT_NEAR(observable(m, k, ReplicaObservable::EntropyLeft, half), cf.entropy_half, 1e-10);
  EXPECT_NEAR(observable(m, k, ReplicaObservable::EntropyRight, half), cf.entropy_half, 1e-10);
  EXPECT_NEAR(observable(m, k, ReplicaObservable::Fluctuation, half), cf.fluctuation_half, 1e-10);
  EXPECT_NEAR(observable(m, k, ReplicaObservable::Number, all), cf.n_total, 1e-10);
  // Bulk sites (two bonds): 1-based even sites hold alpha = 0.
  for (int s = 1; s + 1 < L; ++s) {
    const double want = (s + 1) % 2 == 0 ? cf.n_even : cf.n_odd;
    EXPECT_NEAR(observable(m, k, ReplicaObservable::Number, {s}), want, 1e-10) << "site " << s;
  }
}

INSTANTIATE_TEST_SUITE_P(Sizes, ClosedForms,
                         ::testing::Combine(::testing::Values(2, 3, 4),
                                            ::testing::Values(0.01, 0.05, 0.1)));

TEST(ClosedForms, EdgeSiteSeesHalfTheCorrection) {
  const ReplicaModel m = predetermined(4);
  const double lambda = 0.05;
  const SparseKet k = perturb_ground(m, lambda);
  const double x = lambda * lambda / (1 + 3 * lambda * lambda);
  EXPECT_NEAR(observable(m, k, ReplicaObservable::Number, {3}), 0.5 * x, 1e-10);
  EXPECT_NEAR(observable(m, k, ReplicaObservable::Number, {0}), 1.0 - 0.5 * x, 1e-10);
}

TEST(ClosedForms, LimitsAtZeroLambda) {
  const ReplicaClosedForms cf = predetermined_closed_forms(6, 0.0);
  EXPECT_EQ(cf.entropy_half, 0.0);
  EXPECT_EQ(cf.fluctuation_half, 0.0);
  EXPECT_EQ(cf.n_total, 3.0);
  EXPECT_EQ(cf.n_even, 0.0);
  EXPECT_EQ(cf.n_odd, 1.0);
}

TEST(ClosedForms, ProjectorFixture) {
  for (int L : {2, 3}) {
    for (double lambda : {0.01, 0.05}) {
      ReplicaModel m;
      m.L = L;
      m.d = 3;
      m.kind = ReplicaKind::Projector;
      m.pattern.assign(L, 1);
      const SparseKet k = perturb_ground(m, lambda);
      const ReplicaClosedForms cf = projector_closed_forms(L, lambda);
      const auto half = site_range(0, L / 2);
      EXPECT_NEAR(observable(m, k, ReplicaObservable::EntropyLeft, half), cf.entropy_half, 1e-10);
      EXPECT_NEAR(observable(m, k, ReplicaObservable::Fluctuation, half), cf.fluctuation_half, 1e-10);
    }
  }
}

TEST(Perturbation, InsensitiveToOnSiteTermsAtSecondOrder) {
  ReplicaModel a = predetermined(4), b = predetermined(4);
  b.omega = 0.7;
  b.U = 3.0;
  const double lambda = 0.05;
  const SparseKet ka = perturb_ground(a, lambda), kb = perturb_ground(b, lambda);
  for (auto o : {ReplicaObservable::EntropyLeft, ReplicaObservable::Fluctuation}) {
    EXPECT_NEAR(observable(a, ka, o, {0, 1}), observable(b, kb, o, {0, 1}), 1e-12);
  }
}

TEST(Perturbation, WaveRenormalizationOnlyRescalesGround) {
  const ReplicaModel m = predetermined(2);
  const SparseKet plain = perturb_ground(m, 0.05), renorm = perturb_ground(m, 0.05, true);
  const std::uint64_t g = ReplicaSpace(2, 2).uniform(m.pattern);
  const cplx factor = renorm.at(g) / plain.at(g);
  EXPECT_NE(factor, cplx(1.0));
  EXPECT_NEAR(std::abs(factor - 1.0), 0.0, 0.05 * 0.05 * 4);
  for (const auto& [c, a] : plain) {
    if (c != g) EXPECT_EQ(renorm.at(c), a);
  }
}

TEST(ExactGround, ZeroLambdaMatchesBiorthoGround) {
  const ReplicaModel m = predetermined(2);
  const BiorthoGround g = exact_ground_biortho(build_enlarged_heff(m, 0.0).Heff);
  EXPECT_NEAR(std::abs(g.E), 0.0, 1e-12);
  const ReplicaSpace sp(2, 2);
  EXPECT_NEAR(std::abs(g.right(sp.uniform(m.pattern))), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(g.left.dot(g.right) - 1.0), 0.0, 1e-12);
  // Left ground is proportional to sum_x |x x x x>.
  const cplx ref = g.left(sp.uniform({0, 0}));
  for (int x0 = 0; x0 < 2; ++x0) {
    for (int x1 = 0; x1 < 2; ++x1) EXPECT_NEAR(std::abs(g.left(sp.uniform({x0, x1})) - ref), 0.0, 1e-12);
  }
}

TEST(ExactGround, EnergyPositiveAndGrowing) {
  const ReplicaModel m = predetermined(2);
  double prev = -1.0;
  for (double lambda : {0.02, 0.05, 0.1}) {
    const BiorthoGround g = exact_ground_biortho(build_enlarged_heff(m, lambda).Heff);
    EXPECT_GE(g.E.real(), 0.0);
    EXPECT_GT(g.E.real(), prev);
    EXPECT_NEAR(std::abs(g.E_left - std::conj(g.E)), 0.0, 1e-10);
    prev = g.E.real();
  }
}

TEST(ExactGround, SparsePathAgreesWithDense) {
  const ReplicaModel m = predetermined(2);
  const auto H = build_enlarged_heff(m, 0.1).Heff;
  const BiorthoGround dense = exact_ground_biortho(H);
  const BiorthoGround sparse = exact_ground_biortho(H, 65536, 16);
  EXPECT_NEAR(std::abs(dense.E - sparse.E), 0.0, 1e-10);
  const ReplicaSpace sp(2, 2);
  const double a = replica_observable(sp, dense_to_sparse(dense.right), ReplicaObservable::Fluctuation, {0}).real();
  const double b = replica_observable(sp, dense_to_sparse(sparse.right), ReplicaObservable::Fluctuation, {0}).real();
  EXPECT_NEAR(a, b, 1e-10);
  EXPECT_THROW(exact_ground_biortho(H, 100), std::length_error);
}

TEST(ExactGround, PerturbationErrorIsBeyondSecondOrder) {
  const ReplicaModel m = predetermined(2);
  const ReplicaSpace sp(2, 2);
  std::vector<double> lam = {0.02, 0.05, 0.1}, diff;
  for (double l : lam) {
    const BiorthoGround g = exact_ground_biortho(build_enlarged_heff(m, l).Heff);
    const double e = replica_observable(sp, dense_to_sparse(g.right), ReplicaObservable::EntropyLeft, {0}).real();
    const double p = observable(m, perturb_ground(m, l), ReplicaObservable::EntropyLeft, {0});
    diff.push_back(std::abs(e - p));
  }
  for (std::size_t i = 0; i < lam.size(); ++i) EXPECT_LE(diff[i], 1.0 * std::pow(lam[i], 3));
  EXPECT_GE(std::log(diff[2] / diff[0]) / std::log(lam[2] / lam[0]), 2.8);
}

// Beyond second order the exact ground state puts weight on configurations
// whose block-0 boson count differs from the pattern total.
TEST(ExactGround, NumberNonConservationAtLargerLambda) {
  const ReplicaModel m = predetermined(2);
  const BiorthoGround g = exact_ground_biortho(build_enlarged_heff(m, 0.3).Heff);
  const ReplicaSpace sp(2, 2);
  double w = 0.0;
  for (std::uint64_t c = 0; c < sp.dim(); ++c) {
    if (sp.digit(c, 0, 0) + sp.digit(c, 0, 1) != 1) w += std::norm(g.right(c));
  }
  EXPECT_GT(w, 1e-8);
}

}  // namespace
}  // namespace mipt
