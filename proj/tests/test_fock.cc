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
#include <fstream>
#include <map>

#include <gtest/gtest.h>

#include "mipt/fock.h"

namespace mipt {
namespace {

Eigen::VectorXcd random_amps(std::size_t n, Rng& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd v(n);
  for (std::size_t i = 0; i < n; ++i) v(i) = cplx(g(rng), g(rng));
  return v.normalized();
}

// Reduced density matrix entropy by explicit partial trace over the full basis.
double entropy_by_partial_trace(const FockBasis& b, const Eigen::VectorXcd& amps, int cut) {
  std::map<std::uint64_t, std::map<std::uint64_t, cplx>> rows;  // A code -> B code -> amp
  std::uint64_t dB = 1;
  for (int s = cut; s < b.L(); ++s) dB *= b.d();
  for (std::size_t k = 0; k < b.dim(); ++k) rows[b.code(k) / dB][b.code(k) % dB] += amps(k);
  std::uint64_t dA = 1;
  for (int s = 0; s < cut; ++s) dA *= b.d();
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dA, dA);
  for (const auto& [a1, r1] : rows) {
    for (const auto& [a2, r2] : rows) {
      cplx acc = 0.0;
      for (const auto& [bb, v] : r1) {
        auto it = r2.find(bb);
        if (it != r2.end()) acc += v * std::conj(it->second);
      }
      rho(a1, a2) = acc;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
  double S = 0.0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const double l = es.eigenvalues()(i);
    if (l > 1e-14) S -= l * std::log(l);
  }
  return S;
}

TEST(FockBasis, FullBasisIndexEqualsCode) {
  const FockBasis b(3, 3);
  ASSERT_EQ(b.dim(), 27u);
  for (std::size_t k = 0; k < b.dim(); ++k) {
    EXPECT_EQ(b.code(k), k);
    EXPECT_EQ(b.index(b.state(k)), k);
  }
  EXPECT_EQ(b.state(5), (Occupation{0, 1, 2}));
}

TEST(FockBasis, SectorDimensionsAndOrder) {
  const FockBasis b(4, 2, 2);
  EXPECT_EQ(b.dim(), 6u);
  for (std::size_t k = 1; k < b.dim(); ++k) EXPECT_LT(b.code(k - 1), b.code(k));
  for (std::size_t k = 0; k < b.dim(); ++k) EXPECT_EQ(b.total(k), 2);
  EXPECT_FALSE(b.find(Occupation{1, 1, 1, 0}).has_value());
  EXPECT_THROW(b.index(Occupation{1, 1, 1, 0}), std::out_of_range);
  // Bounded compositions of 4 into 4 parts of at most 2.
  EXPECT_EQ(FockBasis(4, 3, 4).dim(), 19u);
}

TEST(FockBasis, SectorMembersPartitionFullBasis) {
  const FockBasis b(5, 3);
  std::size_t total = 0;
  for (int n : b.sector_values()) {
    for (auto k : b.sector_members(n)) EXPECT_EQ(b.total(k), n);
    total += b.sector_members(n).size();
  }
  EXPECT_EQ(total, b.dim());
  EXPECT_TRUE(b.sector_members(99).empty());
}

TEST(FockBasis, RejectsBadArguments) {
  EXPECT_THROW(FockBasis(0, 2), std::invalid_argument);
  EXPECT_THROW(FockBasis(3, 1), std::invalid_argument);
  EXPECT_THROW(FockBasis(3, 2, 7), std::invalid_argument);
}

TEST(StateVector, ProductAndNormalize) {
  auto b = build_basis(3, 2);
  StateVector psi = StateVector::product(b, {1, 0, 1});
  EXPECT_EQ(psi.amps()(5), cplx(1.0));
  psi.amps() *= 2.0;
  EXPECT_DOUBLE_EQ(psi.normalize(), 2.0);
  EXPECT_NO_THROW(psi.require_normalized());
  EXPECT_THROW(StateVector::product(build_basis(3, 2, 1), {1, 0, 1}), std::out_of_range);
}

TEST(Schmidt, ProductStateHasZeroEntropy) {
  StateVector psi = StateVector::product(build_basis(4, 2), {1, 0, 1, 0});
  EXPECT_NEAR(schmidt_entropy(psi, 2), 0.0, 1e-14);
}

TEST(Schmidt, BellPairHasLogTwo) {
  auto b = build_basis(2, 2);
  StateVector psi(b);
  psi.amps()(b->index({1, 0})) = 1.0 / std::sqrt(2.0);
  psi.amps()(b->index({0, 1})) = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(schmidt_entropy(psi, 1), std::log(2.0), 1e-14);
  const auto spec = schmidt_spectrum(psi, 1);
  ASSERT_EQ(spec.size(), 2u);
  EXPECT_NEAR(spec[0], 0.5, 1e-14);
}

TEST(Schmidt, MatchesPartialTraceOnRandomStates) {
  Rng rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    auto b = build_basis(5, 3);
    StateVector psi(b, random_amps(b->dim(), rng));
    for (int cut = 1; cut < 5; ++cut) {
      EXPECT_NEAR(schmidt_entropy(psi, cut), entropy_by_partial_trace(*b, psi.amps(), cut), 1e-10);
    }
  }
}

TEST(Schmidt, SectorBasisAgreesWithEmbeddedFullState) {
  Rng rng(11);
  auto sector = build_basis(6, 2, 3);
  auto full = build_basis(6, 2);
  StateVector ps(sector, random_amps(sector->dim(), rng));
  StateVector pf(full);
  for (std::size_t k = 0; k < sector->dim(); ++k) pf.amps()(full->index(sector->state(k))) = ps.amps()(k);
  for (int cut = 1; cut < 6; ++cut) {
    EXPECT_NEAR(schmidt_entropy(ps, cut), schmidt_entropy(pf, cut), 1e-11);
  }
}

TEST(Schmidt, EntropyBounds) {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    auto b = build_basis(4, 3);
    StateVector psi(b, random_amps(b->dim(), rng));
    for (int cut = 1; cut < 4; ++cut) {
      const double S = schmidt_entropy(psi, cut);
      EXPECT_GE(S, -1e-14);
      EXPECT_LE(S, std::min(cut, 4 - cut) * std::log(3.0) + 1e-12);
    }
  }
}

// Late-time L = 10 predetermined state whose half-chain matrix broke a
// divide-and-conquer SVD.
TEST(Schmidt, HardHalfChainMatrix) {
  std::ifstream in(std::string(MIPT_TEST_DATA) + "/schmidt_32x32.txt");
  ASSERT_TRUE(in);
  auto b = build_basis(10, 2);
  StateVector psi(b);
  psi.amps().setZero();
  std::string line;
  std::getline(in, line);
  int row, col;
  double re, im;
  while (in >> row >> col >> re >> im) psi.amps()(row * 32 + col) = cplx(re, im);
  EXPECT_NEAR(schmidt_entropy(psi, 5), entropy_by_partial_trace(*b, psi.amps(), 5), 1e-10);
}

TEST(NumberMoments, SuperpositionOfTwoConfigurations) {
  auto b = build_basis(2, 3);
  StateVector psi(b);
  psi.amps()(b->index({2, 0})) = std::sqrt(0.25);
  psi.amps()(b->index({0, 1})) = cplx(0.0, std::sqrt(0.75));
  const auto [m1, m2] = number_moments(psi, {0});
  EXPECT_NEAR(m1, 0.5, 1e-15);
  EXPECT_NEAR(m2, 1.0, 1e-15);
  EXPECT_NEAR(number_fluctuation(psi, {0}), 0.75, 1e-15);
  EXPECT_NEAR(number_fluctuation(psi, {0, 1}), 0.1875, 1e-15);
}

TEST(Sampling, FrequenciesFollowBornRule) {
  auto b = build_basis(2, 2);
  StateVector psi(b);
  psi.amps()(1) = std::sqrt(0.2);
  psi.amps()(2) = std::sqrt(0.8);
  Rng rng(5);
  int hits = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) hits += sample_configuration(psi, rng) == Occupation{1, 0};
  EXPECT_NEAR(hits / double(n), 0.8, 4 * std::sqrt(0.16 / n));
}

}  // namespace
}  // namespace mipt
