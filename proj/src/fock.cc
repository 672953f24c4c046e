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

#include "mipt/fock.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

#include <Eigen/SVD>

namespace mipt {

namespace {

constexpr std::uint64_t kMaxBasisDim = std::uint64_t{1} << 28;
constexpr double kSchmidtCutoff = 1e-14;

void enumerate_sector(int L, int d, int site, int remaining, std::uint64_t code,
                      const std::vector<std::uint64_t>& strides,
                      std::vector<std::uint64_t>& out) {
  if (site == L) {
    if (remaining == 0) out.push_back(code);
    return;
  }
  const int sites_left = L - site - 1;
  for (int v = 0; v < d; ++v) {
    const int rest = remaining - v;
    if (rest < 0) break;
    if (rest > sites_left * (d - 1)) continue;
    enumerate_sector(L, d, site + 1, rest, code + v * strides[site], strides, out);
  }
}

}  // namespace

FockBasis::FockBasis(int L, int d, std::optional<int> sector)
    : L_(L), d_(d), sector_(sector) {
  if (L < 1) throw std::invalid_argument("FockBasis: L must be positive");
  if (d < 2 || d > 255) throw std::invalid_argument("FockBasis: d must be in [2, 255]");
  if (sector && (*sector < 0 || *sector > L * (d - 1))) {
    throw std::invalid_argument("FockBasis: sector " + std::to_string(*sector) +
                                " outside [0, " + std::to_string(L * (d - 1)) + "]");
  }
  strides_.assign(L, 1);
  long double full = 1;
  for (int i = 0; i < L; ++i) full *= d;
  if (full > 1.8e19L) throw std::length_error("FockBasis: d^L does not fit in 64 bits");
  for (int s = L - 2; s >= 0; --s) strides_[s] = strides_[s + 1] * d;

  if (sector) {
    enumerate_sector(L, d, 0, *sector, 0, strides_, codes_);
    if (codes_.empty()) throw std::invalid_argument("FockBasis: empty sector");
  } else {
    if (full > static_cast<long double>(kMaxBasisDim)) {
      throw std::length_error("FockBasis: unrestricted basis too large");
    }
    codes_.resize(static_cast<std::size_t>(full));
    for (std::size_t i = 0; i < codes_.size(); ++i) codes_[i] = i;
  }
  if (codes_.size() > kMaxBasisDim) throw std::length_error("FockBasis: sector too large");

  const std::size_t n = codes_.size();
  digits_.resize(n * L);
  totals_.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t c = codes_[i];
    for (int s = L - 1; s >= 0; --s) {
      const int v = static_cast<int>(c % d);
      c /= d;
      digits_[static_cast<std::size_t>(s) * n + i] = static_cast<std::uint8_t>(v);
      totals_[i] += v;
    }
  }
  members_.resize(L * (d - 1) + 1);
  for (std::size_t i = 0; i < n; ++i) members_[totals_[i]].push_back(static_cast<std::uint32_t>(i));
  for (int t = 0; t < static_cast<int>(members_.size()); ++t) {
    if (!members_[t].empty()) sector_values_.push_back(t);
  }
}

Occupation FockBasis::state(std::size_t idx) const {
  Occupation occ(L_);
  for (int s = 0; s < L_; ++s) occ[s] = occupation(idx, s);
  return occ;
}

std::uint64_t FockBasis::encode(const Occupation& occ) const {
  if (static_cast<int>(occ.size()) != L_) {
    throw std::invalid_argument("FockBasis: occupation tuple has wrong length");
  }
  std::uint64_t c = 0;
  for (int s = 0; s < L_; ++s) {
    if (occ[s] < 0 || occ[s] >= d_) {
      throw std::invalid_argument("FockBasis: occupation outside [0, d-1]");
    }
    c += static_cast<std::uint64_t>(occ[s]) * strides_[s];
  }
  return c;
}

std::optional<std::size_t> FockBasis::find_code(std::uint64_t code) const {
  if (is_full()) {
    if (code < codes_.size()) return static_cast<std::size_t>(code);
    return std::nullopt;
  }
  auto it = std::lower_bound(codes_.begin(), codes_.end(), code);
  if (it == codes_.end() || *it != code) return std::nullopt;
  return static_cast<std::size_t>(it - codes_.begin());
}

std::optional<std::size_t> FockBasis::find(const Occupation& occ) const {
  if (static_cast<int>(occ.size()) != L_) return std::nullopt;
  for (int v : occ) {
    if (v < 0 || v >= d_) return std::nullopt;
  }
  return find_code(encode(occ));
}

std::size_t FockBasis::index(const Occupation& occ) const {
  auto i = find(occ);
  if (!i) throw std::out_of_range("FockBasis: occupation tuple not in basis");
  return *i;
}

const std::vector<std::uint32_t>& FockBasis::sector_members(int n) const {
  static const std::vector<std::uint32_t> kEmpty;
  if (n < 0 || n >= static_cast<int>(members_.size())) return kEmpty;
  return members_[n];
}

BasisPtr build_basis(int L, int d, std::optional<int> sector) {
  return std::make_shared<const FockBasis>(L, d, sector);
}

StateVector::StateVector(BasisPtr basis)
    : basis_(std::move(basis)), amps_(Eigen::VectorXcd::Zero(basis_->dim())) {}

StateVector::StateVector(BasisPtr basis, Eigen::VectorXcd amps)
    : basis_(std::move(basis)), amps_(std::move(amps)) {
  if (static_cast<std::size_t>(amps_.size()) != basis_->dim()) {
    throw std::invalid_argument("StateVector: amplitude count does not match basis");
  }
}

StateVector StateVector::product(BasisPtr basis, const Occupation& occ) {
  StateVector psi(std::move(basis));
  psi.amps_(static_cast<Eigen::Index>(psi.basis_->index(occ))) = 1.0;
  return psi;
}

double StateVector::normalize() {
  const double n = amps_.norm();
  if (!(n > 0)) throw std::domain_error("StateVector: cannot normalize zero vector");
  amps_ /= n;
  return n;
}

void StateVector::require_normalized(double tol) const {
  const double n = amps_.norm();
  if (std::abs(n - 1.0) > tol) {
    throw std::invalid_argument("StateVector: state is not normalized (norm " +
                                std::to_string(n) + ")");
  }
}

std::vector<double> schmidt_spectrum(const StateVector& psi, int cut) {
  const FockBasis& b = psi.basis();
  if (cut < 1 || cut >= b.L()) throw std::invalid_argument("schmidt_spectrum: cut outside [1, L-1]");
  psi.require_normalized();
  const std::uint64_t right = b.stride(cut - 1);
  std::vector<double> lambdas;
  auto append = [&](const Eigen::MatrixXcd& m) {
    if (m.size() == 0) return;
    // BDCSVD in Eigen 3.4.0 indexes out of bounds on some 32x32 inputs.
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k) {
      const double s = svd.singularValues()(k);
      if (s * s >= kSchmidtCutoff) lambdas.push_back(s * s);
    }
  };

  if (b.is_full()) {
    const std::uint64_t rows = b.dim() / right;
    Eigen::MatrixXcd m(rows, right);
    for (std::size_t i = 0; i < b.dim(); ++i) {
      m(i / right, i % right) = psi.amps()(i);
    }
    append(m);
  } else {
    // Fixed total number: the matrix is block diagonal in N_A.
    const int max_na = cut * (b.d() - 1);
    std::vector<std::unordered_map<std::uint64_t, int>> rows(max_na + 1), cols(max_na + 1);
    std::vector<int> na(b.dim());
    for (std::size_t i = 0; i < b.dim(); ++i) {
      int n = 0;
      for (int s = 0; s < cut; ++s) n += b.occupation(i, s);
      na[i] = n;
      const std::uint64_t c = b.code(i);
      rows[n].try_emplace(c / right, static_cast<int>(rows[n].size()));
      cols[n].try_emplace(c % right, static_cast<int>(cols[n].size()));
    }
    for (int n = 0; n <= max_na; ++n) {
      if (rows[n].empty()) continue;
      Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(rows[n].size(), cols[n].size());
      for (std::size_t i = 0; i < b.dim(); ++i) {
        if (na[i] != n) continue;
        const std::uint64_t c = b.code(i);
        m(rows[n].at(c / right), cols[n].at(c % right)) = psi.amps()(i);
      }
      append(m);
    }
  }
  std::sort(lambdas.begin(), lambdas.end(), std::greater<>());
  return lambdas;
}

double schmidt_entropy(const StateVector& psi, int cut) {
  double s = 0.0;
  for (double l : schmidt_spectrum(psi, cut)) s -= l * std::log(l);
  return s;
}

std::pair<double, double> number_moments(const StateVector& psi, const std::vector<int>& region) {
  const FockBasis& b = psi.basis();
  for (int s : region) {
    if (s < 0 || s >= b.L()) throw std::invalid_argument("number_moments: site outside chain");
  }
  double m1 = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < b.dim(); ++i) {
    const double w = std::norm(psi.amps()(i));
    if (w == 0.0) continue;
    int n = 0;
    for (int s : region) n += b.occupation(i, s);
    m1 += w * n;
    m2 += w * n * n;
  }
  return {m1, m2};
}

double number_fluctuation(const StateVector& psi, const std::vector<int>& region) {
  auto [m1, m2] = number_moments(psi, region);
  return m2 - m1 * m1;
}

std::vector<int> site_range(int first, int last) {
  std::vector<int> r;
  for (int s = first; s < last; ++s) r.push_back(s);
  return r;
}

Occupation sample_configuration(const StateVector& psi, Rng& rng) {
  const FockBasis& b = psi.basis();
  const double u = uniform01(rng) * psi.amps().squaredNorm();
  double acc = 0.0;
  std::size_t last_nonzero = 0;
  for (std::size_t i = 0; i < b.dim(); ++i) {
    const double w = std::norm(psi.amps()(i));
    if (w == 0.0) continue;
    last_nonzero = i;
    acc += w;
    if (u < acc) return b.state(i);
  }
  return b.state(last_nonzero);
}

}  // namespace mipt
