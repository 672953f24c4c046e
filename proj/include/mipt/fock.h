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

#ifndef MIPT_FOCK_H_
#define MIPT_FOCK_H_

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace mipt {

using cplx = std::complex<double>;
using Rng = std::mt19937_64;
using Occupation = std::vector<int>;

/// Uniform double in [0, 1) built from the top 53 bits of one draw.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Occupation-number basis of L sites with local dimension d.
///
/// States are ordered lexicographically with site 0 most significant, so the
/// position of a tuple in the unrestricted basis equals its base-d code.
/// Sites are 0-based throughout the library.
class FockBasis {
 public:
  FockBasis(int L, int d, std::optional<int> sector = std::nullopt);

  int L() const { return L_; }
  int d() const { return d_; }
  std::optional<int> sector() const { return sector_; }
  bool is_full() const { return !sector_.has_value(); }
  std::size_t dim() const { return codes_.size(); }

  int occupation(std::size_t idx, int site) const {
    return digits_[static_cast<std::size_t>(site) * codes_.size() + idx];
  }
  /// Column of occupations of one site, indexed by basis position.
  const std::uint8_t* site_column(int site) const {
    return digits_.data() + static_cast<std::size_t>(site) * codes_.size();
  }
  int total(std::size_t idx) const { return totals_[idx]; }
  Occupation state(std::size_t idx) const;
  std::uint64_t code(std::size_t idx) const { return codes_[idx]; }
  std::uint64_t stride(int site) const { return strides_[site]; }

  std::uint64_t encode(const Occupation& occ) const;
  std::optional<std::size_t> find(const Occupation& occ) const;
  std::optional<std::size_t> find_code(std::uint64_t code) const;
  /// Position of occ; throws std::out_of_range if absent.
  std::size_t index(const Occupation& occ) const;

  /// Distinct total boson numbers present, ascending.
  const std::vector<int>& sector_values() const { return sector_values_; }
  /// Basis positions with total boson number n (empty if none).
  const std::vector<std::uint32_t>& sector_members(int n) const;

  bool operator==(const FockBasis& o) const {
    return L_ == o.L_ && d_ == o.d_ && sector_ == o.sector_;
  }

 private:
  int L_;
  int d_;
  std::optional<int> sector_;
  std::vector<std::uint64_t> codes_;
  std::vector<std::uint8_t> digits_;
  std::vector<int> totals_;
  std::vector<std::uint64_t> strides_;
  std::vector<int> sector_values_;
  std::vector<std::vector<std::uint32_t>> members_;
};

using BasisPtr = std::shared_ptr<const FockBasis>;

BasisPtr build_basis(int L, int d, std::optional<int> sector = std::nullopt);

/// Complex amplitude vector over a FockBasis.
class StateVector {
 public:
  explicit StateVector(BasisPtr basis);
  StateVector(BasisPtr basis, Eigen::VectorXcd amps);

  static StateVector product(BasisPtr basis, const Occupation& occ);

  const FockBasis& basis() const { return *basis_; }
  const BasisPtr& basis_ptr() const { return basis_; }
  Eigen::VectorXcd& amps() { return amps_; }
  const Eigen::VectorXcd& amps() const { return amps_; }

  double norm() const { return amps_.norm(); }
  /// Rescales to unit norm and returns the norm before rescaling.
  double normalize();
  /// Throws std::invalid_argument unless |norm - 1| <= tol.
  void require_normalized(double tol = 1e-8) const;

 private:
  BasisPtr basis_;
  Eigen::VectorXcd amps_;
};

/// Squared Schmidt values of the [0, cut) | [cut, L) bipartition, descending,
/// with values below 1e-14 dropped.
std::vector<double> schmidt_spectrum(const StateVector& psi, int cut);

/// Von Neumann entropy (nats) of the [0, cut) | [cut, L) bipartition.
double schmidt_entropy(const StateVector& psi, int cut);

/// (<N_A>, <N_A^2>) for the region given as a list of sites.
std::pair<double, double> number_moments(const StateVector& psi,
                                         const std::vector<int>& region);

/// <N_A^2> - <N_A>^2 on the pure state.
double number_fluctuation(const StateVector& psi, const std::vector<int>& region);

/// Sites [first, last).
std::vector<int> site_range(int first, int last);

/// Occupation tuple drawn with probability |amp|^2.
Occupation sample_configuration(const StateVector& psi, Rng& rng);

}  // namespace mipt

#endif  // MIPT_FOCK_H_
