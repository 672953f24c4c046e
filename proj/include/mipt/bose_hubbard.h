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

#ifndef MIPT_BOSE_HUBBARD_H_
#define MIPT_BOSE_HUBBARD_H_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "mipt/fock.h"

namespace mipt {

enum class Boundary { Open, Periodic };

/// Model parameters in units of the mean hopping J (times in 1/J).
struct BHParams {
  double mean_omega = 0.0;
  double mean_U = 0.0;
  double mean_J = 1.0;
  double sigma_omega = 0.0;
  double sigma_U = 0.0;
  double sigma_J = 0.0;
  Boundary boundary = Boundary::Open;

  bool disordered() const { return sigma_omega > 0 || sigma_U > 0 || sigma_J > 0; }
  void validate() const;
};

/// Per-site values. J[l] couples sites l and l+1; J[L-1] is the wrap bond.
struct SiteParams {
  std::vector<double> omega, U, J;
  bool periodic = false;
};

/// Static draw: one Gaussian sample per parameter per site.
SiteParams draw_site_params(const BHParams& params, int L, Rng* rng = nullptr);

enum class BondSet { All, Odd, Even };

/// H = sum_l [omega_l n_l - (U_l/2) n_l(n_l-1) + J_l (a+_l a_{l+1} + h.c.)].
/// Odd/Even select hopping on bonds (l, l+1) with 1-based l odd/even; on-site
/// terms are attached to the odd group, so All = Odd + Even.
Eigen::SparseMatrix<double> build_hamiltonian(const SiteParams& sp, const FockBasis& basis,
                                              BondSet bonds = BondSet::All);

Eigen::SparseMatrix<double> build_hamiltonian(const BHParams& params, const FockBasis& basis,
                                              Rng* rng = nullptr);

enum class PropagatorMode { Auto, ExactDiagonal, Krylov, Trotter1, Trotter2 };

std::string to_string(PropagatorMode m);
PropagatorMode propagator_mode_from_string(const std::string& s);

struct PropagatorOptions {
  PropagatorMode mode = PropagatorMode::Auto;
  std::size_t auto_threshold = 2048;
  double krylov_tol = 1e-12;
  int krylov_max_dim = 30;
};

/// Exact exp(-i H dt) restricted to number sectors, cached as dense blocks.
class SectorExponential {
 public:
  SectorExponential() = default;
  SectorExponential(const Eigen::SparseMatrix<double>& H, const FockBasis& basis, double dt);
  void apply(Eigen::VectorXcd& psi, Eigen::VectorXcd& work_in, Eigen::VectorXcd& work_out) const;
  std::size_t max_block() const { return max_block_; }

 private:
  struct Block {
    std::vector<std::uint32_t> members;
    Eigen::MatrixXcd U;
    Eigen::VectorXcd phases;  // used when the block is diagonal
  };
  std::vector<Block> blocks_;
  std::size_t max_block_ = 0;
};

struct KrylovFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One-step propagator exp(-i H dt) for a fixed Hamiltonian; immutable after
/// construction and safe to share across threads.
class Propagator {
 public:
  Propagator(const SiteParams& sp, BasisPtr basis, double dt, PropagatorOptions opts = {});

  /// Applies one step without renormalization.
  void apply(Eigen::VectorXcd& psi) const;

  PropagatorMode mode() const { return mode_; }
  double dt() const { return dt_; }
  const Eigen::SparseMatrix<double>& hamiltonian() const { return H_; }
  const FockBasis& basis() const { return *basis_; }

 private:
  void apply_krylov(Eigen::VectorXcd& psi) const;

  BasisPtr basis_;
  double dt_;
  PropagatorOptions opts_;
  PropagatorMode mode_;
  Eigen::SparseMatrix<double> H_;
  SectorExponential full_, odd_, even_;
};

/// psi <- exp(-i H dt) psi followed by renormalization; returns the norm
/// before renormalization.
double evolve_step(StateVector& psi, const Propagator& prop);

}  // namespace mipt

#endif  // MIPT_BOSE_HUBBARD_H_
