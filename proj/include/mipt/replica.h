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

#ifndef MIPT_REPLICA_H_
#define MIPT_REPLICA_H_

#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "mipt/bose_hubbard.h"
#include "mipt/fock.h"

namespace mipt {

/// Two-replica enlarged space of 4L sites in block-major order: blocks 0 and 1
/// hold the ket and bra of replica 1, blocks 2 and 3 those of replica 2.
/// Position q = block * L + site; position 0 is the most significant digit.
class ReplicaSpace {
 public:
  ReplicaSpace(int L, int d);

  int L() const { return L_; }
  int d() const { return d_; }
  int positions() const { return 4 * L_; }
  std::uint64_t dim() const { return dim_; }

  int digit(std::uint64_t code, int block, int site) const {
    return static_cast<int>((code / stride_[block * L_ + site]) % d_);
  }
  std::uint64_t with_digit(std::uint64_t code, int block, int site, int v) const {
    const std::uint64_t s = stride_[block * L_ + site];
    return code + (static_cast<std::int64_t>(v) - digit(code, block, site)) * s;
  }
  /// Code of the four-digit local configuration (b0, b1, b2, b3) at a site.
  int local(std::uint64_t code, int site) const;
  std::uint64_t with_local(std::uint64_t code, int site, int local_code) const;
  /// Code with every block equal to the given occupation tuple.
  std::uint64_t uniform(const Occupation& occ) const;

 private:
  int L_;
  int d_;
  std::uint64_t dim_;
  std::vector<std::uint64_t> stride_;
};

/// Measurement families of the replica construction. Projector is the single
/// non-complete operator |alpha><alpha| used as an analytic fixture.
enum class ReplicaKind { Standard, Predetermined, Projector };

struct EnlargedOperators {
  int L = 0;
  int d = 0;
  double lambda = 0.0;
  Eigen::SparseMatrix<cplx> HM;   // measurement part, in units of Gamma
  Eigen::SparseMatrix<cplx> HBH;  // W-signed Bose-Hubbard part, in units of J
  Eigen::SparseMatrix<cplx> Heff;  // HM + i lambda HBH
};

struct ReplicaModel {
  int L = 2;
  int d = 2;
  ReplicaKind kind = ReplicaKind::Predetermined;
  Occupation pattern;
  double omega = 0.0;
  double U = 0.0;
  Boundary boundary = Boundary::Open;
};

/// Sign W of each block: +1 on ket blocks 0, 2 and -1 on bra blocks 1, 3.
int block_sign(int block);

EnlargedOperators build_enlarged_heff(const ReplicaModel& model, double lambda,
                                      std::uint64_t max_dim = 65536);

/// Sparse vector over enlarged-space codes.
using SparseKet = std::map<std::uint64_t, cplx>;

/// Applies the W-signed Bose-Hubbard operator (J = 1) to a sparse vector.
SparseKet apply_hbh(const ReplicaSpace& space, const ReplicaModel& model, const SparseKet& v);

/// Single-site biorthogonal family of the unperturbed measurement operator.
///
/// Labels and configurations share the four-digit local code. The label of
/// the ground pair is (a, a, a, a) with a = alpha.
class LocalFamily {
 public:
  virtual ~LocalFamily() = default;
  /// Left-vector overlaps <phi~_label|config> that are non-zero.
  virtual void left_overlaps(int config, std::vector<std::pair<int, double>>& out) const = 0;
  /// Components <config|phi_label> that are non-zero.
  virtual void right_components(int label, std::vector<std::pair<int, double>>& out) const = 0;
  /// Unperturbed energy of the label: 0 for the ground pair, 1 otherwise.
  virtual int energy(int label) const = 0;
  virtual int ground_label() const = 0;
};

/// Right: |aaaa>, |bbbb> - |aaaa> (b != a), non-uniform |ijkl>.
/// Left: sum_x |xxxx>, |bbbb> (b != a), non-uniform |ijkl>.
std::unique_ptr<LocalFamily> predetermined_family(int d, int alpha);
/// Computational basis; ground only at (alpha, alpha, alpha, alpha).
std::unique_ptr<LocalFamily> projector_family(int d, int alpha);

/// Composite biorthogonal basis: tensor products of per-site families.
class BiorthoBasis {
 public:
  BiorthoBasis(const ReplicaModel& model);

  const ReplicaSpace& space() const { return space_; }
  const LocalFamily& family(int site) const { return *families_[site]; }
  /// Number of excited sites of a composite label.
  int energy(std::uint64_t label) const;
  std::uint64_t ground_label() const;

  /// Coefficients <Phi~_K|v> of a computational-basis vector.
  SparseKet to_biortho(const SparseKet& v) const;
  /// sum_K c_K |Phi_K> in the computational basis.
  SparseKet to_computational(const SparseKet& c) const;
  /// Right vector |Phi_K> and left vector |Phi~_K> in the computational basis.
  SparseKet right_vector(std::uint64_t label) const;
  SparseKet left_vector(std::uint64_t label) const;

 private:
  ReplicaSpace space_;
  std::vector<std::unique_ptr<LocalFamily>> families_;
};

/// Perturbed ground ket to second order in lambda, computational basis.
/// Non-normalized unless wave_renormalized is set.
SparseKet perturb_ground(const ReplicaModel& model, double lambda, bool wave_renormalized = false);

/// First-order part -i lambda R V |Phi_0> on its own.
SparseKet first_order_correction(const ReplicaModel& model, double lambda);

enum class ReplicaObservable { EntropyLeft, EntropyRight, Number, NumberSquared, Fluctuation };

/// <I|O|phi> / <I|phi> for the region (list of sites) of the original chain.
/// Entropies return -log of the permutation ratio. Throws when <I|phi> ~ 0.
cplx replica_observable(const ReplicaSpace& space, const SparseKet& ket, ReplicaObservable obs,
                        const std::vector<int>& region);

SparseKet dense_to_sparse(const Eigen::VectorXcd& v, double cutoff = 0.0);

struct BiorthoGround {
  cplx E = 0.0;
  cplx E_left = 0.0;
  Eigen::VectorXcd right;
  Eigen::VectorXcd left;
};

/// Eigenpair of Heff with minimal real part and the matching pair of Heff^+,
/// scaled so that <left|right> = 1. Dense below dense_limit, shifted inverse
/// iteration above.
BiorthoGround exact_ground_biortho(const Eigen::SparseMatrix<cplx>& Heff,
                                   std::uint64_t max_dim = 65536,
                                   std::uint64_t dense_limit = 4096);

struct ReplicaClosedForms {
  double entropy_half = 0.0;
  double fluctuation_half = 0.0;
  double n_total = 0.0;
  double n_even = 0.0;
  double n_odd = 0.0;
};

/// Second-order predictions for the alternating pattern with d = 2.
/// n_total is the pattern total, ceil(L/2). n_even and n_odd hold at sites
/// with two bonds; an open-chain edge site sees half the correction.
ReplicaClosedForms predetermined_closed_forms(int L, double lambda);

/// Second-order entropy and fluctuation for the projector fixture at d = 3
/// with every alpha = 1.
ReplicaClosedForms projector_closed_forms(int L, double lambda);

}  // namespace mipt

#endif  // MIPT_REPLICA_H_
