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

#include "mipt/bose_hubbard.h"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace mipt {

void BHParams::validate() const {
  if (!(mean_J > 0)) throw std::invalid_argument("J: must be positive");
  if (sigma_omega < 0) throw std::invalid_argument("sigma_omega: must be non-negative");
  if (sigma_U < 0) throw std::invalid_argument("sigma_U: must be non-negative");
  if (sigma_J < 0) throw std::invalid_argument("sigma_J: must be non-negative");
}

SiteParams draw_site_params(const BHParams& params, int L, Rng* rng) {
  params.validate();
  if (params.disordered() && rng == nullptr) {
    throw std::invalid_argument("draw_site_params: disorder requires an rng");
  }
  SiteParams sp;
  sp.periodic = params.boundary == Boundary::Periodic;
  sp.omega.assign(L, params.mean_omega);
  sp.U.assign(L, params.mean_U);
  sp.J.assign(L, params.mean_J);
  if (params.disordered()) {
    std::normal_distribution<double> g(0.0, 1.0);
    for (int l = 0; l < L; ++l) sp.omega[l] += params.sigma_omega * g(*rng);
    for (int l = 0; l < L; ++l) sp.U[l] += params.sigma_U * g(*rng);
    for (int l = 0; l < L; ++l) sp.J[l] += params.sigma_J * g(*rng);
  }
  if (!sp.periodic) sp.J[L - 1] = 0.0;
  return sp;
}

Eigen::SparseMatrix<double> build_hamiltonian(const SiteParams& sp, const FockBasis& basis,
                                              BondSet bonds) {
  const int L = basis.L();
  const int d = basis.d();
  if (static_cast<int>(sp.omega.size()) != L || static_cast<int>(sp.U.size()) != L ||
      static_cast<int>(sp.J.size()) != L) {
    throw std::invalid_argument("build_hamiltonian: site parameters do not match L");
  }
  std::vector<Eigen::Triplet<double>> trip;
  const bool onsite = bonds != BondSet::Even;
  const int nbonds = sp.periodic ? L : L - 1;
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    if (onsite) {
      double diag = 0.0;
      for (int l = 0; l < L; ++l) {
        const int n = basis.occupation(i, l);
        diag += sp.omega[l] * n - 0.5 * sp.U[l] * n * (n - 1);
      }
      if (diag != 0.0) trip.emplace_back(i, i, diag);
    }
    for (int b = 0; b < nbonds; ++b) {
      const bool odd_label = (b % 2) == 0;
      if (bonds == BondSet::Odd && !odd_label) continue;
      if (bonds == BondSet::Even && odd_label) continue;
      const double J = sp.J[b];
      if (J == 0.0) continue;
      const int l = b;
      const int r = (b + 1) % L;
      if (l == r) continue;
      const int nl = basis.occupation(i, l);
      const int nr = basis.occupation(i, r);
      const std::uint64_t c = basis.code(i);
      // a+_l a_r and a+_r a_l acting on state i.
      if (nr > 0 && nl < d - 1) {
        auto j = basis.find_code(c + basis.stride(l) - basis.stride(r));
        if (j) trip.emplace_back(*j, i, J * std::sqrt(double(nl + 1) * nr));
      }
      if (nl > 0 && nr < d - 1) {
        auto j = basis.find_code(c - basis.stride(l) + basis.stride(r));
        if (j) trip.emplace_back(*j, i, J * std::sqrt(double(nr + 1) * nl));
      }
    }
  }
  Eigen::SparseMatrix<double> H(basis.dim(), basis.dim());
  H.setFromTriplets(trip.begin(), trip.end());
  return H;
}

Eigen::SparseMatrix<double> build_hamiltonian(const BHParams& params, const FockBasis& basis,
                                              Rng* rng) {
  return build_hamiltonian(draw_site_params(params, basis.L(), rng), basis);
}

std::string to_string(PropagatorMode m) {
  switch (m) {
    case PropagatorMode::Auto: return "auto";
    case PropagatorMode::ExactDiagonal: return "exact";
    case PropagatorMode::Krylov: return "krylov";
    case PropagatorMode::Trotter1: return "trotter1";
    case PropagatorMode::Trotter2: return "trotter2";
  }
  return "auto";
}

PropagatorMode propagator_mode_from_string(const std::string& s) {
  if (s == "auto") return PropagatorMode::Auto;
  if (s == "exact") return PropagatorMode::ExactDiagonal;
  if (s == "krylov") return PropagatorMode::Krylov;
  if (s == "trotter1") return PropagatorMode::Trotter1;
  if (s == "trotter2") return PropagatorMode::Trotter2;
  throw std::invalid_argument("unknown propagator mode '" + s + "'");
}

SectorExponential::SectorExponential(const Eigen::SparseMatrix<double>& H, const FockBasis& basis,
                                     double dt) {
  std::vector<int> pos(basis.dim(), -1);
  for (int n : basis.sector_values()) {
    const auto& members = basis.sector_members(n);
    const Eigen::Index m = static_cast<Eigen::Index>(members.size());
    for (Eigen::Index k = 0; k < m; ++k) pos[members[k]] = static_cast<int>(k);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index k = 0; k < m; ++k) {
      for (Eigen::SparseMatrix<double>::InnerIterator it(H, members[k]); it; ++it) {
        const int row = pos[it.row()];
        if (row < 0) throw std::logic_error("SectorExponential: H mixes number sectors");
        h(row, k) = it.value();
      }
    }
    for (Eigen::Index k = 0; k < m; ++k) pos[members[k]] = -1;

    Block blk;
    blk.members = members;
    if (m == 1) {
      blk.phases = Eigen::VectorXcd::Constant(1, std::exp(cplx(0, -h(0, 0) * dt)));
    } else {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
      Eigen::VectorXcd ph(m);
      for (Eigen::Index k = 0; k < m; ++k) ph(k) = std::exp(cplx(0, -es.eigenvalues()(k) * dt));
      const Eigen::MatrixXcd V = es.eigenvectors().cast<cplx>();
      blk.U = V * ph.asDiagonal() * V.transpose();
    }
    max_block_ = std::max<std::size_t>(max_block_, members.size());
    blocks_.push_back(std::move(blk));
  }
}

void SectorExponential::apply(Eigen::VectorXcd& psi, Eigen::VectorXcd& in,
                              Eigen::VectorXcd& out) const {
  for (const Block& blk : blocks_) {
    const Eigen::Index m = static_cast<Eigen::Index>(blk.members.size());
    if (m == 1) {
      psi(blk.members[0]) *= blk.phases(0);
      continue;
    }
    in.resize(m);
    out.resize(m);
    for (Eigen::Index k = 0; k < m; ++k) in(k) = psi(blk.members[k]);
    out.noalias() = blk.U * in;
    for (Eigen::Index k = 0; k < m; ++k) psi(blk.members[k]) = out(k);
  }
}

Propagator::Propagator(const SiteParams& sp, BasisPtr basis, double dt, PropagatorOptions opts)
    : basis_(std::move(basis)), dt_(dt), opts_(opts), mode_(opts.mode) {
  if (!(dt > 0)) throw std::invalid_argument("Propagator: dt must be positive");
  H_ = build_hamiltonian(sp, *basis_);
  if (mode_ == PropagatorMode::Auto) {
    std::size_t biggest = 0;
    for (int n : basis_->sector_values()) {
      biggest = std::max(biggest, basis_->sector_members(n).size());
    }
    mode_ = biggest <= opts_.auto_threshold ? PropagatorMode::ExactDiagonal : PropagatorMode::Krylov;
  }
  switch (mode_) {
    case PropagatorMode::ExactDiagonal:
      full_ = SectorExponential(H_, *basis_, dt);
      break;
    case PropagatorMode::Trotter1:
    case PropagatorMode::Trotter2: {
      const double odd_dt = mode_ == PropagatorMode::Trotter1 ? dt : 0.5 * dt;
      odd_ = SectorExponential(build_hamiltonian(sp, *basis_, BondSet::Odd), *basis_, odd_dt);
      even_ = SectorExponential(build_hamiltonian(sp, *basis_, BondSet::Even), *basis_, dt);
      break;
    }
    default:
      break;
  }
}

void Propagator::apply(Eigen::VectorXcd& psi) const {
  thread_local Eigen::VectorXcd in, out;
  switch (mode_) {
    case PropagatorMode::ExactDiagonal:
      full_.apply(psi, in, out);
      break;
    case PropagatorMode::Trotter1:
      even_.apply(psi, in, out);
      odd_.apply(psi, in, out);
      break;
    case PropagatorMode::Trotter2:
      odd_.apply(psi, in, out);
      even_.apply(psi, in, out);
      odd_.apply(psi, in, out);
      break;
    case PropagatorMode::Krylov:
      apply_krylov(psi);
      break;
    default:
      throw std::logic_error("Propagator: unresolved mode");
  }
}

void Propagator::apply_krylov(Eigen::VectorXcd& psi) const {
  const double beta0 = psi.norm();
  if (beta0 == 0.0) return;
  const int mmax = opts_.krylov_max_dim;
  const Eigen::Index n = psi.size();
  Eigen::MatrixXcd V(n, mmax + 1);
  std::vector<double> alpha, beta;
  V.col(0) = psi / beta0;
  Eigen::VectorXcd w(n);
  for (int j = 0; j < mmax; ++j) {
    w.noalias() = H_ * V.col(j);
    alpha.push_back(V.col(j).dot(w).real());
    // Full reorthogonalization; the subspace is at most a few dozen vectors.
    for (int pass = 0; pass < 2; ++pass) {
      for (int k = 0; k <= j; ++k) w -= V.col(k).dot(w) * V.col(k);
    }
    const double b = w.norm();
    const int m = j + 1;
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
    for (int k = 0; k < m; ++k) T(k, k) = alpha[k];
    for (int k = 0; k + 1 < m; ++k) T(k, k + 1) = T(k + 1, k) = beta[k];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    Eigen::VectorXcd ph(m);
    for (int k = 0; k < m; ++k) ph(k) = std::exp(cplx(0, -es.eigenvalues()(k) * dt_));
    const Eigen::MatrixXcd Q = es.eigenvectors().cast<cplx>();
    const Eigen::VectorXcd y = Q * ph.asDiagonal() * Q.row(0).transpose();
    const double err = beta0 * b * std::abs(y(m - 1));
    if (err < opts_.krylov_tol || b < 1e-14) {
      psi.noalias() = beta0 * (V.leftCols(m) * y);
      return;
    }
    beta.push_back(b);
    V.col(j + 1) = w / b;
  }
  throw KrylovFailure("krylov propagation did not converge within " + std::to_string(mmax) +
                      " vectors");
}

double evolve_step(StateVector& psi, const Propagator& prop) {
  prop.apply(psi.amps());
  return psi.normalize();
}

}  // namespace mipt
