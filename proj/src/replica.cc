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

#include "mipt/replica.h"

#include <cmath>
#include <functional>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>

namespace mipt {

ReplicaSpace::ReplicaSpace(int L, int d) : L_(L), d_(d) {
  if (L < 1 || d < 2) throw std::invalid_argument("ReplicaSpace: need L >= 1 and d >= 2");
  long double full = 1;
  for (int q = 0; q < 4 * L; ++q) full *= d;
  if (full > 1.8e19L) throw std::length_error("ReplicaSpace: d^(4L) does not fit in 64 bits");
  dim_ = static_cast<std::uint64_t>(full);
  stride_.assign(4 * L, 1);
  for (int q = 4 * L - 2; q >= 0; --q) stride_[q] = stride_[q + 1] * d;
}

int ReplicaSpace::local(std::uint64_t code, int site) const {
  int lc = 0;
  for (int b = 0; b < 4; ++b) lc = lc * d_ + digit(code, b, site);
  return lc;
}

std::uint64_t ReplicaSpace::with_local(std::uint64_t code, int site, int local_code) const {
  for (int b = 3; b >= 0; --b) {
    code = with_digit(code, b, site, local_code % d_);
    local_code /= d_;
  }
  return code;
}

std::uint64_t ReplicaSpace::uniform(const Occupation& occ) const {
  if (static_cast<int>(occ.size()) != L_) throw std::invalid_argument("ReplicaSpace: bad tuple");
  std::uint64_t code = 0;
  for (int b = 0; b < 4; ++b) {
    for (int s = 0; s < L_; ++s) code += static_cast<std::uint64_t>(occ[s]) * stride_[b * L_ + s];
  }
  return code;
}

int block_sign(int block) { return (block % 2 == 0) ? 1 : -1; }

namespace {

int uniform_value(int local_code, int d) {
  const int v = local_code % d;
  int c = local_code;
  for (int b = 0; b < 4; ++b) {
    if (c % d != v) return -1;
    c /= d;
  }
  return v;
}

int uniform_local(int v, int d) { return ((v * d + v) * d + v) * d + v; }

void validate_model(const ReplicaModel& m) {
  if (m.kind != ReplicaKind::Standard) {
    if (static_cast<int>(m.pattern.size()) != m.L) {
      throw std::invalid_argument("ReplicaModel: pattern must have L entries");
    }
    for (int a : m.pattern) {
      if (a < 0 || a >= m.d) throw std::invalid_argument("ReplicaModel: pattern entry outside [0, d-1]");
    }
  }
}

/// Calls f(target, value) for every non-zero element <target|HBH|code>.
template <typename F>
void for_each_hbh_term(const ReplicaSpace& sp, const ReplicaModel& m, std::uint64_t code, F&& f) {
  const int L = sp.L(), d = sp.d();
  const int nbonds = (m.boundary == Boundary::Periodic && L > 2) ? L : L - 1;
  for (int b = 0; b < 4; ++b) {
    const double W = block_sign(b);
    double diag = 0.0;
    for (int l = 0; l < L; ++l) {
      const int n = sp.digit(code, b, l);
      diag += m.omega * n - 0.5 * m.U * n * (n - 1);
    }
    if (diag != 0.0) f(code, W * diag);
    for (int bond = 0; bond < nbonds; ++bond) {
      const int l = bond, r = (bond + 1) % L;
      const int nl = sp.digit(code, b, l), nr = sp.digit(code, b, r);
      if (nr > 0 && nl < d - 1) {
        const std::uint64_t t = sp.with_digit(sp.with_digit(code, b, l, nl + 1), b, r, nr - 1);
        f(t, W * std::sqrt(double(nl + 1) * nr));
      }
      if (nl > 0 && nr < d - 1) {
        const std::uint64_t t = sp.with_digit(sp.with_digit(code, b, l, nl - 1), b, r, nr + 1);
        f(t, W * std::sqrt(double(nr + 1) * nl));
      }
    }
  }
}

class PredeterminedFamily : public LocalFamily {
 public:
  PredeterminedFamily(int d, int alpha) : d_(d), ground_(uniform_local(alpha, d)) {}
  void left_overlaps(int config, std::vector<std::pair<int, double>>& out) const override {
    out.clear();
    if (uniform_value(config, d_) >= 0) out.emplace_back(ground_, 1.0);
    if (config != ground_) out.emplace_back(config, 1.0);
  }
  void right_components(int label, std::vector<std::pair<int, double>>& out) const override {
    out.clear();
    out.emplace_back(label, 1.0);
    if (label != ground_ && uniform_value(label, d_) >= 0) out.emplace_back(ground_, -1.0);
  }
  int energy(int label) const override { return label == ground_ ? 0 : 1; }
  int ground_label() const override { return ground_; }

 private:
  int d_;
  int ground_;
};

class ProjectorFamily : public LocalFamily {
 public:
  ProjectorFamily(int d, int alpha) : ground_(uniform_local(alpha, d)) {}
  void left_overlaps(int config, std::vector<std::pair<int, double>>& out) const override {
    out.assign(1, {config, 1.0});
  }
  void right_components(int label, std::vector<std::pair<int, double>>& out) const override {
    out.assign(1, {label, 1.0});
  }
  int energy(int label) const override { return label == ground_ ? 0 : 1; }
  int ground_label() const override { return ground_; }

 private:
  int ground_;
};

void add_to(SparseKet& v, std::uint64_t code, cplx a) {
  auto [it, inserted] = v.try_emplace(code, a);
  if (!inserted) it->second += a;
}

}  // namespace

EnlargedOperators build_enlarged_heff(const ReplicaModel& model, double lambda,
                                      std::uint64_t max_dim) {
  validate_model(model);
  const ReplicaSpace sp(model.L, model.d);
  if (sp.dim() > max_dim) throw std::length_error("build_enlarged_heff: dimension above cap");
  const int L = model.L, d = model.d;
  std::vector<Eigen::Triplet<cplx>> tm, tb;
  for (std::uint64_t c = 0; c < sp.dim(); ++c) {
    tm.emplace_back(c, c, static_cast<double>(L));
    for (int l = 0; l < L; ++l) {
      const int v = uniform_value(sp.local(c, l), d);
      if (v < 0) continue;
      switch (model.kind) {
        case ReplicaKind::Standard:
          tm.emplace_back(c, c, -1.0);
          break;
        case ReplicaKind::Predetermined:
          tm.emplace_back(sp.with_local(c, l, uniform_local(model.pattern[l], d)), c, -1.0);
          break;
        case ReplicaKind::Projector:
          if (v == model.pattern[l]) tm.emplace_back(c, c, -1.0);
          break;
      }
    }
    for_each_hbh_term(sp, model, c, [&](std::uint64_t t, double val) { tb.emplace_back(t, c, val); });
  }
  EnlargedOperators ops;
  ops.L = L;
  ops.d = d;
  ops.lambda = lambda;
  ops.HM.resize(sp.dim(), sp.dim());
  ops.HM.setFromTriplets(tm.begin(), tm.end());
  ops.HM.prune(cplx(0.0));
  ops.HBH.resize(sp.dim(), sp.dim());
  ops.HBH.setFromTriplets(tb.begin(), tb.end());
  ops.Heff = ops.HM + cplx(0.0, lambda) * ops.HBH;
  return ops;
}

SparseKet apply_hbh(const ReplicaSpace& space, const ReplicaModel& model, const SparseKet& v) {
  SparseKet out;
  for (const auto& [code, a] : v) {
    if (a == cplx(0.0)) continue;
    for_each_hbh_term(space, model, code, [&](std::uint64_t t, double val) { add_to(out, t, a * val); });
  }
  return out;
}

std::unique_ptr<LocalFamily> predetermined_family(int d, int alpha) {
  return std::make_unique<PredeterminedFamily>(d, alpha);
}

std::unique_ptr<LocalFamily> projector_family(int d, int alpha) {
  return std::make_unique<ProjectorFamily>(d, alpha);
}

BiorthoBasis::BiorthoBasis(const ReplicaModel& model) : space_(model.L, model.d) {
  validate_model(model);
  if (model.kind == ReplicaKind::Standard) {
    throw std::invalid_argument("BiorthoBasis: standard measurements have a degenerate ground space");
  }
  for (int l = 0; l < model.L; ++l) {
    families_.push_back(model.kind == ReplicaKind::Predetermined
                            ? predetermined_family(model.d, model.pattern[l])
                            : projector_family(model.d, model.pattern[l]));
  }
}

int BiorthoBasis::energy(std::uint64_t label) const {
  int e = 0;
  for (int l = 0; l < space_.L(); ++l) e += families_[l]->energy(space_.local(label, l));
  return e;
}

std::uint64_t BiorthoBasis::ground_label() const {
  std::uint64_t code = 0;
  for (int l = 0; l < space_.L(); ++l) code = space_.with_local(code, l, families_[l]->ground_label());
  return code;
}

namespace {

using SiteMap = std::function<void(const LocalFamily&, int, std::vector<std::pair<int, double>>&)>;

SparseKet expand(const ReplicaSpace& sp, const std::vector<std::unique_ptr<LocalFamily>>& fam,
                 const SparseKet& v, const SiteMap& site_map) {
  SparseKet out;
  std::vector<std::pair<std::uint64_t, double>> partial, next;
  std::vector<std::pair<int, double>> local;
  for (const auto& [code, a] : v) {
    if (a == cplx(0.0)) continue;
    partial.assign(1, {code, 1.0});
    for (int l = 0; l < sp.L(); ++l) {
      site_map(*fam[l], sp.local(code, l), local);
      next.clear();
      for (const auto& [pc, pw] : partial) {
        for (const auto& [lc, lw] : local) next.emplace_back(sp.with_local(pc, l, lc), pw * lw);
      }
      partial.swap(next);
    }
    for (const auto& [pc, pw] : partial) add_to(out, pc, a * pw);
  }
  return out;
}

}  // namespace

SparseKet BiorthoBasis::to_biortho(const SparseKet& v) const {
  return expand(space_, families_, v, [](const LocalFamily& f, int c, auto& out) { f.left_overlaps(c, out); });
}

SparseKet BiorthoBasis::to_computational(const SparseKet& c) const {
  return expand(space_, families_, c,
                [](const LocalFamily& f, int k, auto& out) { f.right_components(k, out); });
}

SparseKet BiorthoBasis::right_vector(std::uint64_t label) const {
  return to_computational(SparseKet{{label, 1.0}});
}

SparseKet BiorthoBasis::left_vector(std::uint64_t label) const {
  // The left vector has components <config|phi~_K> = <phi~_K|config>, all real.
  SparseKet out;
  std::vector<std::pair<std::uint64_t, double>> partial(1, {0, 1.0}), next;
  std::vector<std::pair<int, double>> local;
  for (int l = 0; l < space_.L(); ++l) {
    const int k = space_.local(label, l);
    next.clear();
    const int nloc = space_.d() * space_.d() * space_.d() * space_.d();
    for (int c = 0; c < nloc; ++c) {
      families_[l]->left_overlaps(c, local);
      for (const auto& [lab, w] : local) {
        if (lab != k) continue;
        for (const auto& [pc, pw] : partial) next.emplace_back(space_.with_local(pc, l, c), pw * w);
      }
    }
    partial.swap(next);
  }
  for (const auto& [pc, pw] : partial) add_to(out, pc, pw);
  return out;
}

namespace {

SparseKet resolvent(const BiorthoBasis& basis, const SparseKet& c) {
  SparseKet out;
  for (const auto& [label, a] : c) {
    const int e = basis.energy(label);
    if (e == 0) continue;
    out.emplace(label, a / static_cast<double>(e));
  }
  return out;
}

}  // namespace

SparseKet first_order_correction(const ReplicaModel& model, double lambda) {
  const BiorthoBasis basis(model);
  const SparseKet phi0 = basis.right_vector(basis.ground_label());
  const SparseKet r1 = resolvent(basis, basis.to_biortho(apply_hbh(basis.space(), model, phi0)));
  SparseKet out;
  for (const auto& [k, a] : r1) out.emplace(k, cplx(0.0, -lambda) * a);
  return basis.to_computational(out);
}

SparseKet perturb_ground(const ReplicaModel& model, double lambda, bool wave_renormalized) {
  const BiorthoBasis basis(model);
  const ReplicaSpace& sp = basis.space();
  const std::uint64_t g = basis.ground_label();
  const SparseKet phi0 = basis.right_vector(g);

  const SparseKet a = basis.to_biortho(apply_hbh(sp, model, phi0));
  cplx v00 = 0.0;
  if (auto it = a.find(g); it != a.end()) v00 = it->second;
  const SparseKet r1 = resolvent(basis, a);
  const SparseKet b = basis.to_biortho(apply_hbh(sp, model, basis.to_computational(r1)));
  const SparseKet r2 = resolvent(basis, b);
  const SparseKet r1sq = resolvent(basis, r1);

  const double l2 = lambda * lambda;
  cplx ground_coef = 1.0;
  if (wave_renormalized) {
    const SparseKet w = apply_hbh(sp, model, basis.left_vector(g));
    cplx sum = 0.0;
    for (const auto& [n, vn0] : a) {
      if (n == g) continue;
      cplx vn_left = 0.0;
      for (const auto& [c, rc] : basis.right_vector(n)) {
        if (auto it = w.find(c); it != w.end()) vn_left += std::conj(rc) * it->second;
      }
      const double e = basis.energy(n);
      sum += std::conj(vn_left) * vn0 / (e * e);
    }
    ground_coef += 0.5 * l2 * sum;
  }

  SparseKet coef;
  add_to(coef, g, ground_coef);
  for (const auto& [k, x] : r1) add_to(coef, k, cplx(0.0, -lambda) * x);
  for (const auto& [k, x] : r2) add_to(coef, k, -l2 * x);
  for (const auto& [k, x] : r1sq) add_to(coef, k, l2 * v00 * x);
  return basis.to_computational(coef);
}

cplx replica_observable(const ReplicaSpace& space, const SparseKet& ket, ReplicaObservable obs,
                        const std::vector<int>& region) {
  const int L = space.L();
  for (int s : region) {
    if (s < 0 || s >= L) throw std::invalid_argument("replica_observable: site outside chain");
  }
  auto in_reference = [&](std::uint64_t c) {
    for (int l = 0; l < L; ++l) {
      if (space.digit(c, 0, l) != space.digit(c, 1, l)) return false;
      if (space.digit(c, 2, l) != space.digit(c, 3, l)) return false;
    }
    return true;
  };
  auto region_number = [&](std::uint64_t c, int block) {
    int n = 0;
    for (int s : region) n += space.digit(c, block, s);
    return n;
  };
  auto swapped = [&](std::uint64_t c, int b1, int b2) {
    for (int s : region) {
      const int x = space.digit(c, b1, s), y = space.digit(c, b2, s);
      c = space.with_digit(space.with_digit(c, b1, s, y), b2, s, x);
    }
    return c;
  };
  cplx z = 0.0, num = 0.0;
  for (const auto& [c, a] : ket) {
    if (a == cplx(0.0)) continue;
    const bool ref = in_reference(c);
    if (ref) z += a;
    switch (obs) {
      case ReplicaObservable::EntropyLeft:
        if (in_reference(swapped(c, 0, 2))) num += a;
        break;
      case ReplicaObservable::EntropyRight:
        if (in_reference(swapped(c, 1, 3))) num += a;
        break;
      case ReplicaObservable::Number:
        if (ref) num += a * static_cast<double>(region_number(c, 0));
        break;
      case ReplicaObservable::NumberSquared:
        if (ref) {
          const double n = region_number(c, 0);
          num += a * n * n;
        }
        break;
      case ReplicaObservable::Fluctuation:
        if (ref) {
          const double n1 = region_number(c, 0), n2 = region_number(c, 2);
          num += a * (n1 * n1 - n1 * n2);
        }
        break;
    }
  }
  if (std::abs(z) < 1e-300) throw std::domain_error("replica_observable: <I|phi> vanishes");
  const cplx ratio = num / z;
  if (obs == ReplicaObservable::EntropyLeft || obs == ReplicaObservable::EntropyRight) {
    return -std::log(ratio);
  }
  return ratio;
}

SparseKet dense_to_sparse(const Eigen::VectorXcd& v, double cutoff) {
  SparseKet out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > cutoff) out.emplace(static_cast<std::uint64_t>(i), v(i));
  }
  return out;
}

namespace {

Eigen::Index min_real_index(const Eigen::VectorXcd& ev) {
  Eigen::Index k = 0;
  for (Eigen::Index i = 1; i < ev.size(); ++i) {
    if (ev(i).real() < ev(k).real()) k = i;
  }
  return k;
}

Eigen::VectorXcd inverse_iteration(const Eigen::SparseMatrix<cplx>& A, cplx shift,
                                   Eigen::VectorXcd x) {
  Eigen::SparseMatrix<cplx> S = A;
  for (Eigen::Index i = 0; i < S.rows(); ++i) S.coeffRef(i, i) -= shift;
  S.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<cplx>> lu;
  lu.compute(S);
  if (lu.info() != Eigen::Success) throw std::runtime_error("exact_ground_biortho: factorization failed");
  x.normalize();
  for (int it = 0; it < 500; ++it) {
    Eigen::VectorXcd y = lu.solve(x);
    y.normalize();
    const cplx phase = y.dot(x);
    if (std::abs(phase) > 0) y *= std::conj(phase) / std::abs(phase);
    const double diff = (y - x).norm();
    x = y;
    if (diff < 1e-14) break;
  }
  return x;
}

}  // namespace

BiorthoGround exact_ground_biortho(const Eigen::SparseMatrix<cplx>& Heff, std::uint64_t max_dim,
                                   std::uint64_t dense_limit) {
  const std::uint64_t n = static_cast<std::uint64_t>(Heff.rows());
  if (n > max_dim) throw std::length_error("exact_ground_biortho: dimension " + std::to_string(n) + " above cap");
  BiorthoGround g;
  const Eigen::SparseMatrix<cplx> Hadj = Heff.adjoint();
  if (n < dense_limit) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es{Eigen::MatrixXcd(Heff)};
    const Eigen::Index k = min_real_index(es.eigenvalues());
    g.E = es.eigenvalues()(k);
    g.right = es.eigenvectors().col(k);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es2{Eigen::MatrixXcd(Hadj)};
    Eigen::Index k2 = 0;
    for (Eigen::Index i = 1; i < es2.eigenvalues().size(); ++i) {
      if (std::abs(es2.eigenvalues()(i) - std::conj(g.E)) <
          std::abs(es2.eigenvalues()(k2) - std::conj(g.E))) {
        k2 = i;
      }
    }
    g.E_left = es2.eigenvalues()(k2);
    g.left = es2.eigenvectors().col(k2);
  } else {
    const cplx shift(-0.5, 0.0);
    g.right = inverse_iteration(Heff, shift, Eigen::VectorXcd::Ones(n));
    g.E = g.right.dot(Heff * g.right) / g.right.squaredNorm();
    g.left = inverse_iteration(Hadj, std::conj(shift), Eigen::VectorXcd::Ones(n));
    g.E_left = g.left.dot(Hadj * g.left) / g.left.squaredNorm();
  }
  if (std::abs(g.E_left - std::conj(g.E)) > 1e-8 * std::max(1.0, std::abs(g.E))) {
    throw std::runtime_error("exact_ground_biortho: left eigenvalue is not the conjugate");
  }
  g.right.normalize();
  const cplx ov = g.left.dot(g.right);
  if (std::abs(ov) < 1e-300) throw std::runtime_error("exact_ground_biortho: left and right orthogonal");
  g.left *= 1.0 / std::conj(ov);
  return g;
}

ReplicaClosedForms predetermined_closed_forms(int L, double lambda) {
  const double l2 = lambda * lambda;
  const double den = 1.0 + (L - 1) * l2;
  ReplicaClosedForms r;
  r.entropy_half = -std::log(1.0 - l2 / den);
  r.fluctuation_half = 0.5 * l2 / den;
  r.n_total = (L + 1) / 2;
  r.n_even = l2 / den;
  r.n_odd = 1.0 - r.n_even;
  return r;
}

ReplicaClosedForms projector_closed_forms(int L, double lambda) {
  const double l2 = lambda * lambda;
  const double den = 1.0 + 4.0 * (L - 1) * l2;
  ReplicaClosedForms r;
  r.entropy_half = -std::log(1.0 - 4.0 * l2 / den);
  r.fluctuation_half = 2.0 * l2 / den;
  r.n_total = L;
  return r;
}

}  // namespace mipt
