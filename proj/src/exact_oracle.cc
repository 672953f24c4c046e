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

#include "mipt/exact_oracle.h"

#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

namespace mipt {

namespace {

struct Sums {
  double w = 0.0, w2 = 0.0;
  // Per observable: sum w O, sum w O^2, sum w2 O, sum w2 O^2.
  std::array<std::array<double, 4>, 5> obs{};
  std::vector<std::vector<double>> joint;
  std::vector<double> mid_left, mid_right;
  double pruned = 0.0;
  std::uint64_t leaves = 0;

  Sums(int L, int d)
      : joint(L * (d - 1) + 1, std::vector<double>(L / 2 * (d - 1) + 1, 0.0)),
        mid_left(d, 0.0),
        mid_right(d, 0.0) {}

  void merge(const Sums& o) {
    w += o.w;
    w2 += o.w2;
    for (std::size_t i = 0; i < obs.size(); ++i) {
      for (std::size_t k = 0; k < 4; ++k) obs[i][k] += o.obs[i][k];
    }
    for (std::size_t i = 0; i < joint.size(); ++i) {
      for (std::size_t j = 0; j < joint[i].size(); ++j) joint[i][j] += o.joint[i][j];
    }
    for (std::size_t i = 0; i < mid_left.size(); ++i) {
      mid_left[i] += o.mid_left[i];
      mid_right[i] += o.mid_right[i];
    }
    pruned += o.pruned;
    leaves += o.leaves;
  }
};

struct Node {
  StateVector psi;
  int step;
  int site;
  double w;
  double w2;
};

class Enumerator {
 public:
  Enumerator(const TrajectoryEngine& engine, const OracleOptions& opts)
      : engine_(engine), c_(engine.config()), opts_(opts), nsteps_(c_.steps()) {}

  /// Children of a node that sits before the decision on (step, site).
  void expand(const Node& n, std::vector<Node>& out, Sums& s) const {
    const double p = c_.measurement.p;
    int step = n.step, site = n.site;
    int next_site = site + 1, next_step = step;
    if (next_site == c_.L) {
      next_site = 0;
      ++next_step;
    }
    auto push = [&](StateVector psi, double w, double w2) {
      if (w < opts_.prune_below) {
        s.pruned += w;
        return;
      }
      if (next_site == 0 && next_step < nsteps_) evolve_step(psi, engine_.propagator());
      out.push_back(Node{std::move(psi), next_step, next_site, w, w2});
    };
    if (p < 1.0) push(n.psi, n.w * (1.0 - p), n.w2 * (1.0 - p));
    if (p <= 0.0) return;
    const std::vector<double> probs = outcome_probabilities(n.psi, site);
    for (int m = 0; m < c_.d; ++m) {
      const double wm = n.w * p * probs[m];
      if (probs[m] < 1e-14 || wm < opts_.prune_below) {
        s.pruned += wm;
        continue;
      }
      StateVector psi = n.psi;
      project_site(psi, site, m);
      if (c_.measurement.kind == MeasurementKind::Predetermined) {
        relabel_site(psi, site, m, c_.measurement.pattern[site]);
      }
      push(std::move(psi), wm, n.w2 * p * probs[m] * probs[m]);
    }
  }

  void leaf(const Node& n, Sums& s) const {
    ++s.leaves;
    if (counter_.fetch_add(1) + 1 > opts_.max_branches) {
      std::ostringstream msg;
      msg << "enumerate_trajectories: more than " << opts_.max_branches
          << " branches (upper-bound estimate " << branch_count_estimate(c_) << ")";
      throw BranchLimitExceeded(msg.str(), branch_count_estimate(c_));
    }
    const StateVector& psi = n.psi;
    const int L = c_.L;
    const std::vector<int> half = site_range(0, L / 2);
    const auto [m1, m2] = number_moments(psi, half);
    const double vals[5] = {m1, m2, schmidt_entropy(psi, L / 2), m2 - m1 * m1,
                            number_moments(psi, site_range(0, L)).first};
    s.w += n.w;
    s.w2 += n.w2;
    for (int i = 0; i < 5; ++i) {
      s.obs[i][0] += n.w * vals[i];
      s.obs[i][1] += n.w * vals[i] * vals[i];
      s.obs[i][2] += n.w2 * vals[i];
      s.obs[i][3] += n.w2 * vals[i] * vals[i];
    }
    const FockBasis& b = psi.basis();
    for (std::size_t k = 0; k < b.dim(); ++k) {
      const double pk = n.w * std::norm(psi.amps()(k));
      if (pk == 0.0) continue;
      int nh = 0;
      for (int l = 0; l < L / 2; ++l) nh += b.occupation(k, l);
      s.joint[b.total(k)][nh] += pk;
      s.mid_left[b.occupation(k, L / 2 - 1)] += pk;
      s.mid_right[b.occupation(k, L / 2)] += pk;
    }
  }

  void dfs(const Node& n, Sums& s) const {
    if (n.step >= nsteps_) {
      leaf(n, s);
      return;
    }
    std::vector<Node> children;
    expand(n, children, s);
    for (const Node& ch : children) dfs(ch, s);
  }

  Node root() const {
    StateVector psi = StateVector::product(engine_.basis(), c_.initial_state);
    evolve_step(psi, engine_.propagator());
    return Node{std::move(psi), 0, 0, 1.0, 1.0};
  }

 private:
  const TrajectoryEngine& engine_;
  const RunConfig& c_;
  const OracleOptions& opts_;
  int nsteps_;
  mutable std::atomic<std::uint64_t> counter_{0};
};

}  // namespace

double branch_count_estimate(const RunConfig& config) {
  const double slots = static_cast<double>(config.L) * config.steps();
  const double p = config.measurement.p;
  if (p <= 0.0) return 1.0;
  return std::pow(p >= 1.0 ? config.d : config.d + 1.0, slots);
}

OracleResult enumerate_trajectories(const RunConfig& config, const OracleOptions& opts) {
  if (config.bh.disordered()) {
    throw std::invalid_argument("enumerate_trajectories: parameter disorder is not supported");
  }
  const TrajectoryEngine engine(config);
  const Enumerator en(engine, opts);
  const int L = config.L, d = config.d;

  // Split the tree into subtrees after the first layer and walk them in
  // parallel; partial sums are merged in subtree order.
  Sums top(L, d);
  std::vector<Node> frontier{en.root()};
  for (int s = 0; s < L && !frontier.empty() && frontier.front().step == 0; ++s) {
    std::vector<Node> next;
    for (const Node& n : frontier) en.expand(n, next, top);
    frontier.swap(next);
  }
  std::vector<Sums> parts(frontier.size(), Sums(L, d));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex mu;
  auto work = [&]() {
    try {
      for (;;) {
        const std::size_t k = next.fetch_add(1);
        if (k >= frontier.size()) return;
        en.dfs(frontier[k], parts[k]);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(mu);
      if (!error) error = std::current_exception();
      next.store(frontier.size());
    }
  };
  const int workers = std::max(1, std::min<int>(opts.workers, static_cast<int>(frontier.size())));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  for (const Sums& p : parts) top.merge(p);

  OracleResult r;
  r.L = L;
  r.d = d;
  r.branches = top.leaves;
  r.kept_weight = top.w;
  r.pruned_weight = top.pruned;
  if (!(top.w > 0.0)) throw std::runtime_error("enumerate_trajectories: every branch was pruned");
  OracleMoments* traj[5] = {&r.trajectory.n_half, &r.trajectory.n_half_sq, &r.trajectory.entropy,
                            &r.trajectory.fluctuation, &r.trajectory.n_total};
  OracleMoments* rep[5] = {&r.replica.n_half, &r.replica.n_half_sq, &r.replica.entropy,
                           &r.replica.fluctuation, &r.replica.n_total};
  for (int i = 0; i < 5; ++i) {
    traj[i]->first = top.obs[i][0] / top.w;
    traj[i]->second = top.obs[i][1] / top.w;
    rep[i]->first = top.obs[i][2] / top.w2;
    rep[i]->second = top.obs[i][3] / top.w2;
  }
  r.joint = top.joint;
  for (auto& row : r.joint) {
    for (double& v : row) v /= top.w;
  }
  r.mid_left = top.mid_left;
  r.mid_right = top.mid_right;
  for (int m = 0; m < d; ++m) {
    r.mid_left[m] /= top.w;
    r.mid_right[m] /= top.w;
  }
  return r;
}

std::vector<double> OracleResult::n_half_distribution() const {
  std::vector<double> out(joint.empty() ? 0 : joint.front().size(), 0.0);
  for (const auto& row : joint) {
    for (std::size_t j = 0; j < row.size(); ++j) out[j] += row[j];
  }
  return out;
}

std::vector<double> OracleResult::n_total_distribution() const {
  std::vector<double> out;
  for (const auto& row : joint) {
    double s = 0.0;
    for (double v : row) s += v;
    out.push_back(s);
  }
  return out;
}

namespace {

double variance_of(const std::vector<double>& dist) {
  double w = 0.0, m1 = 0.0, m2 = 0.0;
  for (std::size_t j = 0; j < dist.size(); ++j) {
    w += dist[j];
    m1 += dist[j] * j;
    m2 += dist[j] * double(j) * j;
  }
  if (!(w > 0.0)) throw std::domain_error("empty distribution");
  m1 /= w;
  m2 /= w;
  return m2 - m1 * m1;
}

}  // namespace

double OracleResult::dispersion() const { return variance_of(n_half_distribution()); }

double OracleResult::sector_probability(int n) const {
  if (n < 0 || n >= static_cast<int>(joint.size())) return 0.0;
  double s = 0.0;
  for (double v : joint[n]) s += v;
  return s;
}

double OracleResult::sector_dispersion(int n) const {
  if (sector_probability(n) <= 0.0) throw std::domain_error("sector_dispersion: empty sector");
  return variance_of(joint[n]);
}

AreaLawForms area_law_closed_forms(const Occupation& pattern, double lambda, double x) {
  const int L = static_cast<int>(pattern.size());
  if (L < 2 || L % 2 != 0) throw std::invalid_argument("area_law_closed_forms: L must be even");
  // 1-based accessors.
  auto a = [&](int l) { return static_cast<double>(pattern[l - 1]); };
  auto eps_pm = [&](int l) { return (a(l) + 1) * a(l + 1); };  // |eps^{+-}_{l,l+1}|^2
  auto eps_mp = [&](int l) { return a(l) * (a(l + 1) + 1); };  // |eps^{-+}_{l,l+1}|^2
  const int h = L / 2;
  double g = eps_pm(1) + eps_mp(1);
  for (int l = 2; l <= h; ++l) g += eps_mp(l - 1) + eps_pm(l) + eps_pm(l - 1) + eps_mp(l);
  const double l2 = lambda * lambda;
  AreaLawForms f;
  f.g = g;
  f.fluctuation_half = x * x * (eps_pm(h) + eps_mp(h)) * l2;
  f.dispersion = x * g * l2;
  f.sector_dispersion = f.fluctuation_half;
  return f;
}

}  // namespace mipt
