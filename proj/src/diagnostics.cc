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

#include "mipt/diagnostics.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>

namespace mipt {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

ReferenceDistributions reference_distributions(int L, int d, const Occupation& pattern,
                                               int mid_site) {
  if (static_cast<int>(pattern.size()) != L) {
    throw std::invalid_argument("reference_distributions: pattern must have L entries");
  }
  if (mid_site < 0 || mid_site >= L) throw std::invalid_argument("reference_distributions: bad site");
  ReferenceDistributions r;
  r.delta_site.assign(d, 0.0);
  r.delta_site[pattern[mid_site]] = 1.0;
  r.uniform_site.assign(d, 1.0 / d);
  const int nmax = L * (d - 1);
  int total = 0;
  for (int a : pattern) total += a;
  r.delta_total.assign(nmax + 1, 0.0);
  r.delta_total[total] = 1.0;
  std::vector<double> law = {1.0};
  for (int s = 0; s < L; ++s) {
    std::vector<double> next(law.size() + d - 1, 0.0);
    for (std::size_t n = 0; n < law.size(); ++n) {
      for (int v = 0; v < d; ++v) next[n + v] += law[n] / d;
    }
    law.swap(next);
  }
  r.ergodic_total = law;
  return r;
}

double distribution_distance(const std::vector<double>& obs, const std::vector<double>& theo,
                             int s) {
  if (obs.size() != theo.size()) throw std::invalid_argument("distribution_distance: support mismatch");
  if (s < 1) throw std::invalid_argument("distribution_distance: s must be positive");
  double acc = 0.0;
  for (std::size_t n = 0; n < obs.size(); ++n) acc += std::pow(std::abs(obs[n] - theo[n]), s);
  return s == 1 ? 0.5 * acc : acc;
}

std::optional<Crossing> find_crossing(const std::vector<CrossingSample>& sweep) {
  for (std::size_t i = 1; i < sweep.size(); ++i) {
    if (sweep[i].p < sweep[i - 1].p) throw std::invalid_argument("find_crossing: sweep not sorted");
  }
  for (std::size_t i = 0; i + 1 < sweep.size(); ++i) {
    const double f0 = sweep[i].d_uniform - sweep[i].d_delta;
    const double f1 = sweep[i + 1].d_uniform - sweep[i + 1].d_delta;
    if (f0 == 0.0) return Crossing{sweep[i].p, sweep[i].p, sweep[i].p};
    if ((f0 < 0) != (f1 < 0) || f1 == 0.0) {
      const double p0 = sweep[i].p, p1 = sweep[i + 1].p;
      return Crossing{p0 + (p1 - p0) * f0 / (f0 - f1), p0, p1};
    }
  }
  return std::nullopt;
}

Crossing crossing_point(const std::vector<CrossingSample>& sweep) {
  auto c = find_crossing(sweep);
  if (!c) throw NoCrossing("no crossing in range");
  return *c;
}

namespace {

struct Scaled {
  std::vector<double> x, y, dy;
};

std::vector<Scaled> scale_curves(const std::vector<ScalingCurve>& curves, double p_c, double nu,
                                 double zeta) {
  std::vector<Scaled> out;
  for (const auto& c : curves) {
    Scaled s;
    const double lx = std::pow(static_cast<double>(c.L), 1.0 / nu);
    const double ly = std::pow(static_cast<double>(c.L), -zeta / nu);
    std::vector<std::size_t> order(c.p.size());
    for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return c.p[a] < c.p[b]; });
    for (auto j : order) {
      s.x.push_back((c.p[j] - p_c) * lx);
      s.y.push_back(c.y[j] * ly);
      s.dy.push_back(c.dy[j] * ly);
    }
    out.push_back(std::move(s));
  }
  return out;
}

FssaQuality quality_impl(const std::vector<ScalingCurve>& curves, double p_c, double nu,
                         double zeta) {
  if (!(nu > 0) || !std::isfinite(nu) || !std::isfinite(p_c) || !std::isfinite(zeta)) {
    return {kInf, 0};
  }
  const auto sc = scale_curves(curves, p_c, nu, zeta);
  double sum = 0.0;
  int used = 0;
  for (std::size_t i = 0; i < sc.size(); ++i) {
    for (std::size_t j = 0; j < sc[i].x.size(); ++j) {
      const double x0 = sc[i].x[j];
      double K = 0, Kx = 0, Kxx = 0, Ky = 0, Kxy = 0;
      int n = 0;
      for (std::size_t k = 0; k < sc.size(); ++k) {
        if (k == i) continue;
        const auto& xs = sc[k].x;
        if (xs.size() < 2 || x0 < xs.front() || x0 > xs.back()) continue;
        std::size_t hi = std::upper_bound(xs.begin(), xs.end(), x0) - xs.begin();
        if (hi == xs.size()) hi = xs.size() - 1;
        const std::size_t lo = hi - 1;
        for (std::size_t m : {lo, hi}) {
          const double w = 1.0 / (sc[k].dy[m] * sc[k].dy[m]);
          K += w;
          Kx += w * xs[m];
          Kxx += w * xs[m] * xs[m];
          Ky += w * sc[k].y[m];
          Kxy += w * xs[m] * sc[k].y[m];
          ++n;
        }
      }
      if (n < 2) continue;
      const double delta = K * Kxx - Kx * Kx;
      if (!(delta > 0)) continue;
      const double Y = ((Kxx * Ky - Kx * Kxy) + x0 * (K * Kxy - Kx * Ky)) / delta;
      const double dY2 = (Kxx - 2 * x0 * Kx + x0 * x0 * K) / delta;
      const double r = sc[i].y[j] - Y;
      sum += r * r / (sc[i].dy[j] * sc[i].dy[j] + dY2);
      ++used;
    }
  }
  if (used == 0) return {kInf, 0};
  return {sum / used, used};
}

using Vec = std::vector<double>;

/// Nelder-Mead simplex; the best vertex value never increases.
std::pair<Vec, double> nelder_mead(const std::function<double(const Vec&)>& f, Vec x0,
                                   const Vec& step, int max_evals, double tol) {
  const std::size_t n = x0.size();
  std::vector<Vec> pts(n + 1, x0);
  std::vector<double> val(n + 1);
  for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += step[i];
  int evals = 0;
  for (std::size_t i = 0; i <= n; ++i) val[i] = f(pts[i]), ++evals;
  auto sort_simplex = [&]() {
    std::vector<std::size_t> idx(n + 1);
    for (std::size_t i = 0; i <= n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return val[a] < val[b]; });
    std::vector<Vec> p2;
    std::vector<double> v2;
    for (auto i : idx) p2.push_back(pts[i]), v2.push_back(val[i]);
    pts.swap(p2);
    val.swap(v2);
  };
  while (evals < max_evals) {
    sort_simplex();
    if (std::isfinite(val[n]) && std::abs(val[n] - val[0]) <= tol * (std::abs(val[0]) + tol)) {
      double spread = 0;
      for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t k = 0; k < n; ++k) spread = std::max(spread, std::abs(pts[i][k] - pts[0][k]));
      }
      if (spread < 1e-9) break;
    }
    Vec c(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) c[k] += pts[i][k] / n;
    }
    auto along = [&](double t) {
      Vec x(n);
      for (std::size_t k = 0; k < n; ++k) x[k] = c[k] + t * (pts[n][k] - c[k]);
      return x;
    };
    Vec xr = along(-1.0);
    const double fr = f(xr);
    ++evals;
    if (fr < val[0]) {
      Vec xe = along(-2.0);
      const double fe = f(xe);
      ++evals;
      if (fe < fr) {
        pts[n] = xe, val[n] = fe;
      } else {
        pts[n] = xr, val[n] = fr;
      }
    } else if (fr < val[n - 1]) {
      pts[n] = xr, val[n] = fr;
    } else {
      const bool outside = fr < val[n];
      Vec xc = along(outside ? -0.5 : 0.5);
      const double fc = f(xc);
      ++evals;
      if (fc < std::min(fr, val[n])) {
        pts[n] = xc, val[n] = fc;
      } else {
        for (std::size_t i = 1; i <= n; ++i) {
          for (std::size_t k = 0; k < n; ++k) pts[i][k] = pts[0][k] + 0.5 * (pts[i][k] - pts[0][k]);
          val[i] = f(pts[i]);
          ++evals;
        }
      }
    }
  }
  sort_simplex();
  return {pts[0], val[0]};
}

double contour_offset(const std::function<double(double)>& s_of, double s_min, double h0,
                      double cap) {
  const double target = s_min + 1.0;
  double lo = 0.0, hi = h0;
  while (s_of(hi) < target) {
    lo = hi;
    hi *= 2.0;
    if (hi > cap) return cap;
  }
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (s_of(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

FssaQuality fssa_quality(const std::vector<ScalingCurve>& curves, double p_c, double nu,
                         double zeta) {
  for (const auto& c : curves) {
    if (c.p.size() != c.y.size() || c.p.size() != c.dy.size()) {
      throw std::invalid_argument("fssa_quality: curve arrays differ in length");
    }
    for (double e : c.dy) {
      if (!(e > 0)) throw std::invalid_argument("fssa_quality: dy must be positive");
    }
  }
  const FssaQuality q = quality_impl(curves, p_c, nu, zeta);
  if (q.points == 0) throw DegenerateCollapse("master curve has fewer than 2 neighbour points");
  return q;
}

FssaParams fssa_collapse(const std::vector<ScalingCurve>& curves, const FssaParams& init,
                         const FssaOptions& opts) {
  if (curves.size() < 3) throw std::invalid_argument("fssa_collapse: need at least 3 system sizes");
  std::size_t total = 0;
  double pmin = kInf, pmax = -kInf;
  for (const auto& c : curves) {
    total += c.p.size();
    for (double p : c.p) pmin = std::min(pmin, p), pmax = std::max(pmax, p);
  }
  fssa_quality(curves, init.p_c, init.nu, init.zeta);  // validates inputs
  const int min_points = static_cast<int>(std::ceil(opts.min_overlap * total));

  auto S = [&](double pc, double nu, double zeta) {
    const FssaQuality q = quality_impl(curves, pc, nu, zeta);
    if (q.points < std::max(1, min_points)) return kInf;
    return q.S;
  };
  auto objective = [&](const Vec& v) {
    return S(v[0], v[1], opts.fit_zeta ? v[2] : init.zeta);
  };

  std::vector<Vec> starts;
  auto push = [&](double pc, double nu, double z) {
    if (opts.fit_zeta) {
      starts.push_back({pc, nu, z});
    } else {
      starts.push_back({pc, nu});
    }
  };
  push(init.p_c, init.nu, init.zeta);
  std::vector<double> pcs = opts.p_c_starts;
  if (pcs.empty()) {
    for (int k = 1; k <= 4; ++k) pcs.push_back(pmin + (pmax - pmin) * k / 5.0);
  }
  for (double pc : pcs) {
    for (double nu : opts.nu_starts) {
      if (opts.fit_zeta) {
        for (double z : opts.zeta_starts) push(pc, nu, z);
      } else {
        push(pc, nu, init.zeta);
      }
    }
  }

  const double span = pmax - pmin;
  Vec best;
  double best_val = kInf;
  for (const Vec& x0 : starts) {
    if (!std::isfinite(objective(x0))) continue;
    Vec step = {0.1 * span, 0.25 * x0[1]};
    if (opts.fit_zeta) step.push_back(0.2);
    auto [x, v] = nelder_mead(objective, x0, step, opts.max_evaluations, opts.tolerance);
    // A restart from the optimum guards against premature simplex collapse.
    auto [x2, v2] = nelder_mead(objective, x, step, opts.max_evaluations, opts.tolerance);
    if (v2 < v) x = x2, v = v2;
    if (v < best_val) best_val = v, best = x;
  }
  if (best.empty()) throw DegenerateCollapse("fssa_collapse: no start point has a valid master curve");

  FssaParams out;
  out.p_c = best[0];
  out.nu = best[1];
  out.zeta = opts.fit_zeta ? best[2] : init.zeta;
  out.quality = best_val;
  out.points = quality_impl(curves, out.p_c, out.nu, out.zeta).points;

  auto err = [&](int which, double h0, double cap) {
    auto at = [&](double delta) {
      double pc = out.p_c, nu = out.nu, z = out.zeta;
      (which == 0 ? pc : which == 1 ? nu : z) += delta;
      return S(pc, nu, z);
    };
    const double up = contour_offset([&](double h) { return at(h); }, best_val, h0, cap);
    const double down = contour_offset([&](double h) { return at(-h); }, best_val, h0, cap);
    return std::max(up, down);
  };
  out.dp_c = err(0, 1e-4 * std::max(span, 1e-3), std::max(span, 1e-3) * 10);
  out.dnu = err(1, 1e-3 * out.nu, 100.0);
  out.dzeta = opts.fit_zeta ? err(2, 1e-3, 100.0) : 0.0;
  return out;
}

}  // namespace mipt
