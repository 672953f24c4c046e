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

#include "mipt/statistics.h"

#include <cmath>
#include <string>

namespace mipt {

using boost::multiprecision::int256_t;

namespace {

constexpr long double kScale = 0x1.0p40L;

long double to_ld(const int256_t& v) { return v.convert_to<long double>(); }

}  // namespace

void derive_occupations(TrajectoryRecord& r) {
  const int L = static_cast<int>(r.sampled_config.size());
  r.n_half = r.n_total = 0;
  for (int s = 0; s < L; ++s) {
    r.n_total += r.sampled_config[s];
    if (s < L / 2) r.n_half += r.sampled_config[s];
  }
  r.n_mid_left = L >= 2 ? r.sampled_config[L / 2 - 1] : r.sampled_config[0];
  r.n_mid_right = r.sampled_config[L / 2];
}

void ExactMoments::add(double x) {
  if (!std::isfinite(x) || std::abs(x) >= 4.0e6) {
    throw std::domain_error("ExactMoments: value outside the supported range");
  }
  const std::int64_t q = std::llround(std::ldexp(x, kFracBits));
  ++n_;
  sum_ += q;
  sum_sq_ += int256_t(q) * q;
}

void ExactMoments::merge(const ExactMoments& o) {
  n_ += o.n_;
  sum_ += o.sum_;
  sum_sq_ += o.sum_sq_;
}

double ExactMoments::mean() const {
  if (n_ == 0) return 0.0;
  return static_cast<double>(to_ld(sum_) / kScale / static_cast<long double>(n_));
}

double ExactMoments::variance() const {
  if (n_ == 0) return 0.0;
  const int256_t num = sum_sq_ * n_ - sum_ * sum_;
  const long double n = static_cast<long double>(n_);
  return static_cast<double>(to_ld(num) / (kScale * kScale) / (n * n));
}

double ExactMoments::sample_variance() const {
  if (n_ < 2) return 0.0;
  return variance() * static_cast<double>(n_) / static_cast<double>(n_ - 1);
}

double ExactMoments::standard_error() const {
  if (n_ == 0) return 0.0;
  return std::sqrt(sample_variance() / static_cast<double>(n_));
}

void IntHistogram::add(int v) {
  if (v < 0 || v > max_value()) throw std::out_of_range("IntHistogram: value outside support");
  ++counts_[v];
}

void IntHistogram::merge(const IntHistogram& o) {
  if (o.counts_.size() != counts_.size()) throw std::invalid_argument("IntHistogram: support mismatch");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += o.counts_[i];
}

std::uint64_t IntHistogram::count() const {
  std::uint64_t n = 0;
  for (auto c : counts_) n += c;
  return n;
}

double IntHistogram::mean() const {
  const std::uint64_t n = count();
  if (n == 0) return 0.0;
  long double s = 0;
  for (std::size_t i = 0; i < counts_.size(); ++i) s += static_cast<long double>(counts_[i]) * i;
  return static_cast<double>(s / n);
}

double IntHistogram::central_moment(int k) const {
  const std::uint64_t n = count();
  if (n == 0) return 0.0;
  const long double mu = mean();
  long double s = 0;
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    if (counts_[i] == 0) continue;
    s += static_cast<long double>(counts_[i]) * std::pow(static_cast<long double>(i) - mu, k);
  }
  return static_cast<double>(s / n);
}

double IntHistogram::variance() const {
  // Exact integer numerator n*sum(x^2) - (sum x)^2.
  const std::uint64_t n = count();
  if (n == 0) return 0.0;
  int256_t s1 = 0, s2 = 0;
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    s1 += int256_t(counts_[i]) * i;
    s2 += int256_t(counts_[i]) * i * i;
  }
  const long double nn = static_cast<long double>(n);
  return static_cast<double>(to_ld(s2 * n - s1 * s1) / (nn * nn));
}

double IntHistogram::sample_variance() const {
  const std::uint64_t n = count();
  if (n < 2) return 0.0;
  return variance() * static_cast<double>(n) / static_cast<double>(n - 1);
}

std::vector<double> IntHistogram::normalized() const {
  const std::uint64_t n = count();
  std::vector<double> out(counts_.size(), 0.0);
  if (n == 0) return out;
  for (std::size_t i = 0; i < counts_.size(); ++i) out[i] = static_cast<double>(counts_[i]) / n;
  return out;
}

EnsembleStats::EnsembleStats(int L_, int d_)
    : L(L_),
      d(d_),
      n_half(L_ * (d_ - 1)),
      n_total(L_ * (d_ - 1)),
      n_mid_left(d_ - 1),
      n_mid_right(d_ - 1) {}

void EnsembleStats::accumulate(const TrajectoryRecord& r) {
  if (static_cast<int>(r.sampled_config.size()) != L) {
    throw std::invalid_argument("EnsembleStats: record does not match chain length");
  }
  ++count;
  entropy.add(r.entropy_half);
  fluctuation.add(r.fluctuation_half);
  expected_n_half.add(r.expected_n_half);
  expected_n_total.add(r.expected_n_total);
  n_half.add(r.n_half);
  n_total.add(r.n_total);
  n_mid_left.add(r.n_mid_left);
  n_mid_right.add(r.n_mid_right);
  auto [it, inserted] = sectors.try_emplace(r.n_total);
  SectorStats& s = it->second;
  if (inserted) {
    s.n_half = IntHistogram(L * (d - 1));
    s.n_mid_left = IntHistogram(d - 1);
    s.n_mid_right = IntHistogram(d - 1);
  }
  ++s.count;
  s.n_half.add(r.n_half);
  s.n_mid_left.add(r.n_mid_left);
  s.n_mid_right.add(r.n_mid_right);
  s.entropy.add(r.entropy_half);
  s.fluctuation.add(r.fluctuation_half);
}

void EnsembleStats::merge(const EnsembleStats& o) {
  if (L != o.L || d != o.d) throw std::invalid_argument("EnsembleStats: shape mismatch in merge");
  count += o.count;
  entropy.merge(o.entropy);
  fluctuation.merge(o.fluctuation);
  expected_n_half.merge(o.expected_n_half);
  expected_n_total.merge(o.expected_n_total);
  n_half.merge(o.n_half);
  n_total.merge(o.n_total);
  n_mid_left.merge(o.n_mid_left);
  n_mid_right.merge(o.n_mid_right);
  for (const auto& [n, so] : o.sectors) {
    auto [it, inserted] = sectors.try_emplace(n, so);
    if (inserted) continue;
    SectorStats& s = it->second;
    s.count += so.count;
    s.n_half.merge(so.n_half);
    s.n_mid_left.merge(so.n_mid_left);
    s.n_mid_right.merge(so.n_mid_right);
    s.entropy.merge(so.entropy);
    s.fluctuation.merge(so.fluctuation);
  }
}

Estimate mean_estimate(const ExactMoments& m) { return {m.mean(), m.standard_error()}; }

Estimate mean_estimate(const IntHistogram& h) {
  const std::uint64_t n = h.count();
  if (n == 0) return {};
  return {h.mean(), std::sqrt(h.sample_variance() / static_cast<double>(n))};
}

Estimate dispersion_estimate(const IntHistogram& h) {
  const std::uint64_t n = h.count();
  const double var = h.variance();
  if (n < 4) return {var, 0.0};
  const double m4 = h.central_moment(4);
  const double nn = static_cast<double>(n);
  const double v = (m4 - var * var * (nn - 3.0) / (nn - 1.0)) / nn;
  return {var, std::sqrt(std::max(v, 0.0))};
}

Estimate sector_dispersion(const EnsembleStats& stats, int n_target) {
  auto it = stats.sectors.find(n_target);
  if (it == stats.sectors.end() || it->second.count == 0) {
    throw InsufficientData("sector " + std::to_string(n_target) + " has no iterations", 0);
  }
  return dispersion_estimate(it->second.n_half);
}

double asymptotic_scaling_fit(const std::vector<std::pair<double, double>>& curve, double lo,
                              double hi) {
  std::vector<double> xs, ys;
  for (const auto& [p, y] : curve) {
    if (p < lo || p > hi) continue;
    if (!(y > 0) || !(p > 0)) throw std::domain_error("asymptotic_scaling_fit: non-positive value");
    xs.push_back(std::log(p));
    ys.push_back(std::log(y));
  }
  if (xs.size() < 4) throw std::invalid_argument("asymptotic_scaling_fit: fewer than 4 points");
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  return sxy / sxx;
}

}  // namespace mipt
