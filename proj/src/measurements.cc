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

#include "mipt/measurements.h"

#include <cmath>

namespace mipt {

namespace {
constexpr double kMinProbability = 1e-14;
}

std::string to_string(MeasurementKind k) {
  return k == MeasurementKind::Standard ? "standard" : "predetermined";
}

MeasurementKind measurement_kind_from_string(const std::string& s) {
  if (s == "standard") return MeasurementKind::Standard;
  if (s == "predetermined") return MeasurementKind::Predetermined;
  throw std::invalid_argument("unknown measurement kind '" + s + "'");
}

void MeasurementSpec::validate(int L, int d) const {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p: must lie in [0, 1]");
  if (kind == MeasurementKind::Predetermined) {
    if (static_cast<int>(pattern.size()) != L) {
      throw std::invalid_argument("pattern: must have L entries");
    }
    for (int a : pattern) {
      if (a < 0 || a >= d) throw std::invalid_argument("pattern: entries must lie in [0, d-1]");
    }
  }
}

std::vector<double> outcome_probabilities(const StateVector& psi, int site) {
  const FockBasis& b = psi.basis();
  std::vector<double> probs(b.d(), 0.0);
  const std::uint8_t* col = b.site_column(site);
  const auto& a = psi.amps();
  for (std::size_t i = 0; i < b.dim(); ++i) probs[col[i]] += std::norm(a(i));
  return probs;
}

double project_site(StateVector& psi, int site, int m) {
  const FockBasis& b = psi.basis();
  const std::uint8_t* col = b.site_column(site);
  auto& a = psi.amps();
  double pm = 0.0;
  for (std::size_t i = 0; i < b.dim(); ++i) {
    if (col[i] == m) {
      pm += std::norm(a(i));
    } else {
      a(i) = 0.0;
    }
  }
  if (pm < kMinProbability) throw std::domain_error("project_site: outcome has vanishing probability");
  a /= std::sqrt(pm);
  return pm;
}

void relabel_site(StateVector& psi, int site, int m, int alpha) {
  if (m == alpha) return;
  const FockBasis& b = psi.basis();
  const std::uint8_t* col = b.site_column(site);
  auto& a = psi.amps();
  const std::int64_t shift = (static_cast<std::int64_t>(alpha) - m) *
                             static_cast<std::int64_t>(b.stride(site));
  for (std::size_t i = 0; i < b.dim(); ++i) {
    if (col[i] != m || a(i) == cplx(0.0)) continue;
    std::size_t j;
    if (b.is_full()) {
      j = static_cast<std::size_t>(static_cast<std::int64_t>(i) + shift);
    } else {
      auto found = b.find_code(static_cast<std::uint64_t>(static_cast<std::int64_t>(b.code(i)) + shift));
      if (!found) {
        throw std::domain_error("relabel_site: target configuration outside the basis sector");
      }
      j = *found;
    }
    a(j) = a(i);
    a(i) = 0.0;
  }
}

namespace {

int draw_outcome(const StateVector& psi, int site, Rng& rng) {
  const std::vector<double> probs = outcome_probabilities(psi, site);
  double total = 0.0;
  for (double q : probs) total += q;
  if (total < kMinProbability) throw std::domain_error("measurement on a vanishing state");
  const double u = uniform01(rng) * total;
  double acc = 0.0;
  int last = 0;
  for (int m = 0; m < static_cast<int>(probs.size()); ++m) {
    if (probs[m] <= 0.0) continue;
    last = m;
    acc += probs[m];
    if (u < acc) return m;
  }
  return last;
}

}  // namespace

int apply_standard(StateVector& psi, int site, Rng& rng) {
  const int m = draw_outcome(psi, site, rng);
  project_site(psi, site, m);
  return m;
}

int apply_predetermined(StateVector& psi, int site, int alpha, Rng& rng) {
  const int m = draw_outcome(psi, site, rng);
  project_site(psi, site, m);
  relabel_site(psi, site, m, alpha);
  return m;
}

std::vector<MeasurementEvent> measurement_layer(StateVector& psi, const MeasurementSpec& spec,
                                                int step, Rng& rng) {
  std::vector<MeasurementEvent> events;
  const int L = psi.basis().L();
  for (int site = 0; site < L; ++site) {
    if (!(uniform01(rng) < spec.p)) continue;
    int m;
    if (spec.kind == MeasurementKind::Standard) {
      m = apply_standard(psi, site, rng);
    } else {
      m = apply_predetermined(psi, site, spec.pattern[site], rng);
    }
    events.push_back({step, site, m, spec.kind});
  }
  return events;
}

std::vector<Eigen::MatrixXd> site_kraus_operators(MeasurementKind kind, int d, int alpha) {
  std::vector<Eigen::MatrixXd> ops;
  for (int m = 0; m < d; ++m) {
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(d, d);
    P(kind == MeasurementKind::Standard ? m : alpha, m) = 1.0;
    ops.push_back(P);
  }
  return ops;
}

}  // namespace mipt
