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

#ifndef MIPT_DIAGNOSTICS_H_
#define MIPT_DIAGNOSTICS_H_

#include <optional>
#include <stdexcept>
#include <vector>

#include "mipt/fock.h"

namespace mipt {

struct ReferenceDistributions {
  std::vector<double> delta_site;     // mass 1 at pattern[mid_site]
  std::vector<double> uniform_site;   // 1/d each
  std::vector<double> delta_total;    // mass 1 at sum(pattern), support [0, L(d-1)]
  std::vector<double> ergodic_total;  // law of a sum of L iid uniform{0..d-1}
};

ReferenceDistributions reference_distributions(int L, int d, const Occupation& pattern,
                                               int mid_site);

/// sum_n |obs(n) - theo(n)|^s, halved for s = 1 (total variation).
double distribution_distance(const std::vector<double>& obs, const std::vector<double>& theo,
                             int s = 1);

struct CrossingSample {
  double p = 0.0;
  double d_uniform = 0.0;
  double d_delta = 0.0;
};

struct Crossing {
  double p_c = 0.0;
  double p_lo = 0.0;
  double p_hi = 0.0;
};

struct NoCrossing : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// First sign change of d_uniform - d_delta in a sweep sorted by p, located
/// by linear interpolation.
std::optional<Crossing> find_crossing(const std::vector<CrossingSample>& sweep);
/// As find_crossing; throws NoCrossing when the sign never changes.
Crossing crossing_point(const std::vector<CrossingSample>& sweep);

/// One system size of a scaling data set.
struct ScalingCurve {
  int L = 0;
  std::vector<double> p, y, dy;
};

struct FssaParams {
  double p_c = 0.0;
  double nu = 1.0;
  double zeta = 0.0;
  double dp_c = 0.0;
  double dnu = 0.0;
  double dzeta = 0.0;
  double quality = 0.0;
  int points = 0;
};

struct FssaOptions {
  /// Starting grids for the multi-start search; the init point is always used.
  std::vector<double> p_c_starts;
  std::vector<double> nu_starts = {1.0, 2.0, 4.0};
  std::vector<double> zeta_starts = {0.0, 0.5, 1.0};
  bool fit_zeta = true;
  int max_evaluations = 4000;
  double tolerance = 1e-9;
  /// Parameter sets whose master curve covers fewer than this fraction of all
  /// data points score as infinitely bad.
  double min_overlap = 0.5;
};

struct FssaQuality {
  double S = 0.0;
  int points = 0;
};

struct DegenerateCollapse : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Houdayer-Hartmann quality of the collapse
/// L^(-zeta/nu) y = f[(p - p_c) L^(1/nu)]. Throws DegenerateCollapse when no
/// point has at least two neighbouring points from other sizes.
FssaQuality fssa_quality(const std::vector<ScalingCurve>& curves, double p_c, double nu,
                         double zeta);

/// Minimizes the quality over (p_c, nu, zeta) and attaches errors from the
/// S + 1 contour along each parameter.
FssaParams fssa_collapse(const std::vector<ScalingCurve>& curves, const FssaParams& init,
                         const FssaOptions& opts = {});

}  // namespace mipt

#endif  // MIPT_DIAGNOSTICS_H_
