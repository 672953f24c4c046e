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

#ifndef MIPT_MEASUREMENTS_H_
#define MIPT_MEASUREMENTS_H_

#include <string>
#include <vector>

#include "mipt/fock.h"

namespace mipt {

enum class MeasurementKind { Standard, Predetermined };

std::string to_string(MeasurementKind k);
MeasurementKind measurement_kind_from_string(const std::string& s);

struct MeasurementSpec {
  MeasurementKind kind = MeasurementKind::Standard;
  /// Target occupation per site; used by the predetermined kind.
  Occupation pattern;
  /// Per-site, per-step measurement probability.
  double p = 0.0;

  void validate(int L, int d) const;
};

struct MeasurementEvent {
  int step = 0;
  int site = 0;
  int outcome = 0;
  MeasurementKind kind = MeasurementKind::Standard;

  bool operator==(const MeasurementEvent&) const = default;
};

/// Born probabilities <P_m> of site occupations m = 0..d-1.
std::vector<double> outcome_probabilities(const StateVector& psi, int site);

/// Projects site onto occupation m and renormalizes; returns the Born
/// probability of m. Throws if that probability is below 1e-14.
double project_site(StateVector& psi, int site, int m);

/// Moves every amplitude with site occupation m to occupation alpha. Requires
/// all amplitude to already sit at m.
void relabel_site(StateVector& psi, int site, int m, int alpha);

/// Standard number measurement with Born-rule outcome; returns m.
int apply_standard(StateVector& psi, int site, Rng& rng);

/// Born-rule outcome m followed by the m -> alpha relabel; returns m.
int apply_predetermined(StateVector& psi, int site, int alpha, Rng& rng);

/// Visits sites 0..L-1; each is measured with probability spec.p. Returns the
/// applied measurements in visiting order.
std::vector<MeasurementEvent> measurement_layer(StateVector& psi, const MeasurementSpec& spec,
                                                int step, Rng& rng);

/// Kraus operators of one site as dense d x d matrices: |m><m| or |alpha><m|.
std::vector<Eigen::MatrixXd> site_kraus_operators(MeasurementKind kind, int d, int alpha);

}  // namespace mipt

#endif  // MIPT_MEASUREMENTS_H_
