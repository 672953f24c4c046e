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

#ifndef MIPT_OUTPUT_H_
#define MIPT_OUTPUT_H_

#include <optional>
#include <string>
#include <vector>

#include "mipt/diagnostics.h"
#include "mipt/record.h"
#include "mipt/statistics.h"
#include "mipt/trajectory.h"

namespace mipt {

/// Writes to a sibling temporary file, then renames over the target.
void write_file_atomic(const std::string& path, const std::string& content);

/// One JSON object per record, no trailing newline.
std::string record_to_line(const TrajectoryRecord& r);
TrajectoryRecord record_from_line(const std::string& line);
std::string records_text(const std::vector<TrajectoryRecord>& records);

/// Human-readable table of ensemble means with standard errors.
std::string summary_text(const RunConfig& config, const EnsembleStats& stats);

/// One (kind, L, p) cell of a sweep. Entropies in nats, boson numbers
/// dimensionless, times in units of 1/J.
struct CurveRow {
  MeasurementKind kind = MeasurementKind::Standard;
  int L = 0;
  double p = 0.0;
  std::uint64_t iterations = 0;
  double T = 0.0;
  double dt = 0.0;
  Estimate entropy;
  Estimate fluctuation;
  Estimate dispersion;
  Estimate sector_dispersion;
  std::uint64_t sector_count = 0;
  Estimate n_total;
  Estimate n_mid_left;
  Estimate n_mid_right;
};

/// Row for a finished cell. The sector is the pattern total; its columns are
/// NaN when fewer than two samples landed in it.
CurveRow make_curve_row(const RunConfig& config, const EnsembleStats& stats);

std::string curves_header();
std::string curves_csv(const std::vector<CurveRow>& rows);
std::vector<CurveRow> parse_curves_csv(const std::string& text);
/// Column descriptions with units.
std::string curves_units_note();

/// `value,count` rows with a header.
std::string histogram_csv(const IntHistogram& h);
IntHistogram parse_histogram_csv(const std::string& text);
/// hist_<obs>_<p>_<L>.csv with p in shortest round-trip form.
std::string histogram_filename(const std::string& obs, double p, int L);

std::string format_number(double v);

struct DiagnoseReport {
  MeasurementKind kind = MeasurementKind::Standard;
  std::string observable;
  std::optional<Crossing> crossing;
  std::string crossing_note;
  std::optional<FssaParams> fssa;
  std::string fssa_note;
};

std::string fssa_report_text(const std::vector<DiagnoseReport>& reports);

}  // namespace mipt

#endif  // MIPT_OUTPUT_H_
