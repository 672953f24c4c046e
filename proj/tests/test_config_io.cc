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

#include <cmath>
#include <filesystem>
#include <set>

#include <gtest/gtest.h>

#include "mipt/config_io.h"
#include "mipt/output.h"

namespace mipt {
namespace {

namespace fs = std::filesystem;

std::string field_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.field;
  }
  return "";
}

TEST(Config, MinimalTextTakesDefaults) {
  const RunConfig c = parse_config("L = 6\nd = 3\nkind = predetermined\np = 0.1\n");
  EXPECT_EQ(c.L, 6);
  EXPECT_EQ(c.d, 3);
  EXPECT_EQ(c.measurement.kind, MeasurementKind::Predetermined);
  EXPECT_EQ(c.T, 30.0);
  EXPECT_EQ(c.initial_state, alternating_state(6));
  EXPECT_EQ(c.measurement.pattern, c.initial_state);
  EXPECT_EQ(parse_config("L = 4\np = 0.1\n").T, 20.0);
}

TEST(Config, RoundTripIsIdempotent) {
  RunConfig c = default_config(6, 3, MeasurementKind::Predetermined, 0.1);
  c.dt = 0.1;
  c.T = 3.0;
  c.iterations = 123;
  c.master_seed = 0xdeadbeefcafeULL;
  c.bh.mean_omega = 0.3;
  c.bh.sigma_U = 0.05;
  c.bh.boundary = Boundary::Periodic;
  c.measurement.pattern = {2, 0, 1, 1, 0, 2};
  c.log_outcomes = true;
  const std::string text = serialize_config(c);
  const RunConfig back = parse_config(text);
  EXPECT_EQ(serialize_config(back), text);
  EXPECT_EQ(back.master_seed, c.master_seed);
  EXPECT_EQ(back.measurement.pattern, c.measurement.pattern);
  EXPECT_EQ(back.dt, 0.1);
  EXPECT_EQ(back.bh.boundary, Boundary::Periodic);
}

TEST(Config, ErrorsNameTheField) {
  EXPECT_EQ(field_of("L = 4\np = 0.1\nfoo = 1\n"), "foo");
  EXPECT_EQ(field_of("L = four\np = 0.1\n"), "L");
  EXPECT_EQ(field_of("L = 4\np = 1.5\n"), "p");
  EXPECT_EQ(field_of("L = 4\np = 0.1\nkind = weak\n"), "kind");
  EXPECT_EQ(field_of("L = 4\np = 0.1\ndt = 0.03\nT = 1\n"), "T");
  EXPECT_EQ(field_of("L = 4\np = 0.1\npattern = [1, 0]\nkind = predetermined\n"), "pattern");
  EXPECT_EQ(field_of("L = 4\np = 0.1\nboundary = ring\n"), "boundary");
  EXPECT_THROW(parse_config("L = 4\nL = 6\np = 0.1\n"), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/config.txt"), std::runtime_error);
}

TEST(Plan, ParseAndSerialize) {
  const SweepPlan plan = parse_plan(
      "d = 2\nT = 1\ndt = 0.05\niterations = 10\n"
      "p_values = [0.1, 0.2]\nL_values = [4, 6]\nkinds = [standard, predetermined]\n"
      "output_dir = results\n");
  EXPECT_EQ(plan.p_values, (std::vector<double>{0.1, 0.2}));
  EXPECT_EQ(plan.L_values, (std::vector<int>{4, 6}));
  ASSERT_EQ(plan.kinds.size(), 2u);
  EXPECT_EQ(plan.output_dir, "results");
  const SweepPlan back = parse_plan(serialize_plan(plan));
  EXPECT_EQ(serialize_plan(back), serialize_plan(plan));
  const RunConfig c = cell_config(plan, MeasurementKind::Predetermined, 6, 0.2);
  EXPECT_EQ(c.L, 6);
  EXPECT_EQ(c.measurement.p, 0.2);
  EXPECT_EQ(c.measurement.pattern, alternating_state(6));
  EXPECT_EQ(c.master_seed, cell_seed(plan.base.master_seed, MeasurementKind::Predetermined, 6, 0.2));
  EXPECT_THROW(parse_plan("p_values = []\nL_values = [4]\nkinds = [standard]\n"), ConfigError);
}

TEST(Plan, CellSeedsAreDistinct) {
  std::set<std::uint64_t> seeds;
  int n = 0;
  for (auto k : {MeasurementKind::Standard, MeasurementKind::Predetermined}) {
    for (int L : {4, 6, 8, 10, 12}) {
      for (double p = 0.01; p < 0.5; p += 0.01) {
        seeds.insert(cell_seed(7, k, L, p));
        ++n;
      }
    }
  }
  EXPECT_EQ(static_cast<int>(seeds.size()), n);
  EXPECT_EQ(cell_seed(7, MeasurementKind::Standard, 4, 0.1), cell_seed(7, MeasurementKind::Standard, 4, 0.1));
}

TEST(Output, RecordLineRoundTrip) {
  RunConfig c = default_config(4, 2, MeasurementKind::Standard, 0.3);
  c.T = 0.4;
  c.dt = 0.1;
  c.log_outcomes = true;
  const TrajectoryRecord r = TrajectoryEngine(c).run(5);
  const TrajectoryRecord back = record_from_line(record_to_line(r));
  EXPECT_EQ(back, r);
  EXPECT_EQ(record_to_line(r).find('\n'), std::string::npos);
}

TEST(Output, CurvesRoundTrip) {
  CurveRow a;
  a.kind = MeasurementKind::Predetermined;
  a.L = 6;
  a.p = 0.07;
  a.iterations = 100;
  a.T = 20;
  a.dt = 0.02;
  a.entropy = {0.123456789, 0.001};
  a.sector_dispersion = {NAN, NAN};
  CurveRow b = a;
  b.kind = MeasurementKind::Standard;
  b.p = 0.1;
  const auto rows = parse_curves_csv(curves_csv({a, b}));
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].entropy.value, 0.123456789);
  EXPECT_TRUE(std::isnan(rows[0].sector_dispersion.value));
  EXPECT_EQ(rows[1].kind, MeasurementKind::Standard);
  EXPECT_EQ(curves_csv(rows), curves_csv({a, b}));
  EXPECT_EQ(curves_csv({}).substr(0, curves_header().size()), curves_header());
}

TEST(Output, HistogramRoundTrip) {
  IntHistogram h(3);
  for (int v : {0, 1, 1, 3, 3, 3}) h.add(v);
  EXPECT_EQ(parse_histogram_csv(histogram_csv(h)), h);
  EXPECT_EQ(histogram_filename("n_half", 0.05, 8), "hist_n_half_0.05_8.csv");
}

TEST(Output, AtomicWriteReplacesContent) {
  const fs::path dir = fs::temp_directory_path() / "mipt_atomic_test" / "nested";
  fs::remove_all(dir.parent_path());
  const std::string path = (dir / "f.txt").string();
  write_file_atomic(path, "one");
  write_file_atomic(path, "two");
  EXPECT_EQ(read_file(path), "two");
  int files = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++files;
  EXPECT_EQ(files, 1);
  fs::remove_all(dir.parent_path());
}

TEST(Output, NumberFormatting) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(NAN), "nan");
  EXPECT_EQ(std::stod(format_number(1.0 / 3)), 1.0 / 3);
}

}  // namespace
}  // namespace mipt
