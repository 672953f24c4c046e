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

#include "mipt/output.h"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <unistd.h>

#include "json.hpp"

namespace mipt {

namespace fs = std::filesystem;
using nlohmann::json;

void write_file_atomic(const std::string& path, const std::string& content) {
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string record_to_line(const TrajectoryRecord& r) {
  json j;
  j["iteration"] = r.iteration;
  j["S"] = r.entropy_half;
  j["F"] = r.fluctuation_half;
  j["N_half_expected"] = r.expected_n_half;
  j["N_total_expected"] = r.expected_n_total;
  j["config"] = r.sampled_config;
  j["N_half"] = r.n_half;
  j["N_total"] = r.n_total;
  j["N_mid_left"] = r.n_mid_left;
  j["N_mid_right"] = r.n_mid_right;
  j["measurements"] = r.measurement_count;
  if (!r.outcomes.empty()) {
    json ev = json::array();
    for (const auto& e : r.outcomes) ev.push_back({e.step, e.site, e.outcome});
    j["outcomes"] = ev;
    j["kind"] = to_string(r.outcomes.front().kind);
  }
  return j.dump();
}

TrajectoryRecord record_from_line(const std::string& line) {
  const json j = json::parse(line);
  TrajectoryRecord r;
  r.iteration = j.at("iteration").get<std::uint64_t>();
  r.entropy_half = j.at("S").get<double>();
  r.fluctuation_half = j.at("F").get<double>();
  r.expected_n_half = j.at("N_half_expected").get<double>();
  r.expected_n_total = j.at("N_total_expected").get<double>();
  r.sampled_config = j.at("config").get<Occupation>();
  r.n_half = j.at("N_half").get<int>();
  r.n_total = j.at("N_total").get<int>();
  r.n_mid_left = j.at("N_mid_left").get<int>();
  r.n_mid_right = j.at("N_mid_right").get<int>();
  r.measurement_count = j.at("measurements").get<int>();
  if (j.contains("outcomes")) {
    const MeasurementKind kind = measurement_kind_from_string(j.at("kind").get<std::string>());
    for (const auto& e : j.at("outcomes")) {
      r.outcomes.push_back(MeasurementEvent{e.at(0).get<int>(), e.at(1).get<int>(),
                                            e.at(2).get<int>(), kind});
    }
  }
  return r;
}

std::string records_text(const std::vector<TrajectoryRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += record_to_line(r);
    out += '\n';
  }
  return out;
}

namespace {

int pattern_total(const RunConfig& c) {
  int n = 0;
  for (int a : (c.measurement.kind == MeasurementKind::Predetermined ? c.measurement.pattern
                                                                      : c.initial_state)) {
    n += a;
  }
  return n;
}

}  // namespace

CurveRow make_curve_row(const RunConfig& config, const EnsembleStats& stats) {
  CurveRow row;
  row.kind = config.measurement.kind;
  row.L = config.L;
  row.p = config.measurement.p;
  row.iterations = stats.count;
  row.T = config.T;
  row.dt = config.dt;
  row.entropy = mean_estimate(stats.entropy);
  row.fluctuation = mean_estimate(stats.fluctuation);
  row.dispersion = dispersion_estimate(stats.n_half);
  const int n = pattern_total(config);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  row.sector_dispersion = {nan, nan};
  if (auto it = stats.sectors.find(n); it != stats.sectors.end()) {
    row.sector_count = it->second.count;
    try {
      row.sector_dispersion = sector_dispersion(stats, n);
    } catch (const InsufficientData&) {
    }
  }
  row.n_total = mean_estimate(stats.expected_n_total);
  row.n_mid_left = mean_estimate(stats.n_mid_left);
  row.n_mid_right = mean_estimate(stats.n_mid_right);
  return row;
}

std::string summary_text(const RunConfig& config, const EnsembleStats& stats) {
  const CurveRow r = make_curve_row(config, stats);
  std::ostringstream o;
  o << "kind " << to_string(r.kind) << "\n";
  o << "L " << r.L << "\n";
  o << "p " << format_number(r.p) << "\n";
  o << "iterations " << r.iterations << "\n";
  o << "T_inv_J " << format_number(r.T) << "\n";
  o << "dt_inv_J " << format_number(r.dt) << "\n";
  o << "observable,mean,stderr\n";
  auto line = [&](const char* name, const Estimate& e) {
    o << name << ',' << format_number(e.value) << ',' << format_number(e.error) << "\n";
  };
  line("S_nats", r.entropy);
  line("F", r.fluctuation);
  line("dN", r.dispersion);
  line("dN_sector", r.sector_dispersion);
  line("N_total", r.n_total);
  line("N_half_expected", mean_estimate(stats.expected_n_half));
  line("N_mid_left", r.n_mid_left);
  line("N_mid_right", r.n_mid_right);
  o << "sector_count " << r.sector_count << "\n";
  return o.str();
}

std::string curves_header() {
  return "kind,L,p,iterations,T_inv_J,dt_inv_J,S_nats,S_nats_err,F,F_err,dN,dN_err,"
         "dN_sector,dN_sector_err,sector_count,N_total,N_total_err,N_mid_left,N_mid_left_err,"
         "N_mid_right,N_mid_right_err";
}

std::string curves_csv(const std::vector<CurveRow>& rows) {
  std::ostringstream o;
  o << curves_header() << "\n";
  auto est = [&](const Estimate& e) {
    o << ',' << format_number(e.value) << ',' << format_number(e.error);
  };
  for (const auto& r : rows) {
    o << to_string(r.kind) << ',' << r.L << ',' << format_number(r.p) << ',' << r.iterations << ','
      << format_number(r.T) << ',' << format_number(r.dt);
    est(r.entropy);
    est(r.fluctuation);
    est(r.dispersion);
    est(r.sector_dispersion);
    o << ',' << r.sector_count;
    est(r.n_total);
    est(r.n_mid_left);
    est(r.n_mid_right);
    o << "\n";
  }
  return o.str();
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument("bad number '" + s + "'");
  }
  return v;
}

std::uint64_t parse_uint(const std::string& s) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument("bad integer '" + s + "'");
  }
  return v;
}

}  // namespace

std::vector<CurveRow> parse_curves_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || split_csv_line(line) != split_csv_line(curves_header())) {
    throw std::invalid_argument("curves file: unexpected header");
  }
  std::vector<CurveRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 21) {
      throw std::invalid_argument("curves file line " + std::to_string(lineno) + ": expected 21 fields");
    }
    try {
      CurveRow r;
      r.kind = measurement_kind_from_string(f[0]);
      r.L = static_cast<int>(parse_uint(f[1]));
      r.p = parse_double(f[2]);
      r.iterations = parse_uint(f[3]);
      r.T = parse_double(f[4]);
      r.dt = parse_double(f[5]);
      auto est = [&](int i) { return Estimate{parse_double(f[i]), parse_double(f[i + 1])}; };
      r.entropy = est(6);
      r.fluctuation = est(8);
      r.dispersion = est(10);
      r.sector_dispersion = est(12);
      r.sector_count = parse_uint(f[14]);
      r.n_total = est(15);
      r.n_mid_left = est(17);
      r.n_mid_right = est(19);
      rows.push_back(r);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("curves file line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return rows;
}

std::string curves_units_note() {
  return "Columns of curves.csv\n"
         "kind: measurement kind\n"
         "L: number of sites\n"
         "p: measurement probability per site and circuit layer (dimensionless)\n"
         "iterations: circuit iterations in the cell\n"
         "T_inv_J, dt_inv_J: total time and layer time in units of 1/J\n"
         "S_nats: mean half-chain von Neumann entropy, natural log\n"
         "F: mean half-chain number fluctuation <N^2> - <N>^2 (bosons^2)\n"
         "dN: variance over iterations of the sampled half-chain number (bosons^2)\n"
         "dN_sector: same, restricted to samples whose total equals the pattern total\n"
         "sector_count: samples in that sector\n"
         "N_total: mean expected total boson number\n"
         "N_mid_left, N_mid_right: mean sampled occupation of sites L/2-1 and L/2 (0-based)\n"
         "*_err: one standard error\n";
}

std::string histogram_csv(const IntHistogram& h) {
  std::ostringstream o;
  o << "value,count\n";
  for (int v = 0; v <= h.max_value(); ++v) o << v << ',' << h.counts()[v] << "\n";
  return o.str();
}

IntHistogram parse_histogram_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "value,count") {
    throw std::invalid_argument("histogram file: unexpected header");
  }
  std::vector<std::pair<int, std::uint64_t>> rows;
  int max_v = -1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 2) throw std::invalid_argument("histogram file: expected 2 fields");
    const int v = static_cast<int>(parse_uint(f[0]));
    rows.emplace_back(v, parse_uint(f[1]));
    max_v = std::max(max_v, v);
  }
  if (max_v < 0) throw std::invalid_argument("histogram file: no rows");
  IntHistogram h(max_v);
  for (const auto& [v, c] : rows) {
    for (std::uint64_t k = 0; k < c; ++k) h.add(v);
  }
  return h;
}

std::string histogram_filename(const std::string& obs, double p, int L) {
  return "hist_" + obs + "_" + format_number(p) + "_" + std::to_string(L) + ".csv";
}

std::string fssa_report_text(const std::vector<DiagnoseReport>& reports) {
  std::ostringstream o;
  o.precision(6);
  for (const auto& r : reports) {
    o << "[" << to_string(r.kind) << " " << r.observable << "]\n";
    if (r.crossing) {
      o << "crossing p_c = " << r.crossing->p_c << " (bracket " << r.crossing->p_lo << " .. "
        << r.crossing->p_hi << ")\n";
    } else if (!r.crossing_note.empty()) {
      o << "crossing: " << r.crossing_note << "\n";
    }
    if (r.fssa) {
      const FssaParams& f = *r.fssa;
      o << "fssa p_c = " << f.p_c << " +- " << f.dp_c << "\n";
      o << "fssa nu = " << f.nu << " +- " << f.dnu << "\n";
      o << "fssa zeta = " << f.zeta << " +- " << f.dzeta << "\n";
      o << "fssa quality S = " << f.quality << " over " << f.points << " points\n";
    } else if (!r.fssa_note.empty()) {
      o << "fssa: " << r.fssa_note << "\n";
    }
    o << "\n";
  }
  return o.str();
}

}  // namespace mipt
