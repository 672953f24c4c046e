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

// Command-line front end: simulate, sweep, diagnose, replica, oracle.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "mipt/config_io.h"
#include "mipt/diagnostics.h"
#include "mipt/exact_oracle.h"
#include "mipt/output.h"
#include "mipt/replica.h"
#include "mipt/trajectory.h"

namespace fs = std::filesystem;
using namespace mipt;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitInput = 2;

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

void write_cell_histograms(const std::string& dir, const RunConfig& c, const EnsembleStats& s) {
  const double p = c.measurement.p;
  write_file_atomic(join(dir, histogram_filename("n_half", p, c.L)), histogram_csv(s.n_half));
  write_file_atomic(join(dir, histogram_filename("n_total", p, c.L)), histogram_csv(s.n_total));
  write_file_atomic(join(dir, histogram_filename("n_mid_left", p, c.L)),
                    histogram_csv(s.n_mid_left));
  write_file_atomic(join(dir, histogram_filename("n_mid_right", p, c.L)),
                    histogram_csv(s.n_mid_right));
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir, int workers,
                 bool records) {
  const RunConfig c = load_config(config_path);
  const EnsembleResult res = run_ensemble(c, workers, records);
  if (records) write_file_atomic(join(out_dir, "records.ndtxt"), records_text(res.records));
  write_file_atomic(join(out_dir, "summary.txt"), summary_text(c, res.stats));
  write_file_atomic(join(out_dir, "config.txt"), serialize_config(c));
  write_cell_histograms(out_dir, c, res.stats);
  std::cout << summary_text(c, res.stats);
  return 0;
}

int cmd_sweep(const std::string& plan_path, const std::string& out_override, int workers) {
  SweepPlan plan = load_plan(plan_path);
  if (!out_override.empty()) plan.output_dir = out_override;
  if (workers > 0) plan.workers = workers;
  fs::create_directories(plan.output_dir);
  write_file_atomic(join(plan.output_dir, "plan.txt"), serialize_plan(plan));
  write_file_atomic(join(plan.output_dir, "curves_units.txt"), curves_units_note());
  std::vector<CurveRow> rows;
  for (MeasurementKind kind : plan.kinds) {
    const std::string dir = join(plan.output_dir, to_string(kind));
    for (int L : plan.L_values) {
      for (double p : plan.p_values) {
        const RunConfig c = cell_config(plan, kind, L, p);
        const std::string tag = format_number(p) + "_" + std::to_string(L);
        const std::string cell_file = join(dir, "cell_" + tag + ".txt");
        const std::string cfg_text = serialize_config(c);
        if (fs::exists(cell_file)) {
          const std::string prev = read_file(cell_file);
          const auto split = prev.find("\n#row\n");
          if (split != std::string::npos && prev.substr(0, split + 1) == cfg_text) {
            const auto r = parse_curves_csv(prev.substr(split + 6));
            if (r.size() == 1) {
              rows.push_back(r.front());
              std::cerr << "resume " << to_string(kind) << " L=" << L << " p=" << p << "\n";
              continue;
            }
          }
        }
        const EnsembleResult res = run_ensemble(c, plan.workers, true);
        write_file_atomic(join(dir, "records_" + tag + ".ndtxt"), records_text(res.records));
        write_cell_histograms(dir, c, res.stats);
        const CurveRow row = make_curve_row(c, res.stats);
        write_file_atomic(cell_file, cfg_text + "#row\n" + curves_csv({row}));
        rows.push_back(row);
        std::cerr << "done " << to_string(kind) << " L=" << L << " p=" << p
                  << " S=" << row.entropy.value << "\n";
      }
    }
  }
  write_file_atomic(join(plan.output_dir, "curves.csv"), curves_csv(rows));
  return 0;
}

int cmd_diagnose(const std::string& curves_path, const std::string& report_path,
                 const std::string& observable, const std::string& site, int distance_power) {
  const std::vector<CurveRow> rows = parse_curves_csv(read_file(curves_path));
  const std::string dir = fs::path(curves_path).parent_path().string();
  std::map<MeasurementKind, std::map<int, std::vector<CurveRow>>> by_kind;
  for (const auto& r : rows) by_kind[r.kind][r.L].push_back(r);
  std::vector<DiagnoseReport> reports;
  for (auto& [kind, by_L] : by_kind) {
    DiagnoseReport rep;
    rep.kind = kind;
    rep.observable = observable;
    // Crossing of the mid-site distance curves, largest L with histograms.
    for (auto it = by_L.rbegin(); it != by_L.rend() && !rep.crossing; ++it) {
      const int L = it->first;
      const Occupation pattern = alternating_state(L);
      const int mid = site == "right" ? L / 2 : L / 2 - 1;
      std::vector<CrossingSample> sweep;
      bool complete = true;
      for (const auto& r : it->second) {
        const std::string path = join(join(dir, to_string(kind)),
                                      histogram_filename("n_mid_" + site, r.p, L));
        if (!fs::exists(path)) {
          complete = false;
          break;
        }
        const IntHistogram h = parse_histogram_csv(read_file(path));
        std::vector<double> obs = h.normalized();
        const int d = static_cast<int>(obs.size());
        const ReferenceDistributions ref = reference_distributions(L, d, pattern, mid);
        sweep.push_back({r.p, distribution_distance(obs, ref.uniform_site, distance_power),
                         distribution_distance(obs, ref.delta_site, distance_power)});
      }
      if (!complete || sweep.empty()) continue;
      std::sort(sweep.begin(), sweep.end(),
                [](const CrossingSample& a, const CrossingSample& b) { return a.p < b.p; });
      rep.crossing = find_crossing(sweep);
      if (!rep.crossing) rep.crossing_note = "no crossing at L = " + std::to_string(L);
      break;
    }
    if (!rep.crossing && rep.crossing_note.empty()) rep.crossing_note = "no histogram files found";

    std::vector<ScalingCurve> curves;
    std::vector<double> all_p;
    for (auto& [L, rs] : by_L) {
      std::sort(rs.begin(), rs.end(), [](const CurveRow& a, const CurveRow& b) { return a.p < b.p; });
      ScalingCurve sc;
      sc.L = L;
      for (const auto& r : rs) {
        const Estimate& e = observable == "F" ? r.fluctuation : r.entropy;
        sc.p.push_back(r.p);
        sc.y.push_back(e.value);
        sc.dy.push_back(e.error);
        all_p.push_back(r.p);
      }
      curves.push_back(sc);
    }
    try {
      std::sort(all_p.begin(), all_p.end());
      FssaParams init;
      init.p_c = rep.crossing ? rep.crossing->p_c : all_p[all_p.size() / 2];
      init.nu = 1.5;
      init.zeta = 0.5;
      rep.fssa = fssa_collapse(curves, init);
    } catch (const std::exception& e) {
      rep.fssa_note = e.what();
    }
    reports.push_back(rep);
  }
  const std::string text = fssa_report_text(reports);
  write_file_atomic(report_path.empty() ? join(dir, "fssa_report.txt") : report_path, text);
  std::cout << text;
  return 0;
}

int cmd_replica(int L, int d, double lambda, const std::string& kind_name, double omega,
                double U) {
  ReplicaModel m;
  m.L = L;
  m.d = d;
  m.omega = omega;
  m.U = U;
  if (kind_name == "predetermined") {
    m.kind = ReplicaKind::Predetermined;
    m.pattern = alternating_state(L);
  } else if (kind_name == "projector") {
    m.kind = ReplicaKind::Projector;
    m.pattern.assign(L, 1);
  } else {
    throw ConfigError("kind", "expected predetermined or projector");
  }
  const ReplicaSpace sp(L, d);
  const SparseKet pert = perturb_ground(m, lambda);
  std::optional<SparseKet> exact;
  std::string exact_note;
  try {
    const EnlargedOperators ops = build_enlarged_heff(m, lambda);
    exact = dense_to_sparse(exact_ground_biortho(ops.Heff).right);
  } catch (const std::length_error& e) {
    exact_note = e.what();
  }
  ReplicaClosedForms cf;
  const bool have_cf = d == (m.kind == ReplicaKind::Predetermined ? 2 : 3);
  if (have_cf) {
    cf = m.kind == ReplicaKind::Predetermined ? predetermined_closed_forms(L, lambda)
                                              : projector_closed_forms(L, lambda);
  }
  const std::vector<int> half = site_range(0, L / 2);
  const std::vector<int> all = site_range(0, L);
  struct Line {
    std::string name;
    ReplicaObservable obs;
    std::vector<int> region;
    double closed;
  };
  std::vector<Line> lines = {
      {"S_half", ReplicaObservable::EntropyLeft, half, cf.entropy_half},
      {"F_half", ReplicaObservable::Fluctuation, half, cf.fluctuation_half},
      {"N_total", ReplicaObservable::Number, all, cf.n_total},
  };
  if (m.kind == ReplicaKind::Predetermined && L >= 3) {
    const int mid = L / 2 - 1;  // bulk site
    const bool even1 = (mid + 1) % 2 == 0;
    lines.push_back({"N_site" + std::to_string(mid), ReplicaObservable::Number, {mid},
                     even1 ? cf.n_even : cf.n_odd});
  }
  std::printf("%-10s %22s %22s %22s\n", "observable", "perturbation", "exact", "closed_form");
  for (const auto& ln : lines) {
    const double pv = replica_observable(sp, pert, ln.obs, ln.region).real();
    std::string ev = "n/a";
    if (exact) ev = format_number(replica_observable(sp, *exact, ln.obs, ln.region).real());
    std::printf("%-10s %22.15g %22s %22s\n", ln.name.c_str(), pv, ev.c_str(),
                have_cf ? format_number(ln.closed).c_str() : "n/a");
  }
  if (!exact_note.empty()) std::printf("exact: %s\n", exact_note.c_str());
  return 0;
}

int cmd_oracle(const std::string& config_path, std::uint64_t iterations, int workers) {
  RunConfig c = load_config(config_path);
  if (iterations > 0) c.iterations = iterations;
  OracleOptions opts;
  opts.workers = workers > 0 ? workers : 1;
  const OracleResult ex = enumerate_trajectories(c, opts);
  const EnsembleResult mc = run_ensemble(c, workers, false);
  std::printf("branches %llu, pruned weight %.3g\n",
              static_cast<unsigned long long>(ex.branches), ex.pruned_weight);
  std::printf("%-10s %20s %20s %14s %8s\n", "observable", "enumeration", "monte_carlo", "stderr",
              "z");
  auto line = [](const char* name, double exact, const Estimate& e) {
    const double z = e.error > 0 ? (e.value - exact) / e.error : (e.value == exact ? 0.0 : INFINITY);
    std::printf("%-10s %20.12g %20.12g %14.4g %8.3f\n", name, exact, e.value, e.error, z);
  };
  line("S_half", ex.trajectory.entropy.first, mean_estimate(mc.stats.entropy));
  line("F_half", ex.trajectory.fluctuation.first, mean_estimate(mc.stats.fluctuation));
  line("N_total", ex.trajectory.n_total.first, mean_estimate(mc.stats.expected_n_total));
  line("N_half", ex.trajectory.n_half.first, mean_estimate(mc.stats.expected_n_half));
  line("dN", ex.dispersion(), dispersion_estimate(mc.stats.n_half));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monitored Bose-Hubbard circuit simulator"};
  app.require_subcommand(1);
  int workers = 0;
  app.add_option("--workers", workers, "Worker threads (default: MIPT_WORKERS or all cores)");

  std::string config_path, out_dir = ".";
  bool no_records = false;
  auto* sim = app.add_subcommand("simulate", "Run one ensemble");
  sim->add_option("--config", config_path, "Config file")->required();
  sim->add_option("--out", out_dir, "Output directory");
  sim->add_flag("--no-records", no_records, "Skip records.ndtxt");
  sim->add_option("--workers", workers, "Worker threads");

  std::string plan_path, sweep_out;
  auto* sweep = app.add_subcommand("sweep", "Run a (kind, L, p) sweep");
  sweep->add_option("--plan", plan_path, "Plan file")->required();
  sweep->add_option("--out", sweep_out, "Override the plan's output directory");
  sweep->add_option("--workers", workers, "Worker threads");

  std::string curves_path, report_path, observable = "S", site = "left";
  int distance_power = 1;
  auto* diag = app.add_subcommand("diagnose", "Crossing point and scaling collapse");
  diag->add_option("--curves", curves_path, "curves.csv from sweep")->required();
  diag->add_option("--report", report_path, "Report path (default: next to curves)");
  diag->add_option("--observable", observable, "S or F")->check(CLI::IsMember({"S", "F"}));
  diag->add_option("--site", site, "Mid site for the crossing")->check(CLI::IsMember({"left", "right"}));
  diag->add_option("--distance-power", distance_power, "Exponent s of the distance")
      ->check(CLI::PositiveNumber);

  int rL = 2, rd = 2;
  double lambda = 0.05, omega = 0.0, U = 0.0;
  std::string rkind = "predetermined";
  auto* rep = app.add_subcommand("replica", "Replica observables: perturbation, exact, closed form");
  rep->add_option("--L", rL, "Sites")->required()->check(CLI::Range(1, 8));
  rep->add_option("--lambda", lambda, "J / Gamma")->required();
  rep->add_option("--d", rd, "Local dimension")->check(CLI::Range(2, 8));
  rep->add_option("--kind", rkind, "predetermined or projector");
  rep->add_option("--omega", omega, "Mean on-site frequency in units of J");
  rep->add_option("--U", U, "Mean interaction in units of J");

  std::string oracle_config;
  std::uint64_t oracle_iterations = 0;
  auto* orc = app.add_subcommand("oracle", "Exact enumeration against Monte Carlo");
  orc->add_option("--config", oracle_config, "Config file")->required();
  orc->add_option("--iterations", oracle_iterations, "Override the Monte Carlo iteration count");
  orc->add_option("--workers", workers, "Worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInput;
  }

  try {
    if (*sim) return cmd_simulate(config_path, out_dir, workers, !no_records);
    if (*sweep) return cmd_sweep(plan_path, sweep_out, workers);
    if (*diag) return cmd_diagnose(curves_path, report_path, observable, site, distance_power);
    if (*rep) return cmd_replica(rL, rd, lambda, rkind, omega, U);
    if (*orc) return cmd_oracle(oracle_config, oracle_iterations, workers);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
