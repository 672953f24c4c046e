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

#include "mipt/config_io.h"

#include <bit>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "CLI11.hpp"

namespace mipt {

namespace {

using KeyValues = std::map<std::string, std::vector<std::string>>;

KeyValues read_items(const std::string& text) {
  std::istringstream in(text);
  const std::vector<CLI::ConfigItem> items = CLI::ConfigTOML().from_config(in);
  KeyValues kv;
  for (const auto& item : items) {
    if (item.name == "++" || item.name == "--") continue;
    if (!item.parents.empty()) {
      throw ConfigError(item.parents.front(), "sections are not supported");
    }
    if (!kv.emplace(item.name, item.inputs).second) throw ConfigError(item.name, "duplicate key");
  }
  return kv;
}

std::string unquote(std::string s) {
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
    s = s.substr(1, s.size() - 2);
  }
  return s;
}

class Reader {
 public:
  explicit Reader(KeyValues kv) : kv_(std::move(kv)) {}

  bool has(const std::string& key) const { return kv_.count(key) > 0; }

  std::string scalar(const std::string& key) {
    const auto& v = take(key);
    if (v.size() != 1) throw ConfigError(key, "expected a single value");
    return unquote(v.front());
  }

  std::vector<std::string> list(const std::string& key) {
    std::vector<std::string> out;
    for (const auto& s : take(key)) {
      if (!s.empty()) out.push_back(unquote(s));
    }
    return out;
  }

  template <typename T>
  void integer(const std::string& key, T& out) {
    if (has(key)) out = parse_integer<T>(key, scalar(key));
  }
  void real(const std::string& key, double& out) {
    if (has(key)) out = parse_real(key, scalar(key));
  }
  void boolean(const std::string& key, bool& out) {
    if (!has(key)) return;
    const std::string s = scalar(key);
    if (s == "true" || s == "1") {
      out = true;
    } else if (s == "false" || s == "0") {
      out = false;
    } else {
      throw ConfigError(key, "expected true or false, got '" + s + "'");
    }
  }
  void int_list(const std::string& key, std::vector<int>& out) {
    if (!has(key)) return;
    out.clear();
    for (const auto& s : list(key)) out.push_back(parse_integer<int>(key, s));
  }
  void real_list(const std::string& key, std::vector<double>& out) {
    if (!has(key)) return;
    out.clear();
    for (const auto& s : list(key)) out.push_back(parse_real(key, s));
  }

  /// Throws on the first key that was never consumed.
  void finish() const {
    for (const auto& [k, v] : kv_) {
      if (!used_.count(k)) throw ConfigError(k, "unknown key");
    }
  }

  template <typename T>
  static T parse_integer(const std::string& key, const std::string& s) {
    T v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw ConfigError(key, "expected an integer, got '" + s + "'");
    }
    return v;
  }

  static double parse_real(const std::string& key, const std::string& s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw ConfigError(key, "expected a number, got '" + s + "'");
    }
    return v;
  }

 private:
  const std::vector<std::string>& take(const std::string& key) {
    used_.insert(key);
    return kv_.at(key);
  }

  KeyValues kv_;
  std::set<std::string> used_;
};

Boundary boundary_from_string(const std::string& s) {
  if (s == "open") return Boundary::Open;
  if (s == "periodic") return Boundary::Periodic;
  throw ConfigError("boundary", "expected open or periodic, got '" + s + "'");
}

std::string fmt(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string fmt_list(const std::vector<int>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
  return s + "]";
}

std::string fmt_list(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
  return s + "]";
}

RunConfig read_config(Reader& r) {
  RunConfig c;
  r.integer("L", c.L);
  r.integer("d", c.d);
  r.boolean("sector_restricted", c.sector_restricted);
  if (r.has("kind")) {
    try {
      c.measurement.kind = measurement_kind_from_string(r.scalar("kind"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError("kind", e.what());
    }
  }
  r.real("p", c.measurement.p);
  c.T = c.d == 2 ? 20.0 : 30.0;
  r.real("dt", c.dt);
  r.real("T", c.T);
  r.integer("iterations", c.iterations);
  r.integer("master_seed", c.master_seed);
  r.integer("disorder_seed", c.disorder_seed);
  r.boolean("log_outcomes", c.log_outcomes);
  r.real("omega", c.bh.mean_omega);
  r.real("U", c.bh.mean_U);
  r.real("J", c.bh.mean_J);
  r.real("sigma_omega", c.bh.sigma_omega);
  r.real("sigma_U", c.bh.sigma_U);
  r.real("sigma_J", c.bh.sigma_J);
  if (r.has("boundary")) c.bh.boundary = boundary_from_string(r.scalar("boundary"));
  if (r.has("propagator")) {
    try {
      c.propagator.mode = propagator_mode_from_string(r.scalar("propagator"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError("propagator", e.what());
    }
  }
  r.integer("auto_threshold", c.propagator.auto_threshold);
  r.real("krylov_tol", c.propagator.krylov_tol);
  r.integer("krylov_max_dim", c.propagator.krylov_max_dim);
  if (c.L < 1 || c.L > 64) throw ConfigError("L", "must lie in [1, 64]");
  c.initial_state = alternating_state(c.L);
  r.int_list("initial_state", c.initial_state);
  c.measurement.pattern = c.initial_state;
  r.int_list("pattern", c.measurement.pattern);
  return c;
}

void validate_config(const RunConfig& c) {
  try {
    c.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    const auto colon = msg.find(':');
    if (colon == std::string::npos) throw ConfigError("config", msg);
    throw ConfigError(msg.substr(0, colon), msg.substr(colon + 2));
  }
}

void write_config(std::ostringstream& o, const RunConfig& c) {
  o << "L = " << c.L << "\n";
  o << "d = " << c.d << "\n";
  o << "sector_restricted = " << (c.sector_restricted ? "true" : "false") << "\n";
  o << "kind = \"" << to_string(c.measurement.kind) << "\"\n";
  o << "p = " << fmt(c.measurement.p) << "\n";
  o << "pattern = " << fmt_list(c.measurement.pattern) << "\n";
  o << "initial_state = " << fmt_list(c.initial_state) << "\n";
  o << "dt = " << fmt(c.dt) << "\n";
  o << "T = " << fmt(c.T) << "\n";
  o << "iterations = " << c.iterations << "\n";
  o << "master_seed = " << c.master_seed << "\n";
  o << "disorder_seed = " << c.disorder_seed << "\n";
  o << "log_outcomes = " << (c.log_outcomes ? "true" : "false") << "\n";
  o << "omega = " << fmt(c.bh.mean_omega) << "\n";
  o << "U = " << fmt(c.bh.mean_U) << "\n";
  o << "J = " << fmt(c.bh.mean_J) << "\n";
  o << "sigma_omega = " << fmt(c.bh.sigma_omega) << "\n";
  o << "sigma_U = " << fmt(c.bh.sigma_U) << "\n";
  o << "sigma_J = " << fmt(c.bh.sigma_J) << "\n";
  o << "boundary = \"" << (c.bh.boundary == Boundary::Open ? "open" : "periodic") << "\"\n";
  o << "propagator = \"" << to_string(c.propagator.mode) << "\"\n";
  o << "auto_threshold = " << c.propagator.auto_threshold << "\n";
  o << "krylov_tol = " << fmt(c.propagator.krylov_tol) << "\n";
  o << "krylov_max_dim = " << c.propagator.krylov_max_dim << "\n";
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

RunConfig parse_config(const std::string& text) {
  Reader r(read_items(text));
  RunConfig c = read_config(r);
  r.finish();
  validate_config(c);
  return c;
}

RunConfig load_config(const std::string& path) { return parse_config(read_file(path)); }

std::string serialize_config(const RunConfig& config) {
  std::ostringstream o;
  write_config(o, config);
  return o.str();
}

void SweepPlan::validate() const {
  if (p_values.empty()) throw ConfigError("p_values", "must not be empty");
  if (L_values.empty()) throw ConfigError("L_values", "must not be empty");
  if (kinds.empty()) throw ConfigError("kinds", "must not be empty");
  if (std::set<double>(p_values.begin(), p_values.end()).size() != p_values.size()) {
    throw ConfigError("p_values", "duplicate entry");
  }
  if (std::set<int>(L_values.begin(), L_values.end()).size() != L_values.size()) {
    throw ConfigError("L_values", "duplicate entry");
  }
  if (std::set<MeasurementKind>(kinds.begin(), kinds.end()).size() != kinds.size()) {
    throw ConfigError("kinds", "duplicate entry");
  }
  if (output_dir.empty()) throw ConfigError("output_dir", "must not be empty");
  if (workers < 0) throw ConfigError("workers", "must be non-negative");
  for (double p : p_values) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("p_values", "entries must lie in [0, 1]");
  }
  for (int L : L_values) {
    if (L < 2 || L > 64) throw ConfigError("L_values", "entries must lie in [2, 64]");
  }
  for (auto k : kinds) {
    for (int L : L_values) validate_config(cell_config(*this, k, L, p_values.front()));
  }
}

SweepPlan parse_plan(const std::string& text) {
  Reader r(read_items(text));
  SweepPlan plan;
  plan.base = read_config(r);
  r.real_list("p_values", plan.p_values);
  r.int_list("L_values", plan.L_values);
  if (r.has("kinds")) {
    for (const auto& s : r.list("kinds")) {
      try {
        plan.kinds.push_back(measurement_kind_from_string(s));
      } catch (const std::invalid_argument& e) {
        throw ConfigError("kinds", e.what());
      }
    }
  } else {
    plan.kinds = {plan.base.measurement.kind};
  }
  if (r.has("output_dir")) plan.output_dir = r.scalar("output_dir");
  r.integer("workers", plan.workers);
  r.finish();
  validate_config(plan.base);
  plan.validate();
  return plan;
}

SweepPlan load_plan(const std::string& path) { return parse_plan(read_file(path)); }

std::string serialize_plan(const SweepPlan& plan) {
  std::ostringstream o;
  write_config(o, plan.base);
  o << "p_values = " << fmt_list(plan.p_values) << "\n";
  o << "L_values = " << fmt_list(plan.L_values) << "\n";
  o << "kinds = [";
  for (std::size_t i = 0; i < plan.kinds.size(); ++i) {
    o << (i ? ", " : "") << '"' << to_string(plan.kinds[i]) << '"';
  }
  o << "]\n";
  o << "output_dir = \"" << plan.output_dir << "\"\n";
  o << "workers = " << plan.workers << "\n";
  return o.str();
}

std::uint64_t cell_seed(std::uint64_t master_seed, MeasurementKind kind, int L, double p) {
  std::uint64_t h = splitmix64(master_seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(kind));
  h = splitmix64(h ^ static_cast<std::uint64_t>(L));
  h = splitmix64(h ^ std::bit_cast<std::uint64_t>(p));
  return h;
}

RunConfig cell_config(const SweepPlan& plan, MeasurementKind kind, int L, double p) {
  RunConfig c = plan.base;
  c.L = L;
  c.initial_state = alternating_state(L);
  c.measurement.kind = kind;
  c.measurement.pattern = c.initial_state;
  c.measurement.p = p;
  c.master_seed = cell_seed(plan.base.master_seed, kind, L, p);
  return c;
}

}  // namespace mipt
