// Copyright 2026 The nmgauss Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// nmgauss-cli — experiment runner over the public C API.
//
// Subcommands
//   kossakowski-scan   table of C(t, t0) with its eigenvalue range
//   fig1               fidelity trajectories across noise rates + summary
//   divisibility       per-criterion memory verdicts (JSON report)
//   semigroup-check    composition-law deviation over configured triples
//   violation-search   explicit positivity violation of an intertwiner
//   mc-validate        stochastic closure test of the Gram matrix
//
// Every run is driven by a single JSON config (all fields optional; defaults
// materialized and echoed into the output), plus --seed to override the
// config seed. Table subcommands emit CSV by default or JSON via --format;
// report subcommands are JSON only. Exit codes: 0 success, 2 config error,
// 3 numeric failure, 4 acceptance-check failure (mc-validate).
//
// Physical conventions are fixed, never configurable: hbar = 1, unit mass,
// phase-space order (x, p), symplectic form [[0, 1], [-1, 0]], vacuum
// covariance identity/2.

#include <array>
#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "nmgauss.h"

using nlohmann::json;

namespace {

struct CliError {
  int code;            // process exit code (2 config, 3 numeric)
  std::string message;
};

// ------------------------------------------------------------------
// Configuration: defaults, strict parsing, materialized echo
// ------------------------------------------------------------------

struct Settings {
  // hamiltonian: "free_particle", "oscillator", or a custom hessian
  std::string hamiltonian = "free_particle";
  std::array<double, 3> hessian{0.0, 0.0, 1.0};

  // kernel
  std::string kernel_type = "ou";  // "white" | "ou" | "tabulated"
  double gamma = 1.0;
  double d_q = 1.0;
  double d_p = 0.0;
  std::array<double, 3> weight{1.0, 0.0, 0.0};
  std::string kernel_csv;

  // time grid for scans and trajectories
  double grid_start = 0.0;
  double grid_stop = 10.0;
  double grid_step = 0.01;
  double t0 = 0.0;

  // fig1: either a symmetric squeezing parameter or two raw covariance
  // matrices
  std::vector<double> gammas{0.1, 1.0, 10.0};
  double state_r = 1.5;
  bool states_raw = false;
  std::array<double, 3> cm1{0.5, 0.0, 0.5};
  std::array<double, 3> cm2{0.5, 0.0, 0.5};

  // divisibility probes
  std::vector<std::array<double, 2>> pairs{{0.5, 1.0}, {1.0, 2.0}, {2.0, 5.0}};
  std::vector<std::array<double, 3>> triples{
      {0.0, 1.0, 2.0}, {0.0, 0.5, 1.5}, {0.5, 1.0, 2.0}};
  double violation_t0 = 1.0;
  double violation_dt = 0.01;

  // Monte Carlo closure
  double mc_t0 = 0.0;
  double mc_t = 1.0;
  double mc_dt = 1e-3;
  uint64_t mc_n_paths = 20000;

  // tolerances
  double tol_nonmono = 1e-9;
  double tol_semigroup = 1e-6;
  double z_max = 4.0;

  uint64_t seed = 12345;
  std::string out;  // empty means stdout; the --out flag overrides
};

void reject_unknown(const json& obj, const std::string& scope,
                    std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw CliError{2, "unknown config field '" + scope + item.key() + "'"};
    }
  }
}

double get_number(const json& obj, const std::string& scope, const char* key,
                  double fallback) {
  if (!obj.contains(key)) {
    return fallback;
  }
  const json& v = obj.at(key);
  if (!v.is_number()) {
    throw CliError{2, "config field '" + scope + key + "' must be a number"};
  }
  return v.get<double>();
}

uint64_t get_unsigned(const json& obj, const std::string& scope,
                      const char* key, uint64_t fallback) {
  if (!obj.contains(key)) {
    return fallback;
  }
  const json& v = obj.at(key);
  if (!v.is_number_unsigned()) {
    throw CliError{2, "config field '" + scope + key +
                          "' must be a non-negative integer"};
  }
  return v.get<uint64_t>();
}

std::array<double, 3> get_triplet(const json& v, const std::string& what) {
  if (!v.is_array() || v.size() != 3 || !v[0].is_number() ||
      !v[1].is_number() || !v[2].is_number()) {
    throw CliError{2, "config field '" + what +
                          "' must be an array of 3 numbers"};
  }
  return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

void parse_hamiltonian(const json& root, Settings* s) {
  if (!root.contains("hamiltonian")) {
    return;
  }
  const json& h = root.at("hamiltonian");
  if (h.is_string()) {
    const auto name = h.get<std::string>();
    if (name == "free_particle") {
      s->hamiltonian = name;
      s->hessian = {0.0, 0.0, 1.0};
    } else if (name == "oscillator") {
      s->hamiltonian = name;
      s->hessian = {1.0, 0.0, 1.0};
    } else {
      throw CliError{2, "config field 'hamiltonian' must be 'free_particle', "
                        "'oscillator', or {\"hessian\": [xx, xp, pp]}"};
    }
  } else if (h.is_object()) {
    reject_unknown(h, "hamiltonian.", {"hessian"});
    if (!h.contains("hessian")) {
      throw CliError{2, "config field 'hamiltonian' object needs 'hessian'"};
    }
    s->hamiltonian = "quadratic";
    s->hessian = get_triplet(h.at("hessian"), "hamiltonian.hessian");
  } else {
    throw CliError{2, "config field 'hamiltonian' must be a string or object"};
  }
}

void parse_kernel(const json& root, Settings* s) {
  if (!root.contains("kernel")) {
    return;
  }
  const json& k = root.at("kernel");
  if (!k.is_object() || !k.contains("type") || !k.at("type").is_string()) {
    throw CliError{2, "config field 'kernel' must be an object with 'type'"};
  }
  const auto type = k.at("type").get<std::string>();
  if (type == "ou") {
    reject_unknown(k, "kernel.", {"type", "gamma", "d_q", "d_p"});
    s->kernel_type = type;
    s->gamma = get_number(k, "kernel.", "gamma", s->gamma);
    s->d_q = get_number(k, "kernel.", "d_q", s->d_q);
    s->d_p = get_number(k, "kernel.", "d_p", s->d_p);
    if (!(s->gamma > 0.0) || s->d_q < 0.0 || s->d_p < 0.0) {
      throw CliError{2, "config: ou kernel needs gamma > 0 and d_q, d_p >= 0"};
    }
  } else if (type == "white") {
    reject_unknown(k, "kernel.", {"type", "weight"});
    s->kernel_type = type;
    if (k.contains("weight")) {
      s->weight = get_triplet(k.at("weight"), "kernel.weight");
    }
  } else if (type == "tabulated") {
    reject_unknown(k, "kernel.", {"type", "csv"});
    s->kernel_type = type;
    if (!k.contains("csv") || !k.at("csv").is_string()) {
      throw CliError{2, "config: tabulated kernel needs 'csv' (a file path)"};
    }
    s->kernel_csv = k.at("csv").get<std::string>();
  } else {
    throw CliError{2,
                   "config: kernel.type must be 'white', 'ou', or 'tabulated'"};
  }
}

Settings parse_settings(const json& root) {
  Settings s;
  reject_unknown(root, "",
                 {"hamiltonian", "kernel", "grid", "t0", "gammas", "states",
                  "pairs", "triples", "violation", "montecarlo", "tolerances",
                  "seed", "out"});
  parse_hamiltonian(root, &s);
  parse_kernel(root, &s);

  if (root.contains("grid")) {
    const json& g = root.at("grid");
    reject_unknown(g, "grid.", {"start", "stop", "step"});
    s.grid_start = get_number(g, "grid.", "start", s.grid_start);
    s.grid_stop = get_number(g, "grid.", "stop", s.grid_stop);
    s.grid_step = get_number(g, "grid.", "step", s.grid_step);
    if (!(s.grid_step > 0.0) || !(s.grid_stop > s.grid_start)) {
      throw CliError{2, "config: grid needs step > 0 and stop > start"};
    }
  }
  s.t0 = get_number(root, "", "t0", s.t0);
  if (s.t0 < 0.0) {
    throw CliError{2, "config field 't0' must be >= 0"};
  }

  if (root.contains("gammas")) {
    const json& g = root.at("gammas");
    if (!g.is_array() || g.empty()) {
      throw CliError{2, "config field 'gammas' must be a non-empty array"};
    }
    s.gammas.clear();
    for (const json& v : g) {
      if (!v.is_number() || !(v.get<double>() > 0.0)) {
        throw CliError{2, "config field 'gammas' entries must be > 0"};
      }
      s.gammas.push_back(v.get<double>());
    }
  }
  if (root.contains("states")) {
    const json& st = root.at("states");
    reject_unknown(st, "states.", {"r", "cm1", "cm2"});
    const bool has_cm = st.contains("cm1") || st.contains("cm2");
    if (has_cm) {
      if (!st.contains("cm1") || !st.contains("cm2")) {
        throw CliError{2, "config: states needs both cm1 and cm2 (or "
                          "neither)"};
      }
      if (st.contains("r")) {
        throw CliError{2, "config: states takes either r or cm1/cm2, "
                          "not both"};
      }
      s.states_raw = true;
      s.cm1 = get_triplet(st.at("cm1"), "states.cm1");
      s.cm2 = get_triplet(st.at("cm2"), "states.cm2");
    } else {
      s.state_r = get_number(st, "states.", "r", s.state_r);
    }
  }

  if (root.contains("pairs")) {
    const json& p = root.at("pairs");
    if (!p.is_array() || p.empty()) {
      throw CliError{2, "config field 'pairs' must be a non-empty array"};
    }
    s.pairs.clear();
    for (const json& v : p) {
      if (!v.is_array() || v.size() != 2 || !v[0].is_number() ||
          !v[1].is_number()) {
        throw CliError{2, "config field 'pairs' entries must be [t0, t]"};
      }
      const double a = v[0].get<double>(), b = v[1].get<double>();
      if (a < 0.0 || !(b > a)) {
        throw CliError{2, "config: each pair needs 0 <= t0 < t"};
      }
      s.pairs.push_back({a, b});
    }
  }
  if (root.contains("triples")) {
    const json& t = root.at("triples");
    if (!t.is_array() || t.empty()) {
      throw CliError{2, "config field 'triples' must be a non-empty array"};
    }
    s.triples.clear();
    for (const json& v : t) {
      const auto tri = get_triplet(v, "triples[]");
      if (!(tri[0] <= tri[1]) || !(tri[1] <= tri[2])) {
        throw CliError{2, "config: each triple needs t0 <= t1 <= t2"};
      }
      s.triples.push_back(tri);
    }
  }

  if (root.contains("violation")) {
    const json& v = root.at("violation");
    reject_unknown(v, "violation.", {"t0", "dt"});
    s.violation_t0 = get_number(v, "violation.", "t0", s.violation_t0);
    s.violation_dt = get_number(v, "violation.", "dt", s.violation_dt);
    if (!(s.violation_t0 > 0.0) || !(s.violation_dt > 0.0)) {
      throw CliError{2, "config: violation needs t0 > 0 and dt > 0"};
    }
  }

  if (root.contains("montecarlo")) {
    const json& m = root.at("montecarlo");
    reject_unknown(m, "montecarlo.", {"t0", "t", "dt", "n_paths"});
    s.mc_t0 = get_number(m, "montecarlo.", "t0", s.mc_t0);
    s.mc_t = get_number(m, "montecarlo.", "t", s.mc_t);
    s.mc_dt = get_number(m, "montecarlo.", "dt", s.mc_dt);
    s.mc_n_paths = get_unsigned(m, "montecarlo.", "n_paths", s.mc_n_paths);
    if (s.mc_t0 < 0.0 || !(s.mc_t > s.mc_t0) || !(s.mc_dt > 0.0) ||
        s.mc_n_paths < 100) {
      throw CliError{2, "config: montecarlo needs 0 <= t0 < t, dt > 0, and "
                        "n_paths >= 100"};
    }
  }

  if (root.contains("tolerances")) {
    const json& t = root.at("tolerances");
    reject_unknown(t, "tolerances.",
                   {"nonmonotonicity", "semigroup_markovian", "z_max"});
    s.tol_nonmono = get_number(t, "tolerances.", "nonmonotonicity",
                               s.tol_nonmono);
    s.tol_semigroup = get_number(t, "tolerances.", "semigroup_markovian",
                                 s.tol_semigroup);
    s.z_max = get_number(t, "tolerances.", "z_max", s.z_max);
    if (s.tol_nonmono < 0.0 || s.tol_semigroup < 0.0 || s.z_max < 0.0) {
      throw CliError{2, "config: tolerances must be >= 0"};
    }
  }

  s.seed = get_unsigned(root, "", "seed", s.seed);
  if (root.contains("out")) {
    if (!root.at("out").is_string()) {
      throw CliError{2, "config field 'out' must be a string path"};
    }
    s.out = root.at("out").get<std::string>();
  }
  return s;
}

// The config with every default materialized — echoed into all outputs so a
// run is reproducible from its own artifact.
json materialized(const Settings& s) {
  json h;
  if (s.hamiltonian == "quadratic") {
    h = json{{"hessian", s.hessian}};
  } else {
    h = s.hamiltonian;
  }
  json kernel;
  if (s.kernel_type == "ou") {
    kernel = {{"type", "ou"}, {"gamma", s.gamma}, {"d_q", s.d_q},
              {"d_p", s.d_p}};
  } else if (s.kernel_type == "white") {
    kernel = {{"type", "white"}, {"weight", s.weight}};
  } else {
    kernel = {{"type", "tabulated"}, {"csv", s.kernel_csv}};
  }
  json states;
  if (s.states_raw) {
    states = {{"cm1", s.cm1}, {"cm2", s.cm2}};
  } else {
    states = {{"r", s.state_r}};
  }
  return json{
      {"hamiltonian", h},
      {"kernel", kernel},
      {"grid", {{"start", s.grid_start}, {"stop", s.grid_stop},
                {"step", s.grid_step}}},
      {"t0", s.t0},
      {"gammas", s.gammas},
      {"states", states},
      {"pairs", s.pairs},
      {"triples", s.triples},
      {"violation", {{"t0", s.violation_t0}, {"dt", s.violation_dt}}},
      {"montecarlo", {{"t0", s.mc_t0}, {"t", s.mc_t}, {"dt", s.mc_dt},
                      {"n_paths", s.mc_n_paths}}},
      {"tolerances", {{"nonmonotonicity", s.tol_nonmono},
                      {"semigroup_markovian", s.tol_semigroup},
                      {"z_max", s.z_max}}},
      {"seed", s.seed},
      {"out", s.out},
      {"conventions", {{"hbar", 1.0}, {"mass", 1.0},
                       {"phase_space_order", "xp"},
                       {"symplectic_form", "[[0,1],[-1,0]]"},
                       {"vacuum_cm", "identity/2"}}}};
}

// ------------------------------------------------------------------
// C-API plumbing
// ------------------------------------------------------------------

// Construction failures are config errors (exit 2); failures while computing
// are numeric errors (exit 3).
void check_config(nmg_status rc, const std::string& what) {
  if (rc != NMG_OK) {
    throw CliError{2, what + ": " + nmg_status_name(rc) + " (" +
                          nmg_last_error() + ")"};
  }
}

void check_compute(nmg_status rc, const std::string& what) {
  if (rc != NMG_OK) {
    throw CliError{3, what + ": " + nmg_status_name(rc) + " (" +
                          nmg_last_error() + ")"};
  }
}

struct KernelDeleter {
  void operator()(nmg_kernel* k) const { nmg_kernel_free(k); }
};
struct HamiltonianDeleter {
  void operator()(nmg_hamiltonian* h) const { nmg_hamiltonian_free(h); }
};
using KernelPtr = std::unique_ptr<nmg_kernel, KernelDeleter>;
using HamiltonianPtr = std::unique_ptr<nmg_hamiltonian, HamiltonianDeleter>;

KernelPtr build_kernel(const Settings& s) {
  nmg_kernel* k = nullptr;
  if (s.kernel_type == "ou") {
    check_config(nmg_kernel_ou(s.gamma, s.d_q, s.d_p, &k), "kernel");
  } else if (s.kernel_type == "white") {
    check_config(nmg_kernel_white(s.weight.data(), &k), "kernel");
  } else {
    check_config(nmg_kernel_tabulated_csv(s.kernel_csv.c_str(), &k),
                 "kernel");
  }
  return KernelPtr(k);
}

KernelPtr build_ou_kernel(double gamma, const Settings& s) {
  nmg_kernel* k = nullptr;
  check_config(nmg_kernel_ou(gamma, s.d_q, s.d_p, &k), "kernel");
  return KernelPtr(k);
}

HamiltonianPtr build_hamiltonian(const Settings& s) {
  nmg_hamiltonian* h = nullptr;
  check_config(nmg_hamiltonian_quadratic(s.hessian.data(), &h), "hamiltonian");
  return HamiltonianPtr(h);
}

std::string kernel_tag(const nmg_kernel* k) {
  char buf[128];
  check_compute(nmg_kernel_describe(k, buf, sizeof buf), "describe");
  return buf;
}

// ------------------------------------------------------------------
// Output plumbing
// ------------------------------------------------------------------

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void append_csv_row(std::string* out, std::initializer_list<double> vals) {
  bool first = true;
  for (const double v : vals) {
    if (!first) {
      out->push_back(',');
    }
    first = false;
    *out += fmt17(v);
  }
  out->push_back('\n');
}

void write_output(const std::string& path, const std::string& body) {
  if (path.empty()) {
    std::fwrite(body.data(), 1, body.size(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw CliError{3, "cannot open output file '" + path + "'"};
  }
  out << body;
  if (!out) {
    throw CliError{3, "failed writing output file '" + path + "'"};
  }
}

std::vector<double> make_grid(const Settings& s) {
  std::vector<double> t;
  for (uint64_t i = 0;; ++i) {
    const double v = s.grid_start + static_cast<double>(i) * s.grid_step;
    if (v > s.grid_stop + 1e-9 * s.grid_step) {
      break;
    }
    t.push_back(v);
  }
  return t;
}

// ------------------------------------------------------------------
// Subcommands
// ------------------------------------------------------------------

int run_kossakowski_scan(const Settings& s, const std::string& out_path,
                         const std::string& format) {
  if (s.grid_start < s.t0) {
    throw CliError{2, "config: grid.start must be >= t0 for kossakowski-scan"};
  }
  const auto kernel = build_kernel(s);
  const auto ham = build_hamiltonian(s);
  const auto grid = make_grid(s);

  struct Row {
    double t, c[3], eig_min, eig_max;
    int negative;
  };
  std::vector<Row> rows;
  rows.reserve(grid.size());
  for (const double t : grid) {
    Row r{t, {0, 0, 0}, 0.0, 0.0, 0};
    check_compute(
        nmg_kossakowski(kernel.get(), ham.get(), t, s.t0, NMG_METHOD_AUTO,
                        r.c),
        "kossakowski(t=" + fmt17(t) + ")");
    check_compute(
        nmg_kossakowski_negativity(r.c, &r.eig_min, &r.eig_max, &r.negative),
        "negativity");
    rows.push_back(r);
  }

  if (format == "json") {
    json doc;
    doc["config"] = materialized(s);
    doc["kernel"] = kernel_tag(kernel.get());
    json jrows = json::array();
    for (const Row& r : rows) {
      jrows.push_back({{"t0", s.t0},
                       {"t", r.t},
                       {"c", {r.c[0], r.c[1], r.c[2]}},
                       {"eig_min", r.eig_min},
                       {"eig_max", r.eig_max},
                       {"negative", r.negative != 0}});
    }
    doc["rows"] = jrows;
    write_output(out_path, doc.dump(2) + "\n");
    return 0;
  }
  std::string body = "# config " + materialized(s).dump() + "\n";
  body += "t0,t,C11,C12,C22,eig_min,eig_max,negative\n";
  for (const Row& r : rows) {
    append_csv_row(&body, {s.t0, r.t, r.c[0], r.c[1], r.c[2], r.eig_min,
                           r.eig_max, static_cast<double>(r.negative)});
  }
  write_output(out_path, body);
  return 0;
}

int run_fig1(const Settings& s, const std::string& out_path,
             const std::string& format) {
  if (s.kernel_type != "ou") {
    throw CliError{2, "config: fig1 requires an ou kernel (the rate sweep "
                      "reuses its couplings d_q, d_p)"};
  }
  if (s.grid_start != 0.0) {
    throw CliError{2, "config: fig1 requires grid.start == 0"};
  }
  const auto ham = build_hamiltonian(s);
  const auto grid = make_grid(s);
  if (grid.size() < 3) {
    throw CliError{2, "config: fig1 needs a grid of at least 3 points"};
  }

  const double e2r = std::exp(2.0 * s.state_r);
  nmg_state s1{{0.5 * e2r, 0.0, 0.5 / e2r}, {0.0, 0.0}};
  nmg_state s2{{0.5 / e2r, 0.0, 0.5 * e2r}, {0.0, 0.0}};
  if (s.states_raw) {
    s1 = nmg_state{{s.cm1[0], s.cm1[1], s.cm1[2]}, {0.0, 0.0}};
    s2 = nmg_state{{s.cm2[0], s.cm2[1], s.cm2[2]}, {0.0, 0.0}};
    for (const nmg_state* st : {&s1, &s2}) {
      int valid = 0;
      double margin = 0.0;
      check_config(nmg_state_validity(st, &valid, &margin), "states");
      if (valid == 0) {
        throw CliError{2, "config: states.cm1/cm2 must be physical "
                          "covariance matrices (det >= 1/4)"};
      }
    }
  }

  struct Series {
    double gamma;
    std::vector<double> f, df;
    std::vector<nmg_interval> intervals;
    double max_drop;
  };
  std::vector<Series> series;
  series.reserve(s.gammas.size());
  for (const double gamma : s.gammas) {
    const auto kernel = build_ou_kernel(gamma, s);
    Series sr;
    sr.gamma = gamma;
    sr.f.resize(grid.size());
    check_compute(nmg_fidelity_trajectory(kernel.get(), ham.get(), &s1, &s2,
                                          grid.data(), grid.size(),
                                          sr.f.data()),
                  "fidelity trajectory (gamma=" + fmt17(gamma) + ")");
    // Central differences inside, one-sided at the ends.
    const size_t n = grid.size();
    sr.df.resize(n);
    sr.df[0] = (sr.f[1] - sr.f[0]) / (grid[1] - grid[0]);
    for (size_t i = 1; i + 1 < n; ++i) {
      sr.df[i] = (sr.f[i + 1] - sr.f[i - 1]) / (grid[i + 1] - grid[i - 1]);
    }
    sr.df[n - 1] = (sr.f[n - 1] - sr.f[n - 2]) / (grid[n - 1] - grid[n - 2]);

    sr.intervals.resize(n / 2 + 1);
    size_t n_out = 0;
    check_compute(nmg_decreasing_intervals(grid.data(), sr.f.data(), n,
                                           s.tol_nonmono, sr.intervals.data(),
                                           sr.intervals.size(), &n_out,
                                           &sr.max_drop),
                  "decreasing intervals");
    sr.intervals.resize(n_out);
    series.push_back(std::move(sr));
  }

  json summary = json::array();
  for (const Series& sr : series) {
    json intervals = json::array();
    for (const nmg_interval& iv : sr.intervals) {
      intervals.push_back({{"t_begin", iv.t_begin},
                           {"t_end", iv.t_end},
                           {"drop", iv.drop}});
    }
    summary.push_back({{"gamma", sr.gamma},
                       {"monotone", sr.intervals.empty()},
                       {"verdict", sr.intervals.empty() ? "monotone"
                                                        : "non-monotone"},
                       {"max_drop", sr.max_drop},
                       {"decreasing_intervals", intervals}});
  }

  if (format == "json") {
    json doc;
    doc["config"] = materialized(s);
    json jrows = json::array();
    for (const Series& sr : series) {
      for (size_t i = 0; i < grid.size(); ++i) {
        jrows.push_back({{"gamma", sr.gamma},
                         {"t", grid[i]},
                         {"F", sr.f[i]},
                         {"dF_dt", sr.df[i]}});
      }
    }
    doc["rows"] = jrows;
    doc["summary"] = summary;
    write_output(out_path, doc.dump(2) + "\n");
    return 0;
  }
  std::string body = "# config " + materialized(s).dump() + "\n";
  body += "gamma,t,F,dF_dt\n";
  for (const Series& sr : series) {
    for (size_t i = 0; i < grid.size(); ++i) {
      append_csv_row(&body, {sr.gamma, grid[i], sr.f[i], sr.df[i]});
    }
  }
  body += "# summary " + summary.dump() + "\n";
  write_output(out_path, body);
  return 0;
}

int run_semigroup_check(const Settings& s, const std::string& out_path,
                        const std::string& format) {
  const auto kernel = build_kernel(s);
  const auto ham = build_hamiltonian(s);

  struct Row {
    double t0, t1, t2, max_abs, frobenius;
  };
  std::vector<Row> rows;
  rows.reserve(s.triples.size());
  double max_deviation = 0.0;
  for (const auto& tri : s.triples) {
    Row r{tri[0], tri[1], tri[2], 0.0, 0.0};
    check_compute(nmg_semigroup_deviation(kernel.get(), ham.get(), r.t0, r.t1,
                                          r.t2, &r.max_abs, &r.frobenius),
                  "semigroup deviation");
    max_deviation = std::max(max_deviation, r.max_abs);
    rows.push_back(r);
  }

  if (format == "json") {
    json doc;
    doc["config"] = materialized(s);
    doc["kernel"] = kernel_tag(kernel.get());
    json jrows = json::array();
    for (const Row& r : rows) {
      jrows.push_back({{"t0", r.t0},
                       {"t1", r.t1},
                       {"t2", r.t2},
                       {"max_abs", r.max_abs},
                       {"frobenius", r.frobenius}});
    }
    doc["rows"] = jrows;
    doc["max_deviation"] = max_deviation;
    write_output(out_path, doc.dump(2) + "\n");
    return 0;
  }
  std::string body = "# config " + materialized(s).dump() + "\n";
  body += "t0,t1,t2,max_abs,frobenius\n";
  for (const Row& r : rows) {
    append_csv_row(&body, {r.t0, r.t1, r.t2, r.max_abs, r.frobenius});
  }
  write_output(out_path, body);
  return 0;
}

json certificate_json(const nmg_violation& cert) {
  return json{{"t0", cert.t0},
              {"t", cert.t},
              {"sigma0", {cert.sigma0[0], cert.sigma0[1], cert.sigma0[2]}},
              {"sigma_in",
               {cert.sigma_in[0], cert.sigma_in[1], cert.sigma_in[2]}},
              {"v", {cert.v[0], cert.v[1], cert.v[2], cert.v[3]}},
              {"lambda_pos", cert.lambda_pos},
              {"mu_neg", cert.mu_neg},
              {"det_out", cert.det_out}};
}

int run_divisibility(const Settings& s, const std::string& out_path) {
  const auto kernel = build_kernel(s);
  const auto ham = build_hamiltonian(s);

  // Criterion 1 — does the generator depend on the start time? Probed by the
  // two-interval composition law of the Gram matrices.
  json triples = json::array();
  double max_deviation = 0.0;
  for (const auto& tri : s.triples) {
    double max_abs = 0.0, frobenius = 0.0;
    check_compute(nmg_semigroup_deviation(kernel.get(), ham.get(), tri[0],
                                          tri[1], tri[2], &max_abs,
                                          &frobenius),
                  "semigroup deviation");
    max_deviation = std::max(max_deviation, max_abs);
    triples.push_back({{"t0", tri[0]},
                       {"t1", tri[1]},
                       {"t2", tri[2]},
                       {"max_abs", max_abs},
                       {"frobenius", frobenius}});
  }
  const bool homogeneous = max_deviation <= s.tol_semigroup;

  // Criterion 2 — are all intertwiners CP? Probed on the configured pairs
  // plus the explicit state-level violation search. Each pair also records
  // the factorization defect |Lambda o Gamma - Gamma| as a sanity figure:
  // the verdicts only mean something if the intertwiner actually interpolates.
  json pairs = json::array();
  bool all_cp = true;
  for (const auto& pr : s.pairs) {
    nmg_channel lam;
    check_compute(
        nmg_lambda_channel(kernel.get(), ham.get(), pr[1], pr[0], &lam),
        "intertwiner");
    int cp = 0;
    double witness = 0.0;
    check_compute(nmg_channel_is_cp(&lam, &cp, &witness), "cp test");
    all_cp = all_cp && cp != 0;

    nmg_channel gamma_t0, composed, direct;
    check_compute(
        nmg_gamma_channel(kernel.get(), ham.get(), pr[0], 0.0, &gamma_t0),
        "map");
    check_compute(nmg_channel_compose(&lam, &gamma_t0, &composed), "compose");
    check_compute(
        nmg_gamma_channel(kernel.get(), ham.get(), pr[1], 0.0, &direct),
        "map");
    double defect = 0.0;
    for (int i = 0; i < 4; ++i) {
      defect = std::max(defect, std::abs(composed.a[i] - direct.a[i]));
    }
    for (int i = 0; i < 3; ++i) {
      defect = std::max(defect, std::abs(composed.b[i] - direct.b[i]));
    }
    pairs.push_back({{"t0", pr[0]},
                     {"t", pr[1]},
                     {"cp", cp != 0},
                     {"witness", witness},
                     {"composition_defect", defect}});
  }
  nmg_violation cert{};
  check_compute(nmg_find_positivity_violation(kernel.get(), ham.get(),
                                              s.violation_t0, s.violation_dt,
                                              &cert),
                "violation search");
  const bool divisible = all_cp && cert.found == 0;

  json doc;
  doc["config"] = materialized(s);
  doc["kernel"] = kernel_tag(kernel.get());
  doc["generator"] = {
      {"triples", triples},
      {"max_deviation", max_deviation},
      {"tolerance", s.tol_semigroup},
      {"time_homogeneous", homogeneous},
      {"verdict", homogeneous ? "markovian" : "non-markovian"}};
  doc["divisibility"] = {
      {"pairs", pairs},
      {"all_cp", all_cp},
      {"certificate", cert.found != 0 ? certificate_json(cert)
                                      : json(nullptr)},
      {"divisible", divisible},
      {"verdict", divisible ? "markovian" : "non-markovian"}};
  write_output(out_path, doc.dump(2) + "\n");
  return 0;
}

int run_violation_search(const Settings& s, const std::string& out_path) {
  const auto kernel = build_kernel(s);
  const auto ham = build_hamiltonian(s);
  nmg_violation cert{};
  check_compute(nmg_find_positivity_violation(kernel.get(), ham.get(),
                                              s.violation_t0, s.violation_dt,
                                              &cert),
                "violation search");
  json doc;
  doc["config"] = materialized(s);
  doc["kernel"] = kernel_tag(kernel.get());
  doc["found"] = cert.found != 0;
  doc["certificate"] =
      cert.found != 0 ? certificate_json(cert) : json(nullptr);
  write_output(out_path, doc.dump(2) + "\n");
  return 0;
}

int run_mc_validate(const Settings& s, const std::string& out_path) {
  if (s.kernel_type != "ou") {
    throw CliError{2, "config: mc-validate requires an ou kernel (paths are "
                      "sampled from the exact OU transition density)"};
  }
  const auto kernel = build_kernel(s);
  const auto ham = build_hamiltonian(s);
  nmg_ensemble est{};
  check_compute(nmg_empirical_g(kernel.get(), ham.get(), s.mc_t0, s.mc_t,
                                s.mc_dt, s.mc_n_paths, s.seed, &est),
                "empirical Gram estimate");
  const double max_abs_z = std::max(
      {std::abs(est.z[0]), std::abs(est.z[1]), std::abs(est.z[2])});
  const bool pass = max_abs_z <= s.z_max;

  json doc;
  doc["config"] = materialized(s);
  doc["kernel"] = kernel_tag(kernel.get());
  doc["covariance"] = {est.covariance[0], est.covariance[1],
                       est.covariance[2]};
  doc["stderr_jk"] = {est.stderr_jk[0], est.stderr_jk[1], est.stderr_jk[2]};
  doc["predicted"] = {est.predicted[0], est.predicted[1], est.predicted[2]};
  doc["z"] = {est.z[0], est.z[1], est.z[2]};
  doc["mean"] = {est.mean[0], est.mean[1]};
  doc["mean_stderr"] = {est.mean_stderr[0], est.mean_stderr[1]};
  doc["n_paths"] = est.n_paths;
  doc["blocks"] = est.blocks;
  doc["seed"] = est.seed;
  doc["max_abs_z"] = max_abs_z;
  doc["z_max"] = s.z_max;
  doc["pass"] = pass;
  write_output(out_path, doc.dump(2) + "\n");
  return pass ? 0 : 4;
}

json load_config_json(const std::string& path) {
  if (path.empty()) {
    return json::object();
  }
  std::ifstream in(path);
  if (!in) {
    throw CliError{2, "cannot open config file '" + path + "'"};
  }
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw CliError{2, std::string("config parse error: ") + e.what()};
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "nmgauss-cli: memory diagnostics for Gaussian dynamical maps driven by "
      "stationary noise"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_path, format;
  uint64_t seed_override = 0;
  auto* config_opt =
      app.add_option("--config", config_path, "JSON config file")
          ->expected(1);
  app.add_option("--out", out_path, "output file (default: stdout)");
  auto* seed_opt = app.add_option("--seed", seed_override,
                                  "override the config seed");
  auto* format_opt =
      app.add_option("--format", format, "output format: csv or json");
  (void)config_opt;

  auto* scan = app.add_subcommand(
      "kossakowski-scan", "table of C(t, t0) and its eigenvalue range");
  auto* fig1 = app.add_subcommand(
      "fig1", "fidelity trajectories for each rate in 'gammas'");
  auto* divis = app.add_subcommand(
      "divisibility", "per-criterion memory verdicts (JSON report)");
  auto* semi = app.add_subcommand(
      "semigroup-check", "composition-law deviation over 'triples'");
  auto* viol = app.add_subcommand(
      "violation-search", "explicit intertwiner positivity violation");
  auto* mc = app.add_subcommand(
      "mc-validate", "stochastic closure test of the Gram matrix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // malformed invocation is a config error
  }

  try {
    Settings settings = parse_settings(load_config_json(config_path));
    if (seed_opt->count() > 0) {
      settings.seed = seed_override;
    }
    if (!out_path.empty()) {
      settings.out = out_path;
    }
    out_path = settings.out;
    const bool table_cmd = scan->parsed() || fig1->parsed() || semi->parsed();
    if (format_opt->count() > 0) {
      if (format != "csv" && format != "json") {
        throw CliError{2, "--format must be 'csv' or 'json'"};
      }
      if (format == "csv" && !table_cmd) {
        throw CliError{2, "this subcommand produces a JSON report; "
                          "--format csv applies to kossakowski-scan, fig1, "
                          "and semigroup-check"};
      }
    } else {
      format = table_cmd ? "csv" : "json";
    }

    if (scan->parsed()) {
      return run_kossakowski_scan(settings, out_path, format);
    }
    if (fig1->parsed()) {
      return run_fig1(settings, out_path, format);
    }
    if (semi->parsed()) {
      return run_semigroup_check(settings, out_path, format);
    }
    if (divis->parsed()) {
      return run_divisibility(settings, out_path);
    }
    if (viol->parsed()) {
      return run_violation_search(settings, out_path);
    }
    if (mc->parsed()) {
      return run_mc_validate(settings, out_path);
    }
  } catch (const CliError& e) {
    std::fprintf(stderr, "error: %s\n", e.message.c_str());
    return e.code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
