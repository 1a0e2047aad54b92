// Copyright 2026 The SparseGS Authors
// SPDX-License-Identifier: Apache-2.0

// sgs: generate instances, run solvers, sweep hyperparameters.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sgs/bundle.hpp"
#include "sgs/hamiltonian.hpp"
#include "sgs/matrix_free.hpp"
#include "sgs/sci.hpp"
#include "sgs/skqd.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace sgs;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitBudget = 2;
constexpr int kExitInvalid = 3;

struct SolveConfig {
  std::string solver = "cipsi";
  double eps = 1e-6;
  std::size_t d_cap = kUnbounded;
  std::size_t core_cap = kUnbounded;
  int max_iters = 100;
  double trim_f = 0.0;
  std::size_t trim_ns = 1, trim_nk = 64;
  std::string trim_filter = "cipsi";
  std::size_t working_cap = 1024, reservoir_cap = 0;
  int iters = 50;
  std::size_t m = 1024;
  std::size_t k = 64;
  std::string tpm_mode = "expectation";
  int d = 16;
  std::size_t shots = 10000;
  double dt = 0.0, dt_mult = 25.0;
  std::string evolution = "exact";
  int trotter_steps = 1;
  double bitflip = 0.0;
  std::size_t budget = 10'000'000;
  std::uint64_t seed = 1;
};

// Grid keys accepted by sweep; the same names as the solve flags.
void set_param(SolveConfig& c, const std::string& key, const nlohmann::json& v) {
  auto num = [&] { return v.is_string() ? std::stod(v.get<std::string>()) : v.get<double>(); };
  auto cnt = [&] { return static_cast<std::size_t>(std::llround(num())); };
  if (key == "eps") c.eps = num();
  else if (key == "d-cap") c.d_cap = cnt();
  else if (key == "core-cap") c.core_cap = cnt();
  else if (key == "max-iters") c.max_iters = int(cnt());
  else if (key == "trim-f") c.trim_f = num();
  else if (key == "trim-ns") c.trim_ns = cnt();
  else if (key == "trim-nk") c.trim_nk = cnt();
  else if (key == "trim-filter") c.trim_filter = v.get<std::string>();
  else if (key == "working-cap") c.working_cap = cnt();
  else if (key == "reservoir-cap") c.reservoir_cap = cnt();
  else if (key == "iters") c.iters = int(cnt());
  else if (key == "m") c.m = cnt();
  else if (key == "k") c.k = cnt();
  else if (key == "tpm-mode") c.tpm_mode = v.get<std::string>();
  else if (key == "d") c.d = int(cnt());
  else if (key == "shots") c.shots = cnt();
  else if (key == "dt") c.dt = num();
  else if (key == "dt-mult") c.dt_mult = num();
  else if (key == "evolution") c.evolution = v.get<std::string>();
  else if (key == "trotter-steps") c.trotter_steps = int(cnt());
  else if (key == "bitflip") c.bitflip = num();
  else if (key == "budget") c.budget = cnt();
  else if (key == "seed") c.seed = static_cast<std::uint64_t>(cnt());
  else throw std::invalid_argument("unknown parameter '" + key + "'");
}

struct RunOutcome {
  double energy = 0.0;
  std::size_t dim = 0;
  SolverTrace trace;
  std::vector<u64> basis;
  std::optional<std::size_t> coverage;
  std::string shots_json;
  std::string warning;
};

RunOutcome run_solver(const Instance& inst, const SolveConfig& c) {
  const Configuration x0 = inst.cert.initial_config;
  RunOutcome out;
  const std::string& s = c.solver;
  if (s == "cipsi" || s == "hci" || s == "asci" || s == "trimci") {
    SciParams p;
    p.variant = s == "cipsi" ? SciVariant::CIPSI
              : s == "hci"   ? SciVariant::HCI
              : s == "asci"  ? SciVariant::ASCI
                             : SciVariant::TrimCI;
    p.epsilon = c.eps;
    p.d_cap = c.d_cap;
    p.core_cap = c.core_cap;
    p.max_iters = c.max_iters;
    p.trim = {c.trim_f, c.trim_ns, c.trim_nk, c.seed,
              c.trim_filter == "hci" ? TrimFilter::Hci : TrimFilter::Cipsi};
    p.budget = c.budget;
    auto r = run_sci(inst.h, x0, p);
    out.energy = r.eig.value;
    out.trace = std::move(r.trace);
    out.basis = std::move(r.basis);
  } else if (s == "dr") {
    DiagRankParams p;
    p.working_cap = c.working_cap;
    p.reservoir_cap = c.reservoir_cap ? c.reservoir_cap : 4 * c.working_cap;
    p.iters = c.iters;
    p.budget = c.budget;
    auto r = run_diag_ranking(inst.h, x0, p);
    out.energy = r.eig.value;
    out.trace = std::move(r.trace);
    out.basis = std::move(r.basis);
  } else if (s == "tarnoldi") {
    TruncArnoldiParams p;
    p.new_config_cap = c.m;
    p.iters = c.iters;
    p.budget = c.budget;
    auto r = run_truncated_arnoldi(inst.h, x0, p);
    out.energy = r.eig.value;
    out.trace = std::move(r.trace);
    out.basis = std::move(r.basis);
  } else if (s == "tpm") {
    TpmParams p;
    p.k = c.k;
    p.iters = c.iters;
    if (c.tpm_mode != "expectation" && c.tpm_mode != "support")
      throw std::invalid_argument("tpm-mode must be expectation or support");
    p.mode = c.tpm_mode == "support" ? TpmMode::DiagonalizeSupport : TpmMode::Expectation;
    p.track_both = false;
    SparseVector v(inst.h.n_qubits());
    v.set(x0.bits, 1.0);
    auto r = run_tpm(inst.h, v, p);
    out.energy = r.energy;
    out.trace = std::move(r.trace);
    out.basis = std::move(r.final_support);
  } else if (s == "skqd") {
    SkqdParams p;
    p.krylov_dim = c.d;
    p.shots = c.shots;
    p.dt = c.dt > 0 ? c.dt : default_dt(inst.h, c.dt_mult);
    p.evolution = c.evolution == "exact"      ? Evolution::Exact
                  : c.evolution == "trotter1" ? Evolution::Trotter1
                  : c.evolution == "trotter2"
                      ? Evolution::Trotter2
                      : throw std::invalid_argument("evolution must be exact|trotter1|trotter2");
    p.trotter_steps_per_dt = c.trotter_steps;
    p.seed = c.seed;
    p.bitflip_prob = c.bitflip;
    p.budget = c.budget;
    auto r = run_skqd(inst.h, x0, p);
    out.energy = r.eig.value;
    out.trace = std::move(r.trace);
    out.basis = std::move(r.basis);
    out.coverage = support_coverage(r.shots, inst.cert).back();
    out.shots_json = r.shots.to_json();
    out.warning = r.warning;
  } else {
    throw std::invalid_argument("unknown solver '" + s + "'");
  }
  out.dim = out.basis.size();
  return out;
}

// Prefix every CSV line with provenance columns.
std::string tag_csv(const std::string& csv, const std::string& hash, std::uint64_t seed) {
  std::istringstream in(csv);
  std::ostringstream out;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) out << "instance_hash,version,seed," << line << '\n';
    else out << hash << ',' << kVersionTag << ',' << seed << ',' << line << '\n';
    header = false;
  }
  return out.str();
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
  std::string layout = "heavy-hex";
  int rows = 3, cols = 2, patches = 0;  // 0: layout default
  double m1 = std::nan(""), m2 = 0.01, j1 = 1.0, vacuum_offset = 0.05, padding_pin = -1.0;
  bool no_coupling = false;
  std::string mask;
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_generate(const GenerateArgs& a) {
  ConstructionParams p;
  p.m2 = a.m2;
  p.j1 = a.j1;
  p.vacuum_offset = a.vacuum_offset;
  p.padding_pin = a.padding_pin;
  p.coupling = !a.no_coupling;
  Instance inst;
  if (a.layout == "heavy-hex") {
    p.m1 = std::isnan(a.m1) ? 0.1 : a.m1;
    p.mode = CouplingMode::Main;
  } else if (a.layout == "path16") {
    if (a.patches > 1) throw std::invalid_argument("layout path16 holds exactly one patch");
    p.m1 = std::isnan(a.m1) ? 0.1 : a.m1;
  } else if (a.layout == "warmup") {
    if (a.patches > 0 && a.patches != 2) throw std::invalid_argument("layout warmup holds two patches");
    p.m1 = std::isnan(a.m1) ? 1.0 : a.m1;
  } else {
    throw std::invalid_argument("layout must be heavy-hex, path16 or warmup");
  }
  if (!a.mask.empty()) p.mask = std::stoull(a.mask, nullptr, 16);
  if (a.layout == "heavy-hex")
    inst = generate_heavy_hex_instance(a.rows, a.cols, a.patches > 0 ? a.patches : 3, p, a.seed);
  else if (a.layout == "path16") inst = generate_path16_instance(p, a.seed);
  else inst = generate_warmup_instance(p, a.seed);

  const auto rep = verify_certificate(inst.h, inst.cert);
  if (!rep.pass) {
    std::cerr << "certificate check failed: residual " << rep.residual << '\n';
    return kExitFailed;
  }
  if (!a.out.empty()) save_bundle(inst, a.out);
  std::cout << "n_qubits " << inst.h.n_qubits() << '\n'
            << "terms " << inst.h.size() << '\n'
            << "support " << inst.cert.support.size() << '\n'
            << "gamma0_sq " << fmt(inst.cert.initial_overlap_sq()) << '\n'
            << "initial_config " << inst.cert.initial_config.to_hex() << '\n'
            << "skips " << inst.embedding.skips << '\n'
            << "instance_hash " << instance_hash(inst) << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- solve

int cmd_solve(const std::string& bundle, const SolveConfig& c, const std::string& out_dir) {
  const Instance inst = load_bundle(bundle);
  const std::string hash = instance_hash(inst);
  Stopwatch clock;
  RunOutcome r = run_solver(inst, c);
  const double wall = clock.ms();

  json summary;
  summary["instance_hash"] = hash;
  summary["version"] = kVersionTag;
  summary["seed"] = c.seed;
  summary["solver"] = c.solver;
  summary["final_energy"] = r.energy;
  summary["final_dim"] = r.dim;
  summary["status"] = to_string(r.trace.status);
  summary["flops"] = r.trace.flops;
  summary["wall_ms"] = wall;
  summary["certificate_energy"] = inst.cert.energy;
  summary["energy_error"] = r.energy - inst.cert.energy;
  if (r.coverage) {
    summary["coverage"] = *r.coverage;
    summary["support_size"] = inst.cert.support.size();
  }
  if (!r.warning.empty()) summary["warning"] = r.warning;

  const std::string dir = out_dir.empty() ? (fs::path(bundle) / ("run_" + c.solver)).string() : out_dir;
  fs::create_directories(dir);
  write_file((fs::path(dir) / "trace.csv").string(), tag_csv(r.trace.to_csv(), hash, c.seed));
  write_file((fs::path(dir) / "summary.json").string(), summary.dump(1));
  if (!r.shots_json.empty()) write_file((fs::path(dir) / "shots.json").string(), r.shots_json);
  std::cout << summary.dump() << '\n';
  if (!r.warning.empty()) std::cerr << "warning: " << r.warning << '\n';
  return r.trace.status == RunStatus::BudgetExceeded ? kExitBudget : kExitOk;
}

// ---------------------------------------------------------------- sweep

std::vector<std::map<std::string, nlohmann::json>> expand_grid(const nlohmann::json& grid) {
  std::vector<std::map<std::string, nlohmann::json>> points{{}};
  for (auto it = grid.begin(); it != grid.end(); ++it) {
    std::vector<nlohmann::json> values;
    const auto& v = it.value();
    if (v.is_object() && v.contains("log")) {
      // {"log": [lo, hi, count]}
      const double lo = v["log"][0], hi = v["log"][1];
      const int cnt = v["log"][2];
      for (int i = 0; i < cnt; ++i)
        values.push_back(cnt == 1 ? lo : std::pow(10.0, std::log10(lo) + (std::log10(hi) - std::log10(lo)) * i / (cnt - 1)));
    } else if (v.is_array()) {
      for (const auto& x : v) values.push_back(x);
    } else {
      values.push_back(v);
    }
    std::vector<std::map<std::string, nlohmann::json>> next;
    for (const auto& p : points)
      for (const auto& x : values) {
        auto q = p;
        q[it.key()] = x;
        next.push_back(std::move(q));
      }
    points = std::move(next);
  }
  return points;
}

std::string param_string(const std::map<std::string, nlohmann::json>& p) {
  std::string s;
  for (const auto& [k, v] : p) {
    if (!s.empty()) s += ';';
    s += k + '=' + (v.is_number() ? fmt(v.get<double>()) : v.is_string() ? v.get<std::string>() : v.dump());
  }
  return s;
}

int cmd_sweep(const std::string& spec_path, std::string bundle, std::string out_dir) {
  const auto spec = nlohmann::json::parse(read_file(spec_path));
  if (bundle.empty()) bundle = spec.value("bundle", "");
  if (bundle.empty()) throw std::invalid_argument("sweep needs a bundle");
  if (out_dir.empty()) out_dir = spec.value("out", (fs::path(bundle) / "sweep").string());
  const Instance inst = load_bundle(bundle);
  const std::string hash = instance_hash(inst);
  const std::uint64_t seed = spec.value("seed", std::uint64_t{1});
  fs::create_directories(out_dir);

  struct Row {
    std::string solver, params, status;
    double energy, flops, wall;
    std::size_t dim;
  };
  std::vector<Row> rows;
  bool any_budget = false;
  for (const auto& run : spec.value("runs", nlohmann::json::array())) {
    const std::string solver = run.at("solver").get<std::string>();
    const auto fixed = run.value("fixed", nlohmann::json::object());
    for (const auto& point : expand_grid(run.value("grid", nlohmann::json::object()))) {
      SolveConfig c;
      c.solver = solver;
      c.seed = seed;
      if (spec.contains("budget")) c.budget = spec["budget"].get<std::size_t>();
      Row row{solver, param_string(point), "", std::nan(""), 0.0, 0.0, 0};
      try {
        for (auto it = fixed.begin(); it != fixed.end(); ++it) set_param(c, it.key(), it.value());
        for (const auto& [k, v] : point) set_param(c, k, v);
        Stopwatch clock;
        RunOutcome r = run_solver(inst, c);
        row.energy = r.energy;
        row.dim = r.dim;
        row.flops = r.trace.flops;
        row.wall = clock.ms();
        row.status = to_string(r.trace.status);
        any_budget |= r.trace.status == RunStatus::BudgetExceeded;
      } catch (const std::exception& e) {
        row.status = std::string("error: ") + e.what();
        std::replace(row.status.begin(), row.status.end(), ',', ';');
      }
      rows.push_back(row);
    }
  }

  std::ostringstream csv;
  csv << "instance_hash,version,seed,solver,params,final_energy,final_dim,flops,wall_ms,status\n";
  for (const auto& r : rows)
    csv << hash << ',' << kVersionTag << ',' << seed << ',' << r.solver << ',' << r.params << ','
        << fmt(r.energy) << ',' << r.dim << ',' << fmt(r.flops) << ',' << fmt(r.wall) << ','
        << r.status << '\n';
  write_file((fs::path(out_dir) / "results.csv").string(), csv.str());

  // Lower envelope of (dim, energy) per solver.
  std::map<std::string, std::vector<std::pair<std::size_t, double>>> by_solver;
  for (const auto& r : rows)
    if (!std::isnan(r.energy)) by_solver[r.solver].push_back({r.dim, r.energy});
  for (auto& [solver, pts] : by_solver) {
    std::sort(pts.begin(), pts.end());
    std::ostringstream f;
    f << "instance_hash,version,seed,solver,dim,best_energy\n";
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      best = std::min(best, pts[i].second);
      if (i + 1 < pts.size() && pts[i + 1].first == pts[i].first) continue;
      f << hash << ',' << kVersionTag << ',' << seed << ',' << solver << ',' << pts[i].first << ','
        << fmt(best) << '\n';
    }
    write_file((fs::path(out_dir) / ("frontier_" + solver + ".csv")).string(), f.str());
  }
  std::cout << "runs " << rows.size() << '\n' << "out " << out_dir << '\n';
  return any_budget ? kExitBudget : kExitOk;
}

// ---------------------------------------------------------------- verify / info

int cmd_verify(const std::string& bundle, double rel_tol) {
  const Instance inst = load_bundle(bundle);
  const auto rep = verify_certificate(inst.h, inst.cert, rel_tol);
  std::cout << "residual " << fmt(rep.residual) << '\n'
            << "tolerance " << fmt(rep.tolerance) << '\n'
            << "norm " << fmt(rep.norm) << '\n'
            << "pass " << (rep.pass ? "yes" : "no") << '\n';
  return rep.pass ? kExitOk : kExitFailed;
}

int cmd_info(const std::string& bundle) {
  const Instance inst = load_bundle(bundle);
  json j;
  j["instance_hash"] = instance_hash(inst);
  j["version"] = kVersionTag;
  j["seed"] = inst.seed;
  j["n_qubits"] = inst.h.n_qubits();
  j["terms"] = inst.h.size();
  j["one_norm"] = inst.h.one_norm();
  j["column_sparsity"] = column_sparsity(inst.h);
  j["support"] = inst.cert.support.size();
  j["gamma0_sq"] = inst.cert.initial_overlap_sq();
  j["initial_config"] = inst.cert.initial_config.to_hex();
  j["mode"] = inst.params.mode == CouplingMode::Main ? "main" : "warmup";
  j["coupling"] = inst.params.coupling;
  j["patches"] = inst.embedding.paths.size();
  j["skips"] = inst.embedding.skips;
  std::cout << j.dump(1) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse ground-state benchmark toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersionTag);

  GenerateArgs ga;
  auto* gen = app.add_subcommand("generate", "Generate an instance bundle");
  gen->add_option("--layout", ga.layout, "heavy-hex | path16 | warmup")->capture_default_str();
  gen->add_option("--rows", ga.rows, "Heavy-hex rows")->capture_default_str();
  gen->add_option("--cols", ga.cols, "Heavy-hex columns")->capture_default_str();
  gen->add_option("--patches", ga.patches, "Number of patches (heavy-hex default 3)");
  gen->add_option("--m1", ga.m1, "S0-S1 coupling (default 0.1, warmup 1)");
  gen->add_option("--m2", ga.m2, "Degeneracy-breaking strength")->capture_default_str();
  gen->add_option("--j1", ga.j1, "Interaction strength")->capture_default_str();
  gen->add_option("--vacuum-offset", ga.vacuum_offset, "Energy of the empty patch sector")->capture_default_str();
  gen->add_option("--padding-pin", ga.padding_pin, "Padding (I-Z) weight, negative = m2")->capture_default_str();
  gen->add_flag("--no-coupling", ga.no_coupling, "Drop the inter-patch interaction");
  gen->add_option("--mask", ga.mask, "Explicit X-layer mask (hex)");
  gen->add_option("--seed", ga.seed, "Seed for embedding and mask")->capture_default_str();
  gen->add_option("--out", ga.out, "Bundle directory");

  SolveConfig sc;
  std::string bundle, out_dir;
  auto* solve = app.add_subcommand("solve", "Run one solver on a bundle");
  solve->add_option("--bundle", bundle, "Bundle directory")->required();
  solve->add_option("solver,--solver", sc.solver, "cipsi|hci|asci|trimci|dr|tarnoldi|tpm|skqd")->required();
  solve->add_option("--eps", sc.eps, "SCI threshold")->capture_default_str();
  solve->add_option("--d-cap", sc.d_cap, "ASCI cap D");
  solve->add_option("--core-cap", sc.core_cap, "SCI core cap C");
  solve->add_option("--max-iters", sc.max_iters, "SCI iterations")->capture_default_str();
  solve->add_option("--trim-f", sc.trim_f, "TrimCI expansion factor F")->capture_default_str();
  solve->add_option("--trim-ns", sc.trim_ns, "TrimCI subsets")->capture_default_str();
  solve->add_option("--trim-nk", sc.trim_nk, "TrimCI kept per subset")->capture_default_str();
  solve->add_option("--trim-filter", sc.trim_filter, "cipsi|hci")->capture_default_str();
  solve->add_option("--working-cap", sc.working_cap, "Diagonal ranking D")->capture_default_str();
  solve->add_option("--reservoir-cap", sc.reservoir_cap, "Diagonal ranking R (default 4D)");
  solve->add_option("--iters", sc.iters, "Iterations (dr, tarnoldi, tpm)")->capture_default_str();
  solve->add_option("--m", sc.m, "Truncated Arnoldi M")->capture_default_str();
  solve->add_option("--k", sc.k, "TPM sparsity cutoff")->capture_default_str();
  solve->add_option("--tpm-mode", sc.tpm_mode, "expectation|support")->capture_default_str();
  solve->add_option("--d", sc.d, "SKQD Krylov dimension")->capture_default_str();
  solve->add_option("--shots", sc.shots, "SKQD shots per state")->capture_default_str();
  solve->add_option("--dt", sc.dt, "SKQD time step (default dt-mult*pi/|H|_1)");
  solve->add_option("--dt-mult", sc.dt_mult, "SKQD time step multiplier")->capture_default_str();
  solve->add_option("--evolution", sc.evolution, "exact|trotter1|trotter2")->capture_default_str();
  solve->add_option("--trotter-steps", sc.trotter_steps, "Trotter steps per dt")->capture_default_str();
  solve->add_option("--bitflip", sc.bitflip, "Readout bit-flip probability")->capture_default_str();
  solve->add_option("--budget", sc.budget, "Max subspace dimension")->capture_default_str();
  solve->add_option("--seed", sc.seed, "Seed")->capture_default_str();
  solve->add_option("--out", out_dir, "Output directory");

  std::string spec_path, sweep_bundle, sweep_out;
  auto* sweep = app.add_subcommand("sweep", "Run a parameter grid from a JSON spec");
  sweep->add_option("--spec", spec_path, "Sweep spec (JSON)")->required();
  sweep->add_option("--bundle", sweep_bundle, "Bundle directory (overrides spec)");
  sweep->add_option("--out", sweep_out, "Output directory (overrides spec)");

  std::string verify_bundle;
  double rel_tol = 1e-7;
  auto* verify = app.add_subcommand("verify", "Check the certificate of a bundle");
  verify->add_option("--bundle", verify_bundle, "Bundle directory")->required();
  verify->add_option("--rel-tol", rel_tol, "Residual tolerance relative to sum|alpha|")->capture_default_str();

  std::string info_bundle;
  auto* info = app.add_subcommand("info", "Print bundle statistics");
  info->add_option("--bundle", info_bundle, "Bundle directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*gen) return cmd_generate(ga);
    if (*solve) return cmd_solve(bundle, sc, out_dir);
    if (*sweep) return cmd_sweep(spec_path, sweep_bundle, sweep_out);
    if (*verify) return cmd_verify(verify_bundle, rel_tol);
    if (*info) return cmd_info(info_bundle);
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailed;
  }
  return kExitOk;
}
