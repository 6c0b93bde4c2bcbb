// Copyright 2026 The aspsim Authors
// SPDX-License-Identifier: Apache-2.0

// aspsim: adiabatic state preparation simulator.
//
//   aspsim evolve        --config run.json [overrides]
//   aspsim critical-time --fcidump LIH.FCIDUMP -o out
//   aspsim asci-select   --rows 3 --cols 4 --periodic --U 3 --target-size 100000
//   aspsim study         --study gap_error ...
//   aspsim validate      --config run.json
//
// A JSON config is read first; flags override individual fields. Times are
// in atomic units, energies in Hartree. ASPSIM_NUM_THREADS sets the default
// thread count.

#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "aspsim/cli.hpp"
#include "aspsim/errors.hpp"

namespace {

using nlohmann::json;

struct Overrides {
  std::string config;
  std::optional<std::string> fcidump;
  std::optional<int> frozen_core;
  std::optional<int> rows, cols, n_alpha, n_beta;
  bool periodic = false;
  bool open = false;
  std::optional<double> hopping, U, eps;
  std::optional<std::string> orbitals;
  std::optional<std::string> space;
  std::optional<std::size_t> target_size, core_size, excited_target_size, excited_core_size;
  std::optional<double> e_tol;
  std::optional<double> dt, krylov_tol;
  std::optional<int> krylov_max;
  std::optional<std::string> schedule;
  std::optional<double> schedule_c;
  std::optional<std::string> initial;
  std::optional<std::vector<int>> active;
  std::optional<double> total_time;
  std::optional<std::string> criterion;
  std::optional<double> overlap_threshold, energy_threshold, t_cap;
  bool no_gap_trace = false;
  std::optional<std::string> study;
  std::optional<int> gap_points;
  std::optional<std::vector<double>> dt_values;
  std::optional<double> eig_tol;
  std::optional<std::size_t> fci_cap;
  std::optional<std::string> output;
  bool matrix_free = false;
  std::optional<int> trace_stride;
  bool adiabatic_numerator = false;
  std::optional<int> threads;
};

void add_options(CLI::App& app, Overrides& o) {
  app.add_option("-c,--config", o.config, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--fcidump", o.fcidump, "FCIDUMP integral file")->group("System");
  app.add_option("--frozen-core", o.frozen_core, "Doubly occupied orbitals folded into the core")->group("System");
  app.add_option("--rows", o.rows, "Hubbard lattice rows")->group("System");
  app.add_option("--cols", o.cols, "Hubbard lattice columns")->group("System");
  app.add_flag("--periodic", o.periodic, "Periodic Hubbard lattice")->group("System");
  app.add_flag("--open", o.open, "Open Hubbard lattice")->group("System");
  app.add_option("--hopping", o.hopping, "Hubbard hopping t (Hartree)")->group("System");
  app.add_option("--U", o.U, "Hubbard on-site repulsion (Hartree)")->group("System");
  app.add_option("--eps", o.eps, "Staggered potential amplitude (Hartree)")->group("System");
  app.add_option("--n-alpha", o.n_alpha, "Alpha electrons")->group("System");
  app.add_option("--n-beta", o.n_beta, "Beta electrons")->group("System");
  app.add_option("--orbitals", o.orbitals, "Hubbard orbitals: site or scf")->group("System");

  app.add_option("--space", o.space, "Determinant space: fci or asci")->group("Space");
  app.add_option("--target-size", o.target_size, "ASCI ground-state target size")->group("Space");
  app.add_option("--core-size", o.core_size, "ASCI ground-state core size")->group("Space");
  app.add_option("--excited-target-size", o.excited_target_size, "ASCI excited-state target size (0 disables)")
      ->group("Space");
  app.add_option("--excited-core-size", o.excited_core_size, "ASCI excited-state core size")->group("Space");
  app.add_option("--e-tol", o.e_tol, "ASCI energy tolerance (Hartree)")->group("Space");

  app.add_option("--dt", o.dt, "Time step (a.u.)")->group("Evolution");
  app.add_option("--krylov-tol", o.krylov_tol, "Krylov truncation tolerance")->group("Evolution");
  app.add_option("--krylov-max", o.krylov_max, "Krylov dimension cap")->group("Evolution");
  app.add_option("--schedule", o.schedule, "Schedule: linear or polynomial")->group("Evolution");
  app.add_option("--schedule-c", o.schedule_c, "Polynomial schedule exponent in (0, 1]")->group("Evolution");
  app.add_option("--initial", o.initial, "Initial Hamiltonian: diagonal or casci_block")->group("Evolution");
  app.add_option("--active", o.active, "Active orbitals for casci_block")->group("Evolution");
  app.add_option("-T,--total-time", o.total_time, "Total evolution time (a.u.)")->group("Evolution");
  app.add_option("--trace-stride", o.trace_stride, "Eigenpairs every this many steps (0: never)")->group("Evolution");
  app.add_flag("--adiabatic-numerator", o.adiabatic_numerator, "Record |<1|H_target - H_init|0>|")->group("Evolution");
  app.add_option("--eig-tol", o.eig_tol, "Eigensolver tolerance (Hartree)")->group("Evolution");

  app.add_option("--criterion", o.criterion, "overlap or energy")->group("Critical time");
  app.add_option("--overlap-threshold", o.overlap_threshold, "Required squared overlap")->group("Critical time");
  app.add_option("--energy-threshold", o.energy_threshold, "Allowed energy error (Hartree)")->group("Critical time");
  app.add_option("--t-cap", o.t_cap, "Largest total time tried (a.u.)")->group("Critical time");
  app.add_flag("--no-gap-trace", o.no_gap_trace, "Skip the spectral trace of the final run")->group("Critical time");

  app.add_option("--study", o.study, "Study kind")->group("Study");
  app.add_option("--gap-points", o.gap_points, "Gap study sample count")->group("Study");
  app.add_option("--dt-values", o.dt_values, "Time steps for dt_convergence (a.u.)")->group("Study");
  app.add_option("--fci-cap", o.fci_cap, "Largest full space used as a reference")->group("Study");

  app.add_option("-o,--output", o.output, "Output directory");
  app.add_flag("--matrix-free", o.matrix_free, "Apply truncated-space Hamiltonians without storing them");
  app.add_option("-j,--threads", o.threads, "Threads (default: ASPSIM_NUM_THREADS or all cores)");
}

json build_config(const Overrides& o, const std::string& experiment) {
  json j = json::object();
  if (!o.config.empty()) {
    std::ifstream f(o.config);
    try {
      j = json::parse(f);
    } catch (const json::parse_error& e) {
      throw aspsim::ConfigError(o.config + ": " + e.what());
    }
  }
  j["experiment"] = experiment;
  auto set = [&](const char* ptr, const auto& v) {
    if (v) j[json::json_pointer(ptr)] = *v;
  };
  if (o.fcidump) {
    if (j.contains("system")) j["system"].erase("hubbard");
    j["system"]["fcidump"] = *o.fcidump;
  }
  set("/system/frozen_core", o.frozen_core);
  const bool lattice = o.rows || o.cols || o.n_alpha || o.n_beta || o.hopping || o.U || o.eps || o.orbitals ||
                       o.periodic || o.open;
  if (lattice) {
    if (j.contains("system")) j["system"].erase("fcidump");
    set("/system/hubbard/rows", o.rows);
    set("/system/hubbard/cols", o.cols);
    set("/system/hubbard/n_alpha", o.n_alpha);
    set("/system/hubbard/n_beta", o.n_beta);
    set("/system/hubbard/t", o.hopping);
    set("/system/hubbard/U", o.U);
    set("/system/hubbard/eps", o.eps);
    set("/system/hubbard/orbitals", o.orbitals);
    if (o.periodic) j["system"]["hubbard"]["periodic"] = true;
    if (o.open) j["system"]["hubbard"]["periodic"] = false;
  }
  set("/space", o.space);
  set("/asci/ground/target_size", o.target_size);
  set("/asci/ground/core_size", o.core_size);
  set("/asci/excited/target_size", o.excited_target_size);
  set("/asci/excited/core_size", o.excited_core_size);
  if (o.e_tol) {
    j["asci"]["ground"]["e_tol"] = *o.e_tol;
    j["asci"]["excited"]["e_tol"] = *o.e_tol;
  }
  // A core size defaults to its target size when only the target is given.
  for (const char* root : {"ground", "excited"}) {
    if (!j.contains("asci") || !j["asci"].contains(root)) continue;
    auto& a = j["asci"][root];
    if (a.contains("target_size") && !a.contains("core_size")) a["core_size"] = a["target_size"];
  }
  set("/propagation/dt", o.dt);
  set("/propagation/krylov_tol", o.krylov_tol);
  set("/propagation/krylov_max", o.krylov_max);
  set("/schedule/kind", o.schedule);
  set("/schedule/c", o.schedule_c);
  set("/initial/kind", o.initial);
  set("/initial/active_orbitals", o.active);
  set("/total_time", o.total_time);
  set("/critical_time/criterion", o.criterion);
  set("/critical_time/overlap_threshold", o.overlap_threshold);
  set("/critical_time/energy_threshold", o.energy_threshold);
  set("/critical_time/t_cap", o.t_cap);
  if (o.no_gap_trace) j["critical_time"]["gap_trace"] = false;
  set("/study/kind", o.study);
  set("/study/gap_points", o.gap_points);
  set("/study/dt_values", o.dt_values);
  set("/eig_tol", o.eig_tol);
  set("/fci_cap", o.fci_cap);
  set("/output_dir", o.output);
  if (o.matrix_free) j["matrix_free"] = true;
  set("/trace_stride", o.trace_stride);
  if (o.adiabatic_numerator) j["adiabatic_numerator"] = true;
  set("/threads", o.threads);
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adiabatic state preparation simulator (times in a.u., energies in Hartree)"};
  app.require_subcommand(1);
  app.set_version_flag("--version", aspsim::version());

  Overrides o;
  std::string experiment;
  bool validate_only = false;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"evolve", "Evolve the initial ground state for a fixed total time"},
      {"critical-time", "Find the shortest total time meeting the overlap or energy criterion"},
      {"asci-select", "Select ground and excited ASCI spaces and save them"},
      {"study", "Run an error study against full CI"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    add_options(*sub, o);
    sub->callback([&, n = name] { experiment = n; });
  }
  auto* val = app.add_subcommand("validate", "Check a configuration without running it");
  add_options(*val, o);
  std::string as;
  auto* as_opt = val->add_option("--as", as, "Experiment the configuration is checked for (default: its own)");
  val->callback([&] { validate_only = true; });

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate_only) {
      std::string kind = "evolve";
      if (as_opt->count() > 0) {
        kind = as;
      } else if (!o.config.empty()) {
        std::ifstream f(o.config);
        const auto raw = json::parse(f, nullptr, false);
        if (raw.is_object() && raw.contains("experiment") && raw["experiment"].is_string()) kind = raw["experiment"];
      }
      const json j = build_config(o, kind);
      const auto cfg = aspsim::RunConfig::from_json(j);
      const auto diagnostics = aspsim::validate(cfg);
      for (const auto& d : diagnostics) std::cout << d << '\n';
      if (diagnostics.empty()) std::cout << "ok\n";
      return diagnostics.empty() ? aspsim::kExitOk : aspsim::kExitConfig;
    }
    const auto cfg = aspsim::RunConfig::from_json(build_config(o, experiment));
    return aspsim::run(cfg, std::cerr);
  } catch (const aspsim::ConfigError& e) {
    std::cerr << "config: " << e.what() << '\n';
    return aspsim::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return aspsim::kExitFailure;
  }
}
