// Copyright 2026 The aspsim Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file cli.hpp
 * @brief Run configuration, static validation and the experiment driver
 *        behind the aspsim executable.
 *
 * Units throughout: times in atomic units, energies in Hartree.
 */

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "aspsim/harness.hpp"

namespace aspsim {

/// Process exit statuses.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitConvergence = 3,
  kExitUnreachable = 4,
};

enum class Experiment { evolve, critical_time, asci_select, study };
[[nodiscard]] std::string to_string(Experiment e);
[[nodiscard]] Experiment parse_experiment(const std::string& name);

struct RunConfig {
  Experiment experiment = Experiment::evolve;
  SystemSpec system;
  bool system_given = false;
  enum class Space { fci, asci } space = Space::fci;  ///< space for evolve and critical-time
  AsciConfig asci_ground;
  AsciConfig asci_excited = [] { AsciConfig c; c.root = 1; return c; }();
  PropagationConfig propagation;
  Schedule schedule;
  InitialHamiltonianSpec initial;
  double total_time = 1.0;  ///< evolve only
  CriticalTimeConfig critical;
  bool gap_trace = true;    ///< critical-time: spectral trace of the final run
  StudyKind study = StudyKind::evolved_state_error;
  StudyParams study_params;  ///< study-only knobs (gap points, dt values, ...)
  double eig_tol = 1e-12;
  std::size_t fci_cap = 1'500'000;
  std::filesystem::path output_dir = "aspsim_out";
  bool matrix_free = false;
  int trace_stride = 0;     ///< spectral entries every this many steps in evolve traces
  bool adiabatic_numerator = false;
  std::uint64_t seed = 0;   ///< reserved; the pipeline is deterministic
  int threads = 0;          ///< 0: ASPSIM_NUM_THREADS or the OpenMP default

  /// Strict parse: unknown keys and wrong types throw ConfigError naming the field.
  [[nodiscard]] static RunConfig from_json(const nlohmann::json& j);
  [[nodiscard]] nlohmann::json to_json() const;
};

/// Static checks only; an empty list means the configuration can run.
[[nodiscard]] std::vector<std::string> validate(const RunConfig& config);

/**
 * Executes the configured experiment, writing its outputs and
 * manifest.json into config.output_dir. Progress and errors go to `log`;
 * every error message names the stage that failed. Returns an ExitCode.
 */
int run(const RunConfig& config, std::ostream& log);

/// Software version recorded in manifests.
[[nodiscard]] std::string version();

}  // namespace aspsim
