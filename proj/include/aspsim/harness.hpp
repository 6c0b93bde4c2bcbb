// Copyright 2026 The aspsim Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file harness.hpp
 * @brief Problem assembly shared by the command-line driver, and the error
 *        studies comparing truncated-space simulations with full CI.
 */

#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "aspsim/asci.hpp"
#include "aspsim/asp.hpp"
#include "aspsim/hubbard.hpp"

namespace aspsim {

struct SystemSpec {
  enum class Source { fcidump, hubbard };
  enum class Orbitals { site, scf };

  Source source = Source::hubbard;
  std::filesystem::path fcidump;
  int frozen_core = 0;
  HubbardSpec hubbard;
  Orbitals orbitals = Orbitals::scf;  ///< Hubbard only

  /// Short file-name-safe label, e.g. "hubbard_3x4p_U3_eps0_scf".
  [[nodiscard]] std::string id() const;
};

/// Integrals for the system. Throws ParseError/UsageError from the readers.
[[nodiscard]] IntegralTable load_system(const SystemSpec& spec);

struct OperatorPolicy {
  /// Full spaces above this size use the string-factorized operator.
  std::size_t full_space_direct_above = 200'000;
  /// Truncated spaces are applied on the fly instead of stored.
  bool matrix_free = false;
};

/// One determinant space with its interpolation endpoints, start state and
/// target ground state.
struct Problem {
  std::shared_ptr<const HamiltonianOperator> target;
  std::shared_ptr<const HamiltonianOperator> initial;
  std::unique_ptr<InterpolatedPair> pair;
  std::vector<cplx> psi0;  ///< ground state of the initial Hamiltonian
  TargetState ground;

  [[nodiscard]] const BasisPtr& basis() const { return target->basis(); }
};

/**
 * Builds target and initial operators over `dets` (canonical order) and
 * solves for the start and target states. A diagonal start is the lowest
 * diagonal determinant (canonical order breaks ties); a casci_block start is
 * the lowest eigenvector of that block.
 */
[[nodiscard]] Problem make_problem(const IntegralTable& table, std::vector<Determinant> dets,
                                   const InitialHamiltonianSpec& initial, const OperatorPolicy& policy = {},
                                   const EigOptions& eig = {});

/// Full determinant space; throws ConfigError naming the size when it
/// exceeds `cap`.
[[nodiscard]] Problem make_fci_problem(const IntegralTable& table, const InitialHamiltonianSpec& initial,
                                       std::size_t cap, const OperatorPolicy& policy = {},
                                       const EigOptions& eig = {});

/// <a|b> for states on two sorted determinant lists, zero outside each list.
[[nodiscard]] cplx padded_inner(const Basis& basis_a, std::span<const cplx> a, const Basis& basis_b,
                                std::span<const cplx> b);

enum class StudyKind {
  evolved_state_error,
  overlap_prediction_error,
  gap_error,
  dt_convergence,
  core_size_error,
  truncation_comparison,
};

[[nodiscard]] std::string to_string(StudyKind kind);
/// Throws ConfigError for unknown names.
[[nodiscard]] StudyKind parse_study_kind(const std::string& name);

struct StudyParams {
  double total_time = 5.0;  ///< a.u.
  Schedule schedule;
  PropagationConfig propagation;
  InitialHamiltonianSpec initial;
  AsciConfig ground;
  AsciConfig excited = [] { AsciConfig c; c.root = 1; return c; }();
  std::size_t fci_cap = 1'500'000;
  OperatorPolicy policy;
  EigOptions eig;
  /// Gap study: eigensolver settings and number of evenly spaced s samples.
  EigOptions gap_eig = [] { EigOptions o; o.tol = 1e-8; return o; }();
  int gap_points = 11;
  std::vector<double> dt_values{1.0, 0.5, 0.1};
  bool dt_in_full_space = true;   ///< otherwise the ASCI union space
  double small_core_fraction = 0.02;
  /// Truncation study: sample exact eigenvectors along the path, not only at s = 1.
  bool truncation_every_step = false;
  int truncation_samples = 11;

  void validate() const;
  [[nodiscard]] nlohmann::json to_json() const;
};

struct Series {
  std::string name;
  std::vector<int> step;
  std::vector<double> s;
  std::vector<double> value;

  void push(int k, double sk, double v);
  [[nodiscard]] double max() const;
};

struct StudyReport {
  StudyKind kind = StudyKind::evolved_state_error;
  std::string system_id;
  nlohmann::json params;
  std::vector<Series> series;
  std::vector<std::pair<std::string, EvolutionTrace>> traces;
  nlohmann::json summary;  ///< per-series max and final values plus study extras

  [[nodiscard]] const Series& at(const std::string& name) const;
  /// One CSV per series and per trace plus <stem>_summary.json; returns
  /// the paths written.
  std::vector<std::filesystem::path> write(const std::filesystem::path& dir) const;
  [[nodiscard]] std::string stem() const;
};

/**
 * Runs one study. Studies that need a full-CI reference throw ConfigError
 * when the full space exceeds params.fci_cap.
 */
[[nodiscard]] StudyReport run_study(StudyKind kind, const IntegralTable& table, const std::string& system_id,
                                    const StudyParams& params);

}  // namespace aspsim
