// Copyright 2026 The aspsim Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file hubbard.hpp
 * @brief Hubbard lattices with a staggered on-site potential, in the site
 *        basis or in restricted mean-field orbitals.
 *
 *   H = -t sum_<ij> a+_i a_j + U sum_i n_i,up n_i,dn + sum_i (-1)^i eps n_i
 *
 * Sites are numbered row-major from zero; site i carries (-1)^i * eps.
 */

#pragma once

#include <utility>
#include <vector>

#include "aspsim/integrals.hpp"

namespace aspsim {

struct HubbardSpec {
  int rows = 1;  ///< 1 for a chain
  int cols = 2;
  bool periodic = false;
  double t = 1.0;            ///< hopping (Hartree)
  double U = 0.0;            ///< on-site repulsion (Hartree)
  double stagger_eps = 0.0;  ///< staggered potential amplitude (Hartree)
  int n_alpha = 1;
  int n_beta = 1;

  [[nodiscard]] int n_sites() const noexcept { return rows * cols; }
};

/// Nearest-neighbour bonds (i < j), wrapping along periodic dimensions.
/// Throws UsageError when a periodic dimension has length 2 (duplicate bond).
[[nodiscard]] std::vector<std::pair<int, int>> hubbard_bonds(const HubbardSpec& spec);

/// Site-basis integrals: h_ij = -t on bonds, h_ii = (-1)^i eps, (ii|ii) = U.
[[nodiscard]] IntegralTable build_hubbard(const HubbardSpec& spec);

struct OrbitalRotation {
  int n = 0;
  std::vector<double> coefficients;  ///< row-major n x n; column p is orbital p
  std::vector<double> energies;      ///< ascending orbital energies
};

struct MeanFieldResult {
  OrbitalRotation orbitals;
  IntegralTable mo_table;  ///< integrals over the mean-field orbitals
  double energy = 0.0;     ///< mean-field total energy (Hartree)
  int iterations = 0;
  double residual = 0.0;   ///< last max |density change|
};

struct MeanFieldOptions {
  double tolerance = 1e-10;
  int max_iterations = 500;
  double damping = 0.3;  ///< weight of the previous density in the update
};

/**
 * Restricted closed-shell mean field on the site-basis integrals of `spec`.
 * Starts from the eigenvectors of h and iterates F = h + J - K/2 until the
 * density changes by less than the tolerance. Orbitals come back energy
 * ordered, each with its largest component positive.
 *
 * Throws UsageError for open-shell filling and ConvergenceError (carrying
 * the residual history) when the iteration cap is hit.
 */
[[nodiscard]] MeanFieldResult hubbard_scf(const HubbardSpec& spec,
                                          const MeanFieldOptions& options = {});

/// Same procedure on an arbitrary table (closed shell).
[[nodiscard]] MeanFieldResult restricted_mean_field(const IntegralTable& site_table,
                                                    const MeanFieldOptions& options = {});

/// Fock matrix (row-major) built from the per-spin density `density`.
[[nodiscard]] std::vector<double> fock_matrix(const IntegralTable& table,
                                              const std::vector<double>& density);

}  // namespace aspsim
