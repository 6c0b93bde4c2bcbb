// Copyright 2026 The aspsim Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file integrals.hpp
 * @brief Real one- and two-electron integrals of a second-quantized Hamiltonian.
 *
 * Two-electron integrals are in chemist notation (pq|rs) and stored once per
 * 8-fold permutational orbit, so every accessor is symmetric by construction.
 */

#pragma once

#include <cstddef>
#include <vector>

namespace aspsim {

class IntegralTable {
 public:
  IntegralTable() = default;
  /// Zero-initialized table. Throws UsageError on invalid counts.
  IntegralTable(int n_orb, int n_alpha, int n_beta);

  [[nodiscard]] int n_orb() const noexcept { return n_orb_; }
  [[nodiscard]] int n_alpha() const noexcept { return n_alpha_; }
  [[nodiscard]] int n_beta() const noexcept { return n_beta_; }

  [[nodiscard]] double e_core() const noexcept { return e_core_; }
  void set_e_core(double e) noexcept { e_core_ = e; }

  [[nodiscard]] double h(int p, int q) const noexcept {
    return h_[static_cast<std::size_t>(p) * n_orb_ + q];
  }
  /// Sets h_pq and h_qp.
  void set_h(int p, int q, double value);

  [[nodiscard]] double v(int p, int q, int r, int s) const noexcept {
    return eri_[eri_index(p, q, r, s)];
  }
  /// Sets (pq|rs) and its seven symmetry partners.
  void set_v(int p, int q, int r, int s, double value);

  /// Position of (pq|rs) in the packed symmetry-unique storage.
  [[nodiscard]] std::size_t eri_index(int p, int q, int r, int s) const noexcept {
    const std::size_t pq = pair(p, q);
    const std::size_t rs = pair(r, s);
    return pq >= rs ? pq * (pq + 1) / 2 + rs : rs * (rs + 1) / 2 + pq;
  }
  [[nodiscard]] std::size_t eri_size() const noexcept { return eri_.size(); }

  /// Largest |(pq|rs)| over all indices; used for screening.
  [[nodiscard]] double max_abs_v() const;

  /// Throws UsageError when any value is not finite.
  void check_finite() const;

 private:
  static std::size_t pair(int p, int q) noexcept {
    return p >= q ? static_cast<std::size_t>(p) * (p + 1) / 2 + q
                  : static_cast<std::size_t>(q) * (q + 1) / 2 + p;
  }

  int n_orb_ = 0;
  int n_alpha_ = 0;
  int n_beta_ = 0;
  double e_core_ = 0.0;
  std::vector<double> h_;
  std::vector<double> eri_;
};

/**
 * Folds the lowest n_frozen orbitals (doubly occupied) into effective
 * one-electron integrals and the core energy. Remaining orbitals are
 * re-indexed from zero. Throws UsageError if n_frozen exceeds the electron
 * pairs available.
 */
[[nodiscard]] IntegralTable freeze_core(const IntegralTable& table, int n_frozen);

/// Orbital-basis change: returns integrals over the columns of `c`
/// (row-major n x n, c[mu * n + p] is the weight of old orbital mu in new p).
[[nodiscard]] IntegralTable rotate_orbitals(const IntegralTable& table,
                                            const std::vector<double>& c);

}  // namespace aspsim
