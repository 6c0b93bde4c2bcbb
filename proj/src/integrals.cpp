// Copyright 2026 The aspsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "aspsim/integrals.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "aspsim/determinant.hpp"
#include "aspsim/errors.hpp"

namespace aspsim {

IntegralTable::IntegralTable(int n_orb, int n_alpha, int n_beta)
    : n_orb_(n_orb), n_alpha_(n_alpha), n_beta_(n_beta) {
  if (n_orb < 0 || n_orb > kMaxOrbitals) {
    throw UsageError(fmt::format("orbital count {} outside [0, {}]", n_orb, kMaxOrbitals));
  }
  if (n_alpha < 0 || n_beta < 0 || n_alpha > n_orb || n_beta > n_orb) {
    throw UsageError(fmt::format("electron counts ({}, {}) invalid for {} orbitals", n_alpha,
                                 n_beta, n_orb));
  }
  const std::size_t n = static_cast<std::size_t>(n_orb);
  const std::size_t npair = n * (n + 1) / 2;
  h_.assign(n * n, 0.0);
  eri_.assign(npair * (npair + 1) / 2, 0.0);
}

void IntegralTable::set_h(int p, int q, double value) {
  h_[static_cast<std::size_t>(p) * n_orb_ + q] = value;
  h_[static_cast<std::size_t>(q) * n_orb_ + p] = value;
}

void IntegralTable::set_v(int p, int q, int r, int s, double value) {
  eri_[eri_index(p, q, r, s)] = value;
}

double IntegralTable::max_abs_v() const {
  double m = 0.0;
  for (double x : eri_) m = std::max(m, std::abs(x));
  return m;
}

void IntegralTable::check_finite() const {
  if (!std::isfinite(e_core_)) throw UsageError("core energy is not finite");
  for (double x : h_)
    if (!std::isfinite(x)) throw UsageError("one-electron integral is not finite");
  for (double x : eri_)
    if (!std::isfinite(x)) throw UsageError("two-electron integral is not finite");
}

IntegralTable freeze_core(const IntegralTable& t, int n_frozen) {
  if (n_frozen < 0 || n_frozen > std::min(t.n_alpha(), t.n_beta())) {
    throw UsageError(fmt::format("cannot freeze {} orbitals with {} alpha / {} beta electrons",
                                 n_frozen, t.n_alpha(), t.n_beta()));
  }
  if (n_frozen == 0) return t;
  const int n = t.n_orb();
  const int na = n - n_frozen;
  IntegralTable out(na, t.n_alpha() - n_frozen, t.n_beta() - n_frozen);

  double e = t.e_core();
  for (int i = 0; i < n_frozen; ++i) {
    e += 2.0 * t.h(i, i);
    for (int j = 0; j < n_frozen; ++j) e += 2.0 * t.v(i, i, j, j) - t.v(i, j, j, i);
  }
  out.set_e_core(e);

  for (int p = n_frozen; p < n; ++p) {
    for (int q = n_frozen; q <= p; ++q) {
      double hpq = t.h(p, q);
      for (int i = 0; i < n_frozen; ++i) hpq += 2.0 * t.v(p, q, i, i) - t.v(p, i, i, q);
      out.set_h(p - n_frozen, q - n_frozen, hpq);
    }
  }
  for (int p = 0; p < na; ++p)
    for (int q = 0; q <= p; ++q)
      for (int r = 0; r <= p; ++r)
        for (int s = 0; s <= (r == p ? q : r); ++s)
          out.set_v(p, q, r, s, t.v(p + n_frozen, q + n_frozen, r + n_frozen, s + n_frozen));
  return out;
}

IntegralTable rotate_orbitals(const IntegralTable& t, const std::vector<double>& c) {
  const std::size_t n = static_cast<std::size_t>(t.n_orb());
  if (c.size() != n * n) {
    throw UsageError(fmt::format("rotation has {} entries, expected {}", c.size(), n * n));
  }
  IntegralTable out(t.n_orb(), t.n_alpha(), t.n_beta());
  out.set_e_core(t.e_core());

  auto C = [&](std::size_t mu, std::size_t p) { return c[mu * n + p]; };

  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q <= p; ++q) {
      double acc = 0.0;
      for (std::size_t mu = 0; mu < n; ++mu)
        for (std::size_t nu = 0; nu < n; ++nu)
          acc += C(mu, p) * t.h(static_cast<int>(mu), static_cast<int>(nu)) * C(nu, q);
      out.set_h(static_cast<int>(p), static_cast<int>(q), acc);
    }
  }

  // Four quarter transformations over dense n^4 buffers.
  const std::size_t n2 = n * n;
  std::vector<double> a(n2 * n2), b(n2 * n2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l)
          a[((i * n + j) * n + k) * n + l] =
              t.v(static_cast<int>(i), static_cast<int>(j), static_cast<int>(k),
                  static_cast<int>(l));

  // Transform the last index, then rotate index positions; four passes bring
  // every index into the new basis and the layout back to (p q r s).
  for (int pass = 0; pass < 4; ++pass) {
    std::fill(b.begin(), b.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
          const double* src = &a[((i * n + j) * n + k) * n];
          for (std::size_t s = 0; s < n; ++s) {
            double acc = 0.0;
            for (std::size_t l = 0; l < n; ++l) acc += src[l] * C(l, s);
            // new layout (s, i, j, k)
            b[((s * n + i) * n + j) * n + k] = acc;
          }
        }
    std::swap(a, b);
  }

  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q <= p; ++q)
      for (std::size_t r = 0; r <= p; ++r)
        for (std::size_t s = 0; s <= (r == p ? q : r); ++s)
          out.set_v(static_cast<int>(p), static_cast<int>(q), static_cast<int>(r),
                    static_cast<int>(s), a[((p * n + q) * n + r) * n + s]);
  return out;
}

}  // namespace aspsim
