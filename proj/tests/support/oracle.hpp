// Copyright 2026 The aspsim Authors
// SPDX-License-Identifier: Apache-2.0

// Independent reference implementations used only by the test suite:
// a dense second-quantized Hamiltonian built by explicit creation and
// annihilation operator algebra, and a few dense linear-algebra helpers.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <unordered_map>
#include <bit>
#include <vector>

#include <Eigen/Dense>

#include "aspsim/determinant.hpp"
#include "aspsim/integrals.hpp"

namespace aspsim::oracle {

// Spin orbitals: alpha p -> p, beta p -> n + p. A state is a bitmask over
// 2n spin orbitals; the ordered product places lower indices first.
struct Fock {
  std::uint64_t bits = 0;
  int sign = 1;
};

inline std::optional<Fock> annihilate(Fock s, int i) {
  if (!((s.bits >> i) & 1U)) return std::nullopt;
  const int below = std::popcount(s.bits & ((std::uint64_t{1} << i) - 1));
  s.sign *= (below % 2) ? -1 : 1;
  s.bits &= ~(std::uint64_t{1} << i);
  return s;
}

inline std::optional<Fock> create(Fock s, int i) {
  if ((s.bits >> i) & 1U) return std::nullopt;
  const int below = std::popcount(s.bits & ((std::uint64_t{1} << i) - 1));
  s.sign *= (below % 2) ? -1 : 1;
  s.bits |= std::uint64_t{1} << i;
  return s;
}

inline std::uint64_t to_fock(const Determinant& d, int n) {
  return d.alpha | (d.beta << n);
}

/// <d1| a+_{i} a_{j} |d2> style sign tracking for arbitrary operator strings;
/// returns the dense Hamiltonian over `dets` by applying every term.
inline Eigen::MatrixXd dense_hamiltonian(const std::vector<Determinant>& dets,
                                         const IntegralTable& t) {
  const int n = t.n_orb();
  const auto dim = static_cast<Eigen::Index>(dets.size());
  std::unordered_map<std::uint64_t, Eigen::Index> pos;
  for (Eigen::Index k = 0; k < dim; ++k) pos[to_fock(dets[static_cast<std::size_t>(k)], n)] = k;

  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  auto deposit = [&](const std::optional<Fock>& s, Eigen::Index col, double v) {
    if (!s) return;
    const auto it = pos.find(s->bits);
    if (it != pos.end()) h(it->second, col) += s->sign * v;
  };
  for (Eigen::Index col = 0; col < dim; ++col) {
    const Fock ket{to_fock(dets[static_cast<std::size_t>(col)], n), 1};
    h(col, col) += t.e_core();
    for (int sigma = 0; sigma < 2; ++sigma) {
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
          const double v = t.h(p, q);
          if (v == 0.0) continue;
          auto s = annihilate(ket, q + sigma * n);
          if (s) s = create(*s, p + sigma * n);
          deposit(s, col, v);
        }
    }
    // 1/2 sum (pq|rs) a+_{p s} a+_{r t} a_{s t} a_{q s}
    for (int sg = 0; sg < 2; ++sg)
      for (int tau = 0; tau < 2; ++tau)
        for (int p = 0; p < n; ++p)
          for (int q = 0; q < n; ++q)
            for (int r = 0; r < n; ++r)
              for (int s_ = 0; s_ < n; ++s_) {
                const double v = t.v(p, q, r, s_);
                if (v == 0.0) continue;
                auto s = annihilate(ket, q + sg * n);
                if (s) s = annihilate(*s, s_ + tau * n);
                if (s) s = create(*s, r + tau * n);
                if (s) s = create(*s, p + sg * n);
                deposit(s, col, 0.5 * v);
              }
  }
  return h;
}

inline double lowest_eigenvalue(const Eigen::MatrixXd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

/// Random real table with the full 8-fold symmetry.
inline IntegralTable random_table(int n, int na, int nb, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  IntegralTable t(n, na, nb);
  t.set_e_core(u(rng));
  for (int p = 0; p < n; ++p)
    for (int q = 0; q <= p; ++q) t.set_h(p, q, u(rng));
  for (int p = 0; p < n; ++p)
    for (int q = 0; q <= p; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s <= r; ++s) t.set_v(p, q, r, s, 0.5 * u(rng));
  return t;
}

/// Random real symmetric matrix with entries in [-1, 1].
inline Eigen::MatrixXd random_symmetric(Eigen::Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) a(i, j) = a(j, i) = u(rng);
  return a;
}

/// exp(-i H dt) v via full eigendecomposition.
inline Eigen::VectorXcd dense_propagate(const Eigen::MatrixXd& h, const Eigen::VectorXcd& v,
                                        double dt) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  const Eigen::MatrixXcd q = es.eigenvectors().cast<std::complex<double>>();
  Eigen::VectorXcd c = q.adjoint() * v;
  for (Eigen::Index k = 0; k < c.size(); ++k)
    c(k) *= std::exp(std::complex<double>(0.0, -es.eigenvalues()(k) * dt));
  return q * c;
}

}  // namespace aspsim::oracle
