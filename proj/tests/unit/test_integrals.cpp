// Copyright 2026 The aspsim Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "aspsim/errors.hpp"
#include "aspsim/fcidump.hpp"
#include "aspsim/hamiltonian.hpp"
#include "aspsim/hubbard.hpp"
#include "aspsim/integrals.hpp"
#include "oracle.hpp"

namespace aspsim {
namespace {

IntegralTable parse(const std::string& text) {
  std::istringstream in(text);
  return read_fcidump(in);
}

double fci_energy(const IntegralTable& t) {
  return oracle::lowest_eigenvalue(
      oracle::dense_hamiltonian(full_space(t.n_alpha(), t.n_beta(), t.n_orb()), t));
}

TEST(Fcidump, SingleOrbital) {
  const auto t = parse("&FCI NORB=1,NELEC=2,MS2=0,\n&END\n1.0 1 1 0 0\n0.5 1 1 1 1\n");
  EXPECT_EQ(t.n_orb(), 1);
  EXPECT_EQ(t.n_alpha(), 1);
  EXPECT_EQ(t.n_beta(), 1);
  EXPECT_EQ(t.h(0, 0), 1.0);
  EXPECT_EQ(t.v(0, 0, 0, 0), 0.5);
  EXPECT_EQ(t.e_core(), 0.0);
}

TEST(Fcidump, SymmetrizesAndAcceptsFortranExponents) {
  const auto t = parse(" &FCI NORB=2,NELEC=2,\n  ORBSYM=1,1,\n  ISYM=1,\n /\n"
                       "0.7 1 2 0 0\n 2.5D-1 2 1 1 1\n -3.0 0 0 0 0\n 9.9 1 0 0 0\n");
  EXPECT_EQ(t.h(0, 1), 0.7);
  EXPECT_EQ(t.h(1, 0), 0.7);
  for (auto [p, q, r, s] : {std::array{1, 0, 0, 0}, std::array{0, 1, 0, 0},
                            std::array{0, 0, 1, 0}, std::array{0, 0, 0, 1}})
    EXPECT_EQ(t.v(p, q, r, s), 0.25);
  EXPECT_EQ(t.e_core(), -3.0);
}

TEST(Fcidump, ErrorsNameTheLine) {
  const std::string hdr = "&FCI NORB=2,NELEC=2,MS2=0\n&END\n";
  auto line_of = [&](const std::string& body) -> std::size_t {
    try {
      (void)parse(hdr + body);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(line_of("1.0 1 1 0 0\n1.0 3 1 0 0\n"), 4U);
  EXPECT_EQ(line_of("1.0 1 x 0 0\n"), 3U);
  EXPECT_EQ(line_of("1.0 1 1 0\n"), 3U);
  EXPECT_EQ(line_of("1.0 1 1 0 0\n1.5 1 1 0 0\n"), 4U);
  EXPECT_EQ(line_of("0.5 1 2 1 2\n0.6 2 1 2 1\n"), 4U);
  EXPECT_EQ(line_of("1.0 1 1 0 0\n1.0 1 1 0 0\n"), 0U);
  EXPECT_THROW((void)parse("NORB=2\n"), ParseError);
  EXPECT_THROW((void)parse("&FCI NELEC=2 &END\n"), ParseError);
  EXPECT_THROW((void)parse("&FCI NORB=2,NELEC=2\n1.0 1 1 0 0\n"), ParseError);
}

TEST(Fcidump, RoundTrip) {
  std::mt19937_64 rng(3);
  const auto t = oracle::random_table(5, 2, 1, rng);
  std::stringstream ss;
  write_fcidump(ss, t);
  const auto u = read_fcidump(ss);
  ASSERT_EQ(u.n_orb(), 5);
  EXPECT_EQ(u.n_alpha(), 2);
  EXPECT_EQ(u.n_beta(), 1);
  EXPECT_NEAR(u.e_core(), t.e_core(), 1e-14);
  for (int p = 0; p < 5; ++p)
    for (int q = 0; q < 5; ++q) {
      EXPECT_NEAR(u.h(p, q), t.h(p, q), 1e-14);
      for (int r = 0; r < 5; ++r)
        for (int s = 0; s < 5; ++s) EXPECT_NEAR(u.v(p, q, r, s), t.v(p, q, r, s), 1e-14);
    }
}

TEST(Fcidump, LiHFixture) {
  const auto t = read_fcidump(std::filesystem::path(ASPSIM_FIXTURES) / "LIH_ccpvdz.FCIDUMP");
  EXPECT_EQ(t.n_orb(), 19);
  EXPECT_EQ(t.n_alpha(), 2);
  EXPECT_EQ(t.n_beta(), 2);
  EXPECT_NO_THROW(t.check_finite());
}

TEST(Integrals, EightFoldSymmetry) {
  IntegralTable t(4, 1, 1);
  t.set_v(0, 1, 2, 3, 0.125);
  for (auto [p, q, r, s] : {std::array{0, 1, 2, 3}, std::array{1, 0, 2, 3},
                            std::array{0, 1, 3, 2}, std::array{1, 0, 3, 2},
                            std::array{2, 3, 0, 1}, std::array{3, 2, 0, 1},
                            std::array{2, 3, 1, 0}, std::array{3, 2, 1, 0}})
    EXPECT_EQ(t.v(p, q, r, s), 0.125);
  EXPECT_EQ(t.v(0, 2, 1, 3), 0.0);
  EXPECT_THROW(IntegralTable(2, 3, 0), UsageError);
}

TEST(FreezeCore, ZeroIsIdentity) {
  std::mt19937_64 rng(5);
  const auto t = oracle::random_table(4, 2, 2, rng);
  const auto f = freeze_core(t, 0);
  EXPECT_EQ(f.n_orb(), 4);
  EXPECT_EQ(f.e_core(), t.e_core());
  for (int p = 0; p < 4; ++p)
    for (int q = 0; q < 4; ++q) EXPECT_EQ(f.h(p, q), t.h(p, q));
}

TEST(FreezeCore, CoreEnergyEqualsCoreDeterminantEnergy) {
  std::mt19937_64 rng(9);
  const auto t = oracle::random_table(2, 1, 1, rng);
  const auto f = freeze_core(t, 1);
  EXPECT_EQ(f.n_orb(), 1);
  EXPECT_EQ(f.n_alpha(), 0);
  EXPECT_EQ(f.n_beta(), 0);
  EXPECT_NEAR(f.e_core(), diagonal_element(Determinant{1, 1}, t), 1e-12);
}

// Frozen-space FCI equals the unfrozen Hamiltonian restricted to
// determinants with the core doubly occupied.
TEST(FreezeCore, MatchesCoreRestrictedDiagonalization) {
  std::mt19937_64 rng(21);
  for (auto [n, na, nb, nf] : {std::array{4, 2, 2, 1}, std::array{5, 3, 2, 1},
                               std::array{6, 3, 3, 2}, std::array{6, 2, 2, 2}}) {
    const auto t = oracle::random_table(n, na, nb, rng);
    const Bits core = low_mask(nf);
    std::vector<Determinant> restricted;
    for (const auto& d : full_space(na, nb, n))
      if ((d.alpha & core) == core && (d.beta & core) == core) restricted.push_back(d);
    const double want = oracle::lowest_eigenvalue(oracle::dense_hamiltonian(restricted, t));
    EXPECT_NEAR(fci_energy(freeze_core(t, nf)), want, 1e-9);
  }
  EXPECT_THROW((void)freeze_core(oracle::random_table(4, 2, 1, rng), 2), UsageError);
}

TEST(Hubbard, TwoSiteAnalytic) {
  for (double U : {0.0, 2.0, 4.0}) {
    const auto t = build_hubbard({.rows = 1, .cols = 2, .t = 1.0, .U = U, .n_alpha = 1, .n_beta = 1});
    EXPECT_NEAR(fci_energy(t), (U - std::sqrt(U * U + 16.0)) / 2.0, 1e-10);
  }
}

TEST(Hubbard, PeriodicGridConnectivity) {
  HubbardSpec spec{.rows = 3, .cols = 4, .periodic = true, .t = 1.0, .U = 3.0, .n_alpha = 6, .n_beta = 6};
  const auto bonds = hubbard_bonds(spec);
  EXPECT_EQ(bonds.size(), 24U);
  const auto t = build_hubbard(spec);
  for (int i = 0; i < 12; ++i) {
    double sum = 0.0;
    int neighbours = 0;
    for (int j = 0; j < 12; ++j) {
      if (j == i) continue;
      sum += t.h(i, j);
      neighbours += t.h(i, j) != 0.0;
      EXPECT_EQ(t.h(i, j), t.h(j, i));
    }
    EXPECT_EQ(neighbours, 4);
    EXPECT_DOUBLE_EQ(sum, -4.0);
    EXPECT_EQ(t.v(i, i, i, i), 3.0);
  }
  EXPECT_THROW((void)hubbard_bonds({.rows = 2, .cols = 4, .periodic = true}), UsageError);
  EXPECT_EQ(hubbard_bonds({.rows = 1, .cols = 18, .periodic = true}).size(), 18U);
  EXPECT_EQ(hubbard_bonds({.rows = 1, .cols = 8}).size(), 7U);
}

TEST(Hubbard, StaggerSign) {
  const auto t = build_hubbard({.rows = 2, .cols = 3, .stagger_eps = 0.5, .n_alpha = 1, .n_beta = 1});
  for (int i = 0; i < 6; ++i) EXPECT_EQ(t.h(i, i), i % 2 == 0 ? 0.5 : -0.5);
}

TEST(MeanField, ExactAtZeroU) {
  const HubbardSpec spec{.rows = 1, .cols = 6, .t = 1.0, .U = 0.0, .n_alpha = 3, .n_beta = 3};
  const auto r = hubbard_scf(spec);
  for (int p = 0; p < 6; ++p)
    for (int q = 0; q < 6; ++q)
      if (p != q) EXPECT_NEAR(r.mo_table.h(p, q), 0.0, 1e-10);
  for (int p = 1; p < 6; ++p) EXPECT_LE(r.orbitals.energies[p - 1], r.orbitals.energies[p] + 1e-12);
}

TEST(MeanField, OrthonormalAndStationary) {
  const HubbardSpec spec{.rows = 1, .cols = 8, .t = 1.0, .U = 3.0, .stagger_eps = 1.0,
                         .n_alpha = 4, .n_beta = 4};
  const auto r = hubbard_scf(spec);
  const auto c = Eigen::Map<const Eigen::Matrix<double, 8, 8, Eigen::RowMajor>>(
      r.orbitals.coefficients.data());
  EXPECT_LT((c.transpose() * c - Eigen::Matrix<double, 8, 8>::Identity()).cwiseAbs().maxCoeff(), 1e-10);
  const Eigen::Matrix<double, 8, 8> p = c.leftCols(4) * c.leftCols(4).transpose();
  std::vector<double> pv(64);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) pv[static_cast<std::size_t>(i * 8 + j)] = p(i, j);
  const auto fv = fock_matrix(build_hubbard(spec), pv);
  const auto f = Eigen::Map<const Eigen::Matrix<double, 8, 8, Eigen::RowMajor>>(fv.data());
  EXPECT_LT((f * p - p * f).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(MeanField, BasisRotationInvariance) {
  for (const HubbardSpec& spec :
       {HubbardSpec{.rows = 1, .cols = 2, .t = 1.0, .U = 2.0, .n_alpha = 1, .n_beta = 1},
        HubbardSpec{.rows = 1, .cols = 6, .t = 1.0, .U = 3.0, .stagger_eps = 1.0, .n_alpha = 3,
                    .n_beta = 3}}) {
    const auto site = build_hubbard(spec);
    const auto mo = hubbard_scf(spec).mo_table;
    const double tol = spec.cols == 2 ? 1e-10 : 1e-9;
    EXPECT_NEAR(fci_energy(mo), fci_energy(site), tol);
  }
}

TEST(MeanField, RejectsOpenShell) {
  EXPECT_THROW((void)hubbard_scf({.rows = 1, .cols = 3, .n_alpha = 2, .n_beta = 1}), UsageError);
}

}  // namespace
}  // namespace aspsim
