// Copyright 2026 The aspsim Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "aspsim/asci.hpp"
#include "aspsim/errors.hpp"
#include "aspsim/hubbard.hpp"
#include "oracle.hpp"

namespace aspsim {
namespace {

IntegralTable mo_chain(int sites, int n, double U) {
  HubbardSpec spec{.rows = 1, .cols = sites, .periodic = false, .U = U, .n_alpha = n, .n_beta = n};
  return hubbard_scf(spec).mo_table;
}

Eigen::VectorXd dense_spectrum(const IntegralTable& t) {
  const auto dets = full_space(t.n_alpha(), t.n_beta(), t.n_orb());
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(oracle::dense_hamiltonian(dets, t)).eigenvalues();
}

AsciConfig sized(std::size_t target, int root = 0) {
  AsciConfig c;
  c.target_size = target;
  c.core_size = target;
  c.root = root;
  c.e_tol = 1e-10;
  return c;
}

TEST(Asci, FullTargetIsExactOnSmallHubbard) {
  const auto t = build_hubbard({.rows = 1, .cols = 4, .U = 2.0, .n_alpha = 2, .n_beta = 2});
  const auto s = asci_select(t, sized(1000));
  EXPECT_EQ(s.dets, full_space(2, 2, 4));
  EXPECT_NEAR(s.energy, dense_spectrum(t)(0), 1e-9);
  double norm = 0;
  for (double c : s.coeffs) norm += c * c;
  EXPECT_NEAR(norm, 1.0, 1e-12);
}

TEST(Asci, ExcitedRootIsExactWithFullTarget) {
  const auto t = mo_chain(4, 2, 1.5);
  const auto s = asci_select(t, sized(1000, 1));
  EXPECT_NEAR(s.energy, dense_spectrum(t)(1), 1e-9);
  const auto seeds = asci_seeds(t, 1);
  ASSERT_EQ(seeds.size(), 2U);
  for (const auto& d : seeds) EXPECT_TRUE(std::binary_search(s.dets.begin(), s.dets.end(), d));
}

TEST(Asci, ExcitedSeedHasSecondLowestDiagonal) {
  std::mt19937_64 rng(4);
  const auto t = oracle::random_table(5, 2, 2, rng);
  const auto ref = hartree_fock_det(2, 2, 5);
  const auto seeds = asci_seeds(t, 1);
  const Determinant excited = seeds[0] == ref ? seeds[1] : seeds[0];
  const double e = diagonal_element(excited, t);
  for_each_connected(ref, 5, [&](const Determinant& d) {
    EXPECT_GE(diagonal_element(d, t) + 1e-15, e);
  });
}

TEST(Asci, NoninteractingConvergesImmediately) {
  const auto t = mo_chain(6, 3, 0.0);
  AsciConfig cfg = sized(50);
  const auto s = asci_select(t, cfg);
  EXPECT_LE(s.iterations, 2);
  const auto ref = hartree_fock_det(3, 3, 6);
  const auto i = std::lower_bound(s.dets.begin(), s.dets.end(), ref) - s.dets.begin();
  EXPECT_NEAR(std::abs(s.coeffs[i]), 1.0, 1e-10);
}

TEST(Asci, VariationalAndMonotoneInTargetSize) {
  const auto t = mo_chain(6, 3, 3.0);
  const double exact = dense_spectrum(t)(0);
  double previous = std::numeric_limits<double>::infinity();
  for (std::size_t target : {10, 40, 120, 400}) {
    const auto s = asci_select(t, sized(target));
    EXPECT_LE(s.dets.size(), target);
    EXPECT_GE(s.energy, exact - 1e-9) << target;
    EXPECT_LE(s.energy, previous + 1e-9) << target;
    previous = s.energy;
  }
}

TEST(Asci, SmallCoreStillVariational) {
  const auto t = mo_chain(6, 3, 3.0);
  AsciConfig cfg = sized(200);
  cfg.core_size = 4;
  const auto s = asci_select(t, cfg);
  EXPECT_GE(s.energy, dense_spectrum(t)(0) - 1e-9);
  EXPECT_TRUE(std::binary_search(s.dets.begin(), s.dets.end(), hartree_fock_det(3, 3, 6)));
}

TEST(Asci, Deterministic) {
  const auto t = mo_chain(6, 3, 3.0);
  const auto a = asci_select(t, sized(60));
  const auto b = asci_select(t, sized(60));
  EXPECT_EQ(a.dets, b.dets);
  EXPECT_EQ(a.energy, b.energy);
}

TEST(Asci, PeriodicSelectionReturnsLowestIterate) {
  // target 30 alternates between two lists on this chain
  const auto t = mo_chain(6, 3, 3.0);
  const auto s = asci_select(t, sized(30));
  ASSERT_GE(s.history.size(), 3U);
  EXPECT_EQ(s.energy, *std::min_element(s.history.begin() + 1, s.history.end()));
  EXPECT_EQ(s.history[static_cast<std::size_t>(s.iterations)], s.energy);
}

TEST(Asci, IterationCapReportsHistory) {
  const auto t = mo_chain(6, 3, 3.0);
  AsciConfig cfg = sized(100);
  cfg.max_iterations = 1;
  try {
    (void)asci_select(t, cfg);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_EQ(e.history().size(), 2U);
  }
}

TEST(Asci, ConfigValidation) {
  AsciConfig c = sized(10);
  c.core_size = 11;
  EXPECT_THROW(c.validate(), ConfigError);
  c = sized(10);
  c.e_tol = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = sized(1, 1);
  EXPECT_THROW(c.validate(), ConfigError);
  c = sized(10, 2);
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(DynamicsSpace, UnionAndDisabledExcited) {
  const auto t = mo_chain(6, 3, 3.0);
  const auto g = asci_select(t, sized(40));
  const auto e = asci_select(t, sized(40, 1));
  AsciConfig off;
  off.target_size = 0;
  EXPECT_EQ(dynamics_space(t, sized(40), off), g.dets);

  auto expect = g.dets;
  expect.insert(expect.end(), e.dets.begin(), e.dets.end());
  std::sort(expect.begin(), expect.end());
  expect.erase(std::unique(expect.begin(), expect.end()), expect.end());
  EXPECT_EQ(dynamics_space(t, sized(40), sized(40, 1)), expect);

  const auto small = build_hubbard({.rows = 1, .cols = 4, .U = 2.0, .n_alpha = 2, .n_beta = 2});
  EXPECT_EQ(dynamics_space(small, sized(36), sized(36, 1)), full_space(2, 2, 4));
}

TEST(SelectedSpace, FileRoundTrip) {
  const auto t = mo_chain(6, 3, 3.0);
  const auto s = asci_select(t, sized(30));
  const auto path = std::filesystem::temp_directory_path() / "aspsim_selected.txt";
  s.save(path);
  const auto r = SelectedSpace::load(path);
  EXPECT_EQ(r.dets, s.dets);
  EXPECT_EQ(r.coeffs, s.coeffs);
  EXPECT_EQ(r.energy, s.energy);
  EXPECT_EQ(r.n_orb, 6);

  std::ofstream(path) << "aspsim-selected-space 9\n";
  EXPECT_THROW((void)SelectedSpace::load(path), ParseError);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace aspsim
