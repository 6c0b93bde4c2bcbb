// Copyright 2026 The aspsim Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "aspsim/asp.hpp"
#include "aspsim/eig.hpp"
#include "aspsim/errors.hpp"
#include "aspsim/hubbard.hpp"
#include "oracle.hpp"

namespace aspsim {
namespace {

struct Problem {
  BasisPtr basis;
  std::shared_ptr<const SparseHamiltonian> target;
  std::shared_ptr<const SparseHamiltonian> initial;
  TargetState ground;
  std::vector<cplx> psi0;
};

// 4-site chain in mean-field orbitals; the lowest diagonal entry is the
// closed-shell reference.
Problem chain_problem(double U) {
  HubbardSpec spec{.rows = 1, .cols = 4, .U = U, .n_alpha = 2, .n_beta = 2};
  const auto mo = hubbard_scf(spec).mo_table;
  Problem p;
  p.basis = std::make_shared<const Basis>(full_space(2, 2, 4));
  p.target = std::make_shared<const SparseHamiltonian>(assemble(p.basis, mo));
  p.initial = std::make_shared<const SparseHamiltonian>(
      make_initial(*p.target, {}, hartree_fock_det(2, 2, 4)));
  const auto g = lowest_eigenpairs(*p.target, 1)[0];
  p.ground = {g.value, g.vector};
  const auto d = p.initial->diagonal();
  p.psi0.assign(p.basis->size(), 0.0);
  p.psi0[std::min_element(d.begin(), d.end()) - d.begin()] = 1.0;
  return p;
}

double overlap_at(const Problem& p, double T) {
  const InterpolatedPair pair(p.initial, p.target);
  return evolve(pair, p.psi0, {}, T, {}, {}, p.ground.vector).trace.final_row().overlap_target;
}

TEST(Grid, NextAndCeil) {
  EXPECT_NEAR(grid_next(3.6), 3.7, 1e-12);
  EXPECT_NEAR(grid_next(3.65), 3.7, 1e-12);
  EXPECT_NEAR(grid_next(9.9), 10.0, 1e-12);
  EXPECT_NEAR(grid_next(10.0), 11.0, 1e-12);
  EXPECT_NEAR(grid_next(0.1), 0.11, 1e-14);
  EXPECT_NEAR(grid_next(0.99), 1.0, 1e-14);
  EXPECT_NEAR(grid_ceil(3.6), 3.6, 1e-12);
  EXPECT_NEAR(grid_ceil(3.61), 3.7, 1e-12);
  EXPECT_NEAR(grid_ceil(0.3), 0.3, 1e-14);
  EXPECT_NEAR(grid_ceil(12.8), 13.0, 1e-12);
  EXPECT_THROW((void)grid_next(0.0), UsageError);
}

TEST(Grid, ValuesHaveTwoSignificantFigures) {
  double x = 0.1;
  for (int i = 0; i < 300; ++i) {
    const double next = grid_next(x);
    EXPECT_GT(next, x);
    const double scale = std::pow(10.0, std::floor(std::log10(next * (1 + 1e-12))) - 1);
    EXPECT_NEAR(next / scale, std::round(next / scale), 1e-9);
    x = next;
  }
}

TEST(Initial, DiagonalKeepsOnlyTheDiagonal) {
  const auto p = chain_problem(2.0);
  EXPECT_TRUE(p.initial->upper_triplets().empty());
  const auto d = p.target->diagonal();
  EXPECT_TRUE(std::equal(d.begin(), d.end(), p.initial->diagonal().begin()));
  // reference determinant is the lowest diagonal entry
  const auto it = std::min_element(d.begin(), d.end());
  EXPECT_EQ((*p.basis)[it - d.begin()], hartree_fock_det(2, 2, 4));
}

TEST(Initial, CasciWithAllOrbitalsIsTheTarget) {
  const auto p = chain_problem(2.0);
  const auto h = make_initial(*p.target, {InitialHamiltonianSpec::Kind::casci_block, {0, 1, 2, 3}},
                              hartree_fock_det(2, 2, 4));
  const auto a = h.upper_triplets();
  const auto b = p.target->upper_triplets();
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].row, b[i].row);
    EXPECT_EQ(a[i].col, b[i].col);
    EXPECT_EQ(a[i].value, b[i].value);
  }
}

TEST(Initial, CasciBlockMatchesRestrictedDenseTarget) {
  std::mt19937_64 rng(11);
  const auto table = oracle::random_table(6, 2, 2, rng);
  const auto dets = full_space(2, 2, 6);
  const auto basis = std::make_shared<const Basis>(dets);
  const auto target = assemble(basis, table);
  const std::vector<int> active{0, 1, 2, 4};
  const auto h = make_initial(target, {InitialHamiltonianSpec::Kind::casci_block, active},
                              hartree_fock_det(2, 2, 6));
  const Bits mask = 0b10111;
  const auto dense = oracle::dense_hamiltonian(dets, table);
  const auto n = static_cast<Eigen::Index>(dets.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    const bool in_i = ((dets[i].alpha | dets[i].beta) & ~mask) == 0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const bool in_j = ((dets[j].alpha | dets[j].beta) & ~mask) == 0;
      const double want = (i == j || (in_i && in_j)) ? dense(i, j) : 0.0;
      EXPECT_NEAR(h.value(i, j), want, 1e-12) << i << "," << j;
    }
  }
}

TEST(Initial, CasciRejectsBadInput) {
  const auto p = chain_problem(1.0);
  const auto ref = hartree_fock_det(2, 2, 4);
  EXPECT_THROW((void)make_initial(*p.target, {InitialHamiltonianSpec::Kind::casci_block, {0, 2, 3}}, ref),
               UsageError);
  const DiagonalOperator diag(p.basis, std::vector<double>(p.basis->size(), 0.0));
  EXPECT_THROW((void)make_initial(diag, {InitialHamiltonianSpec::Kind::casci_block, {0, 1, 2}}, ref),
               UsageError);
  EXPECT_THROW((void)parse_initial_kind("casci"), ConfigError);
  EXPECT_EQ(parse_initial_kind("casci_block"), InitialHamiltonianSpec::Kind::casci_block);
}

TEST(CriticalTime, AlreadyPreparedGivesDt) {
  const auto p = chain_problem(2.0);
  const InterpolatedPair pair(p.target, p.target);
  std::vector<cplx> psi0(p.ground.vector.begin(), p.ground.vector.end());
  const auto r = critical_time(pair, psi0, {}, p.ground, {});
  EXPECT_DOUBLE_EQ(r.t_critical, 0.1);
  EXPECT_EQ(r.evaluations.size(), 1U);
  EXPECT_NEAR(r.initial_overlap, 1.0, 1e-12);
}

TEST(CriticalTime, MatchesLinearGridScan) {
  const auto p = chain_problem(2.0);
  const InterpolatedPair pair(p.initial, p.target);
  CriticalTimeConfig cfg;
  const auto r = critical_time(pair, p.psi0, {}, p.ground, cfg);

  double scan = 0.1;
  while (overlap_at(p, scan) < cfg.overlap_threshold) scan = grid_next(scan);
  EXPECT_NEAR(r.t_critical, scan, 1e-12);
  EXPECT_GE(r.value, cfg.overlap_threshold);
  EXPECT_NEAR(r.value, overlap_at(p, r.t_critical), 1e-12);
  const auto ref = std::find(p.psi0.begin(), p.psi0.end(), cplx(1.0)) - p.psi0.begin();
  EXPECT_NEAR(r.initial_overlap, p.ground.vector[ref] * p.ground.vector[ref], 1e-14);

  // final gap trace covers s = 0 .. 1 and its minimum is a sampled gap
  ASSERT_FALSE(r.final_trace.rows.empty());
  EXPECT_EQ(r.final_trace.rows.back().s, 1.0);
  EXPECT_GT(r.min_gap, 0.0);
  double lowest = r.final_trace.initial.gap;
  for (const auto& row : r.final_trace.rows) lowest = std::min(lowest, row.gap);
  EXPECT_EQ(r.min_gap, lowest);

  const auto j = r.to_json();
  EXPECT_EQ(j.at("criterion"), "overlap");
  EXPECT_EQ(j.at("evaluations").size(), r.evaluations.size());
}

TEST(CriticalTime, EnergyCriterion) {
  const auto p = chain_problem(2.0);
  const InterpolatedPair pair(p.initial, p.target);
  CriticalTimeConfig cfg;
  cfg.criterion = Criterion::energy;
  cfg.final_trace.eigen_stride = 0;
  const auto r = critical_time(pair, p.psi0, {}, p.ground, cfg);
  EXPECT_LE(r.value, cfg.energy_threshold);
  EXPECT_GE(r.value, -1e-12);  // variational
  EXPECT_TRUE(std::isnan(r.min_gap));
}

TEST(CriticalTime, UnreachableCarriesBestValue) {
  const auto p = chain_problem(2.0);
  const InterpolatedPair pair(p.initial, p.target);
  CriticalTimeConfig cfg;
  cfg.overlap_threshold = 0.999999;
  cfg.t_cap = 0.4;
  try {
    (void)critical_time(pair, p.psi0, {}, p.ground, cfg);
    FAIL() << "expected CriterionUnreachable";
  } catch (const CriterionUnreachable& e) {
    EXPECT_GT(e.best_value(), 0.0);
    EXPECT_LT(e.best_value(), cfg.overlap_threshold);
  }
}

TEST(CriticalTime, ConfigValidation) {
  CriticalTimeConfig cfg;
  cfg.overlap_threshold = 1.5;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.t_cap = 0.01;
  EXPECT_THROW(cfg.validate(), ConfigError);
  EXPECT_THROW((void)parse_criterion("fidelity"), ConfigError);
}

}  // namespace
}  // namespace aspsim
