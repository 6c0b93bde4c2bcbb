// Copyright 2026 The aspsim Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "aspsim/determinant.hpp"
#include "aspsim/errors.hpp"
#include "oracle.hpp"

namespace aspsim {
namespace {

Determinant det(const char* a, const char* b) {
  return Determinant{std::stoull(a, nullptr, 2), std::stoull(b, nullptr, 2)};
}

TEST(Excitation, IdentityIsDegreeZero) {
  const auto d = det("0011", "0101");
  const auto ex = excitation_info(d, d);
  EXPECT_EQ(ex.degree, 0);
  EXPECT_EQ(ex.alpha.count, 0);
  EXPECT_EQ(ex.beta.count, 0);
  EXPECT_EQ(ex.phase, 1);
}

TEST(Excitation, SingleAlpha) {
  const auto ex = excitation_info(det("0011", "0011"), det("0101", "0011"));
  EXPECT_EQ(ex.degree, 1);
  EXPECT_EQ(ex.alpha.holes[0], 1);
  EXPECT_EQ(ex.alpha.particles[0], 2);
  EXPECT_EQ(ex.phase, 1);
}

TEST(Excitation, DoubleAlphaPhaseMatchesOperatorAlgebra) {
  const auto from = det("0011", "0000");
  const auto to = det("1100", "0000");
  const auto ex = excitation_info(from, to);
  EXPECT_EQ(ex.degree, 2);
  EXPECT_EQ(ex.alpha.holes[0], 0);
  EXPECT_EQ(ex.alpha.holes[1], 1);
  EXPECT_EQ(ex.alpha.particles[0], 2);
  EXPECT_EQ(ex.alpha.particles[1], 3);
  // a+_3 a_1 a+_2 a_0 |0011>: first step crosses orbital 1 (-1), second step
  // moves 1 -> 3 across occupied 2 (-1).
  oracle::Fock s{from.alpha, 1};
  s = *oracle::annihilate(s, 0);
  s = *oracle::create(s, 2);
  s = *oracle::annihilate(s, 1);
  s = *oracle::create(s, 3);
  EXPECT_EQ(s.bits, to.alpha);
  EXPECT_EQ(ex.phase, s.sign);
  EXPECT_EQ(ex.phase, 1);
}

TEST(Excitation, HighDegreeCollapses) {
  const auto ex = excitation_info(det("000111", "000111"), det("111000", "000111"));
  EXPECT_EQ(ex.degree, ExcitationInfo::kHigh);
}

TEST(Excitation, SectorMismatchThrows) {
  EXPECT_THROW((void)excitation_info(det("0011", "0001"), det("0001", "0011")), UsageError);
}

// Every pair of determinants with degree <= 2 in a 5-orbital space: the
// phase of the sequential rule equals the sign produced by applying the
// excitation operators in the same order.
TEST(Excitation, PhaseMatchesBruteForceOperators) {
  const int n = 5;
  for (auto [na, nb] : {std::pair{2, 2}, std::pair{3, 1}, std::pair{2, 3}}) {
    const auto space = full_space(na, nb, n);
    for (const auto& a : space) {
      for (const auto& b : space) {
        const auto ex = excitation_info(a, b);
        ASSERT_EQ(ex.degree, std::min(excitation_degree(a, b), ExcitationInfo::kHigh));
        if (ex.degree > 2 || ex.degree == 0) continue;
        oracle::Fock s{oracle::to_fock(a, n), 1};
        auto apply = [&](const SpinExcitation& e, int offset) {
          for (int k = 0; k < e.count; ++k) {
            s = *oracle::annihilate(s, e.holes[static_cast<std::size_t>(k)] + offset);
            s = *oracle::create(s, e.particles[static_cast<std::size_t>(k)] + offset);
          }
        };
        apply(ex.alpha, 0);
        apply(ex.beta, n);
        ASSERT_EQ(s.bits, oracle::to_fock(b, n));
        // Within one spin the sequential phase uses the intermediate string;
        // alpha-then-beta ordering adds no sign for number-conserving pairs.
        EXPECT_EQ(ex.phase, s.sign) << to_string(a, n) << " -> " << to_string(b, n);
        EXPECT_EQ(ex.phase, excitation_info(b, a).phase);
        EXPECT_EQ(ex.degree, excitation_info(b, a).degree);
      }
    }
  }
}

TEST(Connected, OneElectronTwoOrbitals) {
  const auto c = generate_connected(det("01", "00"), 2);
  ASSERT_EQ(c.size(), 1U);
  EXPECT_EQ(c[0], det("10", "00"));
}

TEST(Connected, TwoSiteHalfFilling) {
  const auto c = generate_connected(det("01", "01"), 2);
  const std::vector<Determinant> want{det("01", "10"), det("10", "01"), det("10", "10")};
  EXPECT_EQ(c, want);
}

TEST(Connected, MatchesDegreeFilterOverFullSpace) {
  std::mt19937_64 rng(7);
  for (int n = 2; n <= 6; ++n) {
    for (int na = 0; na <= n; ++na) {
      for (int nb = 0; nb <= n; ++nb) {
        const auto space = full_space(na, nb, n);
        const auto& d = space[rng() % space.size()];
        std::vector<Determinant> want;
        for (const auto& e : space)
          if (e != d && excitation_degree(d, e) <= 2) want.push_back(e);
        EXPECT_EQ(generate_connected(d, n), want) << n << " " << na << " " << nb;
      }
    }
  }
}

TEST(Connected, HartreeFockTwoTwoFour) {
  const auto hf = hartree_fock_det(2, 2, 4);
  const auto space = full_space(2, 2, 4);
  ASSERT_EQ(space.size(), 36U);
  const auto c = generate_connected(hf, 4);
  const auto count = std::count_if(space.begin(), space.end(), [&](const Determinant& e) {
    return e != hf && excitation_degree(hf, e) <= 2;
  });
  EXPECT_EQ(static_cast<long>(c.size()), count);
  EXPECT_EQ(c.size(), 8U + 2U + 16U);
}

TEST(Connected, ConservesParticleNumbers) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 8);
    const int na = static_cast<int>(rng() % (n + 1));
    const int nb = static_cast<int>(rng() % (n + 1));
    auto space = full_space(na, nb, n);
    const auto& d = space[rng() % space.size()];
    for (const auto& c : generate_connected(d, n)) {
      ASSERT_EQ(popcount(c.alpha), na);
      ASSERT_EQ(popcount(c.beta), nb);
      ASSERT_EQ(c.alpha & ~low_mask(n), 0U);
      ASSERT_EQ(c.beta & ~low_mask(n), 0U);
    }
  }
}

TEST(HartreeFock, Definition) {
  EXPECT_EQ(hartree_fock_det(2, 2, 6), det("000011", "000011"));
  EXPECT_EQ(hartree_fock_det(0, 0, 4), det("0", "0"));
  EXPECT_EQ(hartree_fock_det(1, 0, 2), det("01", "00"));
  EXPECT_THROW((void)hartree_fock_det(3, 0, 2), UsageError);
}

TEST(FullSpace, SizeAndOrder) {
  const auto s = full_space(2, 1, 5);
  EXPECT_EQ(s.size(), full_space_size(2, 1, 5));
  EXPECT_EQ(s.size(), 50U);
  EXPECT_TRUE(std::is_sorted(s.begin(), s.end()));
  EXPECT_EQ(binomial(19, 2), 171U);
  EXPECT_EQ(full_space_size(2, 2, 19), 29241U);
}

TEST(TextForm, RoundTrip) {
  const auto d = det("0011", "0101");
  EXPECT_EQ(to_string(d, 4), "a:0011|b:0101");
  EXPECT_EQ(parse_determinant("a:0011|b:0101"), d);
  EXPECT_THROW((void)parse_determinant("a:0011|b:01"), ParseError);
  EXPECT_THROW((void)parse_determinant("x:0011|b:0101"), ParseError);
}

TEST(Bits, Helpers) {
  EXPECT_EQ(between_mask(1, 4), 0b01100U);
  EXPECT_EQ(between_mask(4, 1), 0b01100U);
  EXPECT_EQ(between_mask(2, 3), 0U);
  EXPECT_EQ(single_phase(0b0111, 0, 3), 1);
  EXPECT_EQ(single_phase(0b0011, 0, 3), -1);
  EXPECT_EQ(low_mask(64), ~Bits{0});
  EXPECT_EQ(occupied_orbitals(0b1010), (std::vector<int>{1, 3}));
}

}  // namespace
}  // namespace aspsim
