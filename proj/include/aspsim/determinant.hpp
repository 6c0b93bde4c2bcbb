// Copyright 2026 The aspsim Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file determinant.hpp
 * @brief Slater determinants as (alpha, beta) occupation bit strings.
 *
 * Bit p of `alpha` is set when alpha spin-orbital p is occupied, likewise for
 * `beta`. Fermionic signs use the canonical spin-orbital order: all alpha
 * orbitals ascending, then all beta orbitals ascending.
 */

#pragma once

#include <array>
#include <bit>
#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace aspsim {

using Bits = std::uint64_t;

/// Spatial orbitals per spin representable by one bit string.
inline constexpr int kMaxOrbitals = 64;

struct Determinant {
  Bits alpha = 0;
  Bits beta = 0;

  /// Canonical ordering: by alpha string, then beta string (as integers).
  constexpr auto operator<=>(const Determinant&) const = default;
};

struct DeterminantHash {
  [[nodiscard]] std::size_t operator()(const Determinant& d) const noexcept {
    // splitmix64 finalizer on a mix of both words
    std::uint64_t x = d.alpha * 0x9e3779b97f4a7c15ULL ^ (d.beta + 0x632be59bd9b4e019ULL);
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return static_cast<std::size_t>(x);
  }
};

[[nodiscard]] constexpr int popcount(Bits b) noexcept { return std::popcount(b); }

[[nodiscard]] constexpr bool occupied(Bits b, int p) noexcept {
  return ((b >> p) & Bits{1}) != 0;
}

/// Mask with the lowest n bits set.
[[nodiscard]] constexpr Bits low_mask(int n) noexcept {
  return n >= 64 ? ~Bits{0} : (Bits{1} << n) - 1;
}

/// Mask of the bits strictly between positions a and b.
[[nodiscard]] constexpr Bits between_mask(int a, int b) noexcept {
  if (a > b) std::swap(a, b);
  if (b - a < 2) return 0;
  return low_mask(b) & ~low_mask(a + 1);
}

/// (-1)^(occupied orbitals of `occ` strictly between h and p).
[[nodiscard]] constexpr int single_phase(Bits occ, int h, int p) noexcept {
  return (popcount(occ & between_mask(h, p)) & 1) ? -1 : 1;
}

/// Ascending list of set bit positions.
[[nodiscard]] std::vector<int> occupied_orbitals(Bits b);

/// Invokes f(p) for every set bit, ascending.
template <class F>
constexpr void for_each_bit(Bits b, F&& f) {
  while (b) {
    f(std::countr_zero(b));
    b &= b - 1;
  }
}

/// Holes and particles of one spin channel; at most two of each.
struct SpinExcitation {
  int count = 0;
  std::array<int, 2> holes{-1, -1};
  std::array<int, 2> particles{-1, -1};
};

struct ExcitationInfo {
  static constexpr int kHigh = 3;

  int degree = 0;  ///< 0, 1, 2, or kHigh for anything above a double
  SpinExcitation alpha;
  SpinExcitation beta;
  int phase = 1;  ///< meaningful only for degree <= 2
};

/**
 * Classifies the excitation taking `from` to `to`.
 *
 * Holes and particles are sorted ascending within each spin. For doubles the
 * phase is the product of two single-excitation phases applied in sequence:
 * holes[0] -> particles[0] on `from`, then holes[1] -> particles[1] on the
 * intermediate determinant (alpha before beta for opposite-spin pairs).
 *
 * Throws UsageError when the particle numbers per spin differ.
 */
[[nodiscard]] ExcitationInfo excitation_info(const Determinant& from, const Determinant& to);

/// Excitation degree only: (|a1^a2| + |b1^b2|) / 2.
[[nodiscard]] constexpr int excitation_degree(const Determinant& d1,
                                              const Determinant& d2) noexcept {
  return (popcount(d1.alpha ^ d2.alpha) + popcount(d1.beta ^ d2.beta)) / 2;
}

/// Lowest n_alpha / n_beta orbitals occupied.
[[nodiscard]] Determinant hartree_fock_det(int n_alpha, int n_beta, int n_orb);

/// Checks the determinant fits within n_orb orbitals; throws UsageError otherwise.
void check_determinant(const Determinant& d, int n_orb);

/**
 * Calls f(const Determinant&) for every single and double excitation of d
 * within n_orb orbitals. Each connected determinant is visited exactly once;
 * d itself is never visited. Order is generation order, not canonical.
 */
template <class F>
void for_each_connected(const Determinant& d, int n_orb, F&& f) {
  const Bits full = low_mask(n_orb);
  const Bits va = full & ~d.alpha;
  const Bits vb = full & ~d.beta;

  auto same_spin = [&](Bits occ, Bits virt, bool is_alpha) {
    for_each_bit(occ, [&](int h) {
      for_each_bit(virt, [&](int p) {
        const Bits s = occ ^ (Bits{1} << h) ^ (Bits{1} << p);
        f(is_alpha ? Determinant{s, d.beta} : Determinant{d.alpha, s});
      });
    });
    for_each_bit(occ, [&](int h1) {
      for_each_bit(occ & ~low_mask(h1 + 1), [&](int h2) {
        for_each_bit(virt, [&](int p1) {
          for_each_bit(virt & ~low_mask(p1 + 1), [&](int p2) {
            const Bits s = occ ^ (Bits{1} << h1) ^ (Bits{1} << h2) ^ (Bits{1} << p1) ^
                           (Bits{1} << p2);
            f(is_alpha ? Determinant{s, d.beta} : Determinant{d.alpha, s});
          });
        });
      });
    });
  };
  same_spin(d.alpha, va, true);
  same_spin(d.beta, vb, false);

  for_each_bit(d.alpha, [&](int ha) {
    for_each_bit(va, [&](int pa) {
      const Bits a = d.alpha ^ (Bits{1} << ha) ^ (Bits{1} << pa);
      for_each_bit(d.beta, [&](int hb) {
        for_each_bit(vb, [&](int pb) {
          f(Determinant{a, d.beta ^ (Bits{1} << hb) ^ (Bits{1} << pb)});
        });
      });
    });
  });
}

/// All singles and doubles of d, sorted canonically.
[[nodiscard]] std::vector<Determinant> generate_connected(const Determinant& d, int n_orb);

/// Every determinant with the given particle numbers, sorted canonically.
[[nodiscard]] std::vector<Determinant> full_space(int n_alpha, int n_beta, int n_orb);

/// Number of determinants in the full space, C(n_orb, n_alpha) * C(n_orb, n_beta).
[[nodiscard]] std::uint64_t full_space_size(int n_alpha, int n_beta, int n_orb);

[[nodiscard]] std::uint64_t binomial(int n, int k);

/// Text form "a:<binary>|b:<binary>", most significant orbital on the left.
[[nodiscard]] std::string to_string(const Determinant& d, int n_orb);

/// Inverse of to_string; the orbital count is taken from the string width.
[[nodiscard]] Determinant parse_determinant(std::string_view text);

}  // namespace aspsim

template <>
struct std::hash<aspsim::Determinant> : aspsim::DeterminantHash {};
