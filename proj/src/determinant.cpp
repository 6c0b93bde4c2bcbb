// Copyright 2026 The aspsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "aspsim/determinant.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "aspsim/errors.hpp"

namespace aspsim {

std::vector<int> occupied_orbitals(Bits b) {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(popcount(b)));
  for_each_bit(b, [&](int p) { out.push_back(p); });
  return out;
}

namespace {

SpinExcitation spin_excitation(Bits from, Bits to) {
  SpinExcitation ex;
  const Bits holes = from & ~to;
  const Bits parts = to & ~from;
  ex.count = popcount(holes);
  if (ex.count > 2) return ex;
  int i = 0;
  for_each_bit(holes, [&](int p) { ex.holes[i++] = p; });
  i = 0;
  for_each_bit(parts, [&](int p) { ex.particles[i++] = p; });
  return ex;
}

// Applies the excitations of `ex` in order to `occ`, accumulating the sign.
int apply_sequential(Bits& occ, const SpinExcitation& ex) {
  int phase = 1;
  for (int k = 0; k < ex.count; ++k) {
    const int h = ex.holes[k];
    const int p = ex.particles[k];
    phase *= single_phase(occ, h, p);
    occ ^= (Bits{1} << h) | (Bits{1} << p);
  }
  return phase;
}

}  // namespace

ExcitationInfo excitation_info(const Determinant& from, const Determinant& to) {
  if (popcount(from.alpha) != popcount(to.alpha) || popcount(from.beta) != popcount(to.beta)) {
    throw UsageError("excitation_info: determinants belong to different particle sectors");
  }
  ExcitationInfo info;
  info.degree = excitation_degree(from, to);
  if (info.degree > 2) {
    info.degree = ExcitationInfo::kHigh;
    return info;
  }
  info.alpha = spin_excitation(from.alpha, to.alpha);
  info.beta = spin_excitation(from.beta, to.beta);
  Bits a = from.alpha;
  Bits b = from.beta;
  // Alpha operators never pass beta ones in the canonical order, so each
  // channel contributes its own sign independently.
  info.phase = apply_sequential(a, info.alpha) * apply_sequential(b, info.beta);
  return info;
}

Determinant hartree_fock_det(int n_alpha, int n_beta, int n_orb) {
  if (n_orb < 0 || n_orb > kMaxOrbitals) {
    throw UsageError(fmt::format("orbital count {} outside [0, {}]", n_orb, kMaxOrbitals));
  }
  if (n_alpha < 0 || n_beta < 0 || n_alpha > n_orb || n_beta > n_orb) {
    throw UsageError(fmt::format("cannot place {} alpha / {} beta electrons in {} orbitals",
                                 n_alpha, n_beta, n_orb));
  }
  return {low_mask(n_alpha), low_mask(n_beta)};
}

void check_determinant(const Determinant& d, int n_orb) {
  const Bits outside = ~low_mask(n_orb);
  if ((d.alpha & outside) || (d.beta & outside)) {
    throw UsageError(fmt::format("determinant has bits beyond orbital count {}", n_orb));
  }
}

std::vector<Determinant> generate_connected(const Determinant& d, int n_orb) {
  check_determinant(d, n_orb);
  std::vector<Determinant> out;
  for_each_connected(d, n_orb, [&](const Determinant& c) { out.push_back(c); });
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / i;
  return r;
}

std::uint64_t full_space_size(int n_alpha, int n_beta, int n_orb) {
  return binomial(n_orb, n_alpha) * binomial(n_orb, n_beta);
}

namespace {

// All n-bit strings with k bits set, ascending.
std::vector<Bits> strings_with_popcount(int n, int k) {
  std::vector<Bits> out;
  if (k > n) return out;
  if (k == 0) return {Bits{0}};
  Bits s = low_mask(k);
  const Bits limit = low_mask(n);
  while (true) {
    out.push_back(s);
    if (s == (limit & ~low_mask(n - k))) break;
    // Gosper's hack: next integer with the same popcount.
    const Bits c = s & (~s + 1);
    const Bits r = s + c;
    s = (((r ^ s) >> 2) / c) | r;
  }
  return out;
}

}  // namespace

std::vector<Determinant> full_space(int n_alpha, int n_beta, int n_orb) {
  (void)hartree_fock_det(n_alpha, n_beta, n_orb);  // validates counts
  const auto as = strings_with_popcount(n_orb, n_alpha);
  const auto bs = strings_with_popcount(n_orb, n_beta);
  std::vector<Determinant> out;
  out.reserve(as.size() * bs.size());
  for (Bits a : as)
    for (Bits b : bs) out.push_back({a, b});
  return out;
}

std::string to_string(const Determinant& d, int n_orb) {
  std::string s = "a:";
  for (int p = n_orb - 1; p >= 0; --p) s.push_back(occupied(d.alpha, p) ? '1' : '0');
  s += "|b:";
  for (int p = n_orb - 1; p >= 0; --p) s.push_back(occupied(d.beta, p) ? '1' : '0');
  return s;
}

Determinant parse_determinant(std::string_view text) {
  const auto bar = text.find('|');
  if (text.substr(0, 2) != "a:" || bar == std::string_view::npos ||
      text.substr(bar, 3) != "|b:") {
    throw ParseError(fmt::format("bad determinant text '{}'", text), 0);
  }
  auto parse_bits = [&](std::string_view bits) {
    if (bits.size() > static_cast<std::size_t>(kMaxOrbitals)) {
      throw ParseError(fmt::format("determinant text '{}' exceeds {} orbitals", text, kMaxOrbitals), 0);
    }
    Bits b = 0;
    for (char c : bits) {
      if (c != '0' && c != '1') throw ParseError(fmt::format("bad bit in '{}'", text), 0);
      b = (b << 1) | static_cast<Bits>(c == '1');
    }
    return b;
  };
  const auto a = text.substr(2, bar - 2);
  const auto b = text.substr(bar + 3);
  if (a.size() != b.size()) {
    throw ParseError(fmt::format("alpha/beta widths differ in '{}'", text), 0);
  }
  return {parse_bits(a), parse_bits(b)};
}

}  // namespace aspsim
