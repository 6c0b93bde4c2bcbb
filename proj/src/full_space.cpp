// Copyright 2026 The aspsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "aspsim/full_space.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "aspsim/errors.hpp"

namespace aspsim {

StringSpace::StringSpace(int n_orb, int n_elec) : n_orb_(n_orb), n_elec_(n_elec) {
  const auto dets = full_space(n_elec, 0, n_orb);
  strings_.reserve(dets.size());
  for (const auto& d : dets) strings_.push_back(d.alpha);
}

std::uint32_t StringSpace::rank(Bits s) const {
  // Ascending numeric order of fixed-popcount strings: sum_k C(p_k, k + 1).
  std::uint64_t r = 0;
  int k = 0;
  for_each_bit(s, [&](int p) { r += binomial(p, ++k); });
  return static_cast<std::uint32_t>(r);
}

namespace {

// Same-spin Hamiltonian over strings, one row per target string.
void string_hamiltonian(const StringSpace& space, const IntegralTable& t, bool alpha,
                        std::vector<std::uint64_t>& ptr, auto& entries) {
  IntegralTable same(t.n_orb(), alpha ? t.n_alpha() : t.n_beta(), 0);
  if (alpha) same.set_e_core(t.e_core());  // counted once, with the alpha part
  for (int p = 0; p < t.n_orb(); ++p)
    for (int q = 0; q <= p; ++q) same.set_h(p, q, t.h(p, q));
  // Only the same-spin pieces are used, so sharing the ERIs is enough.
  const int n = t.n_orb();
  for (int p = 0; p < n; ++p)
    for (int q = 0; q <= p; ++q)
      for (int r = 0; r <= p; ++r)
        for (int s = 0; s <= (r == p ? q : r); ++s) {
          const double v = t.v(p, q, r, s);
          if (v != 0.0) same.set_v(p, q, r, s, v);
        }

  ptr.assign(space.size() + 1, 0);
  std::vector<std::vector<std::pair<std::uint32_t, double>>> rows(space.size());
  const auto m = static_cast<std::int64_t>(space.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t ii = 0; ii < m; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    const Determinant d{space[i], 0};
    auto& row = rows[i];
    row.emplace_back(static_cast<std::uint32_t>(i), diagonal_element(d, same));
    for_each_connection(d, same, kDropTolerance, [&](const Determinant& c, double v) {
      row.emplace_back(space.rank(c.alpha), v);
    });
    std::sort(row.begin(), row.end());
  }
  for (std::size_t i = 0; i < rows.size(); ++i) ptr[i + 1] = ptr[i] + rows[i].size();
  entries.reserve(ptr.back());
  for (const auto& row : rows)
    for (const auto& [c, v] : row) entries.push_back({c, v});
}

}  // namespace

FullSpaceHamiltonian::FullSpaceHamiltonian(const IntegralTable& t)
    : n_orb_(t.n_orb()), alpha_(t.n_orb(), t.n_alpha()), beta_(t.n_orb(), t.n_beta()) {
  const std::size_t na = alpha_.size();
  const std::size_t nb = beta_.size();
  if (na * nb > std::numeric_limits<std::uint32_t>::max()) {
    throw UsageError(fmt::format("full space of {} determinants is too large", na * nb));
  }
  const int n = n_orb_;
  const auto n2 = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);

  auto dets = std::make_shared<Basis>();
  dets->reserve(na * nb);
  for (Bits a : alpha_.strings())
    for (Bits b : beta_.strings()) dets->push_back({a, b});
  basis_ = std::move(dets);

  string_hamiltonian(alpha_, t, true, fa_ptr_, fa_);
  string_hamiltonian(beta_, t, false, fb_ptr_, fb_);

  v_.resize(n2 * n2);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s)
          v_[(static_cast<std::size_t>(p) * n + q) * n2 + static_cast<std::size_t>(r) * n + s] =
              t.v(p, q, r, s);

  // E_pq |I> = sign |J>: q occupied, p empty or p == q.
  auto excitations = [&](const StringSpace& space, auto&& emit) {
    for (std::size_t i = 0; i < space.size(); ++i) {
      const Bits s = space[i];
      for_each_bit(s, [&](int q) {
        for (int p = 0; p < n; ++p) {
          if (p != q && occupied(s, p)) continue;
          const Bits j = p == q ? s : (s ^ (Bits{1} << q) ^ (Bits{1} << p));
          emit(static_cast<std::uint32_t>(i), space.rank(j),
               static_cast<std::uint32_t>(p * n + q), static_cast<double>(single_phase(s, q, p)));
        }
      });
    }
  };

  // Alpha links grouped by target.
  std::vector<std::vector<std::tuple<std::uint32_t, std::uint32_t, double>>> by_target(na);
  excitations(alpha_, [&](std::uint32_t from, std::uint32_t to, std::uint32_t pq, double sg) {
    by_target[to].emplace_back(from, pq, sg);
  });
  ea_ptr_.assign(na + 1, 0);
  for (std::size_t j = 0; j < na; ++j) {
    std::sort(by_target[j].begin(), by_target[j].end());
    ea_ptr_[j + 1] = ea_ptr_[j] + by_target[j].size();
    for (const auto& [from, pq, sg] : by_target[j]) {
      ea_from_.push_back(from);
      ea_pq_.push_back(pq);
      ea_sign_.push_back(sg);
    }
  }

  // Beta links grouped by rs.
  std::vector<std::vector<Link>> by_rs(n2);
  excitations(beta_, [&](std::uint32_t from, std::uint32_t to, std::uint32_t rs, double sg) {
    by_rs[rs].push_back({from, to, sg});
  });
  eb_ptr_.assign(n2 + 1, 0);
  for (std::size_t rs = 0; rs < n2; ++rs) {
    eb_ptr_[rs + 1] = eb_ptr_[rs] + by_rs[rs].size();
    eb_.insert(eb_.end(), by_rs[rs].begin(), by_rs[rs].end());
  }

  diag_.resize(na * nb);
  for (std::size_t ia = 0; ia < na; ++ia) {
    double fa = 0.0;
    for (auto k = fa_ptr_[ia]; k < fa_ptr_[ia + 1]; ++k)
      if (fa_[k].col == ia) fa = fa_[k].value;
    for (std::size_t ib = 0; ib < nb; ++ib) {
      double e = fa;
      for (auto k = fb_ptr_[ib]; k < fb_ptr_[ib + 1]; ++k)
        if (fb_[k].col == ib) e += fb_[k].value;
      for_each_bit(alpha_[ia], [&](int i) {
        for_each_bit(beta_[ib], [&](int j) { e += t.v(i, i, j, j); });
      });
      diag_[ia * nb + ib] = e;
    }
  }
}

template <class T>
void FullSpaceHamiltonian::apply_impl(std::span<const T> x, std::span<T> y) const {
  if (x.size() != dim() || y.size() != dim()) {
    throw UsageError(fmt::format("operator of dimension {} applied to vectors of size {} -> {}",
                                 dim(), x.size(), y.size()));
  }
  const std::size_t nb = beta_.size();
  const auto na = static_cast<std::int64_t>(alpha_.size());
  const std::size_t n2 = static_cast<std::size_t>(n_orb_) * static_cast<std::size_t>(n_orb_);

  // Each target alpha row is owned by one thread, so the result does not
  // depend on the thread count.
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t jj = 0; jj < na; ++jj) {
    const auto ja = static_cast<std::size_t>(jj);
    T* out = y.data() + ja * nb;
    std::fill(out, out + nb, T{});

    // alpha-alpha: sum_Ia F_a[Ja, Ia] C[Ia, :]
    for (auto k = fa_ptr_[ja]; k < fa_ptr_[ja + 1]; ++k) {
      const T* in = x.data() + static_cast<std::size_t>(fa_[k].col) * nb;
      const double v = fa_[k].value;
      for (std::size_t ib = 0; ib < nb; ++ib) out[ib] += v * in[ib];
    }
    // beta-beta: sum_Ib F_b[Jb, Ib] C[Ja, Ib]
    const T* own = x.data() + ja * nb;
    for (std::size_t jb = 0; jb < nb; ++jb) {
      T acc{};
      for (auto k = fb_ptr_[jb]; k < fb_ptr_[jb + 1]; ++k) acc += fb_[k].value * own[fb_[k].col];
      out[jb] += acc;
    }
    // alpha-beta
    for (auto k = ea_ptr_[ja]; k < ea_ptr_[ja + 1]; ++k) {
      const T* in = x.data() + static_cast<std::size_t>(ea_from_[k]) * nb;
      const double sa = ea_sign_[k];
      const double* vrow = v_.data() + static_cast<std::size_t>(ea_pq_[k]) * n2;
      for (std::size_t rs = 0; rs < n2; ++rs) {
        const double v = sa * vrow[rs];
        if (v == 0.0 || std::abs(v) < kDropTolerance) continue;
        for (auto l = eb_ptr_[rs]; l < eb_ptr_[rs + 1]; ++l) {
          const Link& e = eb_[l];
          out[e.to] += (v * e.sign) * in[e.from];
        }
      }
    }
  }
}

void FullSpaceHamiltonian::apply(std::span<const double> x, std::span<double> y) const {
  apply_impl(x, y);
}

void FullSpaceHamiltonian::apply(std::span<const cplx> x, std::span<cplx> y) const {
  apply_impl(x, y);
}

}  // namespace aspsim
