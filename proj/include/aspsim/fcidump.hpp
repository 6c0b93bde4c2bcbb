// Copyright 2026 The aspsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iosfwd>

#include "aspsim/integrals.hpp"

namespace aspsim {

/**
 * Reads a Molpro-convention FCIDUMP (1-indexed, chemist notation).
 *
 * Header: namelist `&FCI NORB=..,NELEC=..,MS2=.., ... &END` (or `/`).
 * Body lines `value i j k l`: `i j 0 0` is h_ij, `0 0 0 0` the core energy,
 * `i 0 0 0` an orbital energy (ignored), anything else (ij|kl).
 * Unlisted integrals are zero. ORBSYM/ISYM are accepted and discarded.
 *
 * Throws ParseError naming the offending line for malformed headers,
 * non-integer or out-of-range indices, and contradictory duplicates.
 */
[[nodiscard]] IntegralTable read_fcidump(std::istream& in);
[[nodiscard]] IntegralTable read_fcidump(const std::filesystem::path& path);

/// Writes every nonzero symmetry-unique integral with 17 significant digits.
void write_fcidump(std::ostream& out, const IntegralTable& table);
void write_fcidump(const std::filesystem::path& path, const IntegralTable& table);

}  // namespace aspsim
