// Copyright 2026 The aspsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

namespace aspsim {

/// Interpolation schedule f(s) = s^c for the mixing H(s) = (1 - f) H_init + f H_target.
struct Schedule {
  enum class Kind { linear, polynomial };
  Kind kind = Kind::linear;
  double c = 1.0;  ///< exponent, polynomial only, 0 < c <= 1
};

/// f(s); exact at both endpoints. Throws ConfigError for c outside (0, 1]
/// and UsageError for s outside [0, 1].
[[nodiscard]] double schedule_value(const Schedule& schedule, double s);

[[nodiscard]] std::string to_string(Schedule::Kind kind);
/// "linear" or "polynomial"; throws ConfigError otherwise.
[[nodiscard]] Schedule::Kind parse_schedule_kind(const std::string& name);

}  // namespace aspsim
