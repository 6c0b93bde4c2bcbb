// Copyright 2026 The aspsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "aspsim/schedule.hpp"

#include <cmath>

#include <fmt/format.h>

#include "aspsim/errors.hpp"

namespace aspsim {

double schedule_value(const Schedule& schedule, double s) {
  if (!(s >= 0.0 && s <= 1.0)) throw UsageError(fmt::format("schedule fraction {} outside [0, 1]", s));
  if (schedule.kind == Schedule::Kind::linear) return s;
  if (!(schedule.c > 0.0 && schedule.c <= 1.0)) {
    throw ConfigError(fmt::format("schedule exponent c = {} outside (0, 1]", schedule.c));
  }
  // c = 1 must coincide bit for bit with the linear schedule.
  if (schedule.c == 1.0 || s == 0.0 || s == 1.0) return s;
  return std::pow(s, schedule.c);
}

std::string to_string(Schedule::Kind kind) {
  return kind == Schedule::Kind::linear ? "linear" : "polynomial";
}

Schedule::Kind parse_schedule_kind(const std::string& name) {
  if (name == "linear") return Schedule::Kind::linear;
  if (name == "polynomial") return Schedule::Kind::polynomial;
  throw ConfigError("unknown schedule kind '" + name + "' (expected linear or polynomial)");
}

}  // namespace aspsim
