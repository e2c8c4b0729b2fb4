// Copyright 2026 The cachedof Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "cachedof/rational.hpp"

#include <vector>

namespace cachedof {

struct LpResult {
  enum Status { Optimal, Unbounded };
  Status status = Optimal;
  Rational value;
  std::vector<Rational> x;
};

/// maximize c.x subject to A x <= b, x >= 0, in exact arithmetic with
/// Bland's pivoting rule. Requires b >= 0 so the origin is a starting vertex;
/// throws std::invalid_argument otherwise or on shape mismatch.
LpResult maximize(const std::vector<std::vector<Rational>>& a, const std::vector<Rational>& b,
                  const std::vector<Rational>& c);

}  // namespace cachedof
