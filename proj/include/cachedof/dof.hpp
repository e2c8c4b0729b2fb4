// Copyright 2026 The cachedof Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "cachedof/rational.hpp"

#include <string>

namespace cachedof {

enum class DofSource { AchievableClosedForm, AchievableConstructed, UpperClosedForm, UpperLp, Baseline };

std::string to_string(DofSource s);

/// Per-user DoF at a cache size, stored as 1/d.
struct DofPoint {
  Rational mu;
  Rational inv_d;
  DofSource source = DofSource::AchievableClosedForm;

  Rational d() const { return 1 / inv_d; }
};

}  // namespace cachedof
