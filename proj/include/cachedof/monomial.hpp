// Copyright 2026 The cachedof Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "cachedof/rational.hpp"

#include <cstddef>
#include <vector>

namespace cachedof {

/// Exponent of each generator, in generator order. Entries are >= 1.
using ExponentVector = std::vector<int>;

/// Upper bound on explicitly enumerated basis sizes.
inline constexpr std::size_t kBasisLimit = 1u << 20;

/// n^g as an exact integer.
BigInt basis_size(std::size_t g, int n);

/// Every g-tuple over [n], last coordinate varying fastest.
/// Throws std::invalid_argument for g == 0 or n < 1, and std::length_error
/// when n^g exceeds `limit`.
std::vector<ExponentVector> monomial_basis(std::size_t g, int n, std::size_t limit = kBasisLimit);

/// True when every exponent lies in [1, m].
bool in_range(const ExponentVector& e, int m);

}  // namespace cachedof
