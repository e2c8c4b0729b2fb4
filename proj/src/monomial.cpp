// Copyright 2026 The cachedof Authors
// SPDX-License-Identifier: Apache-2.0

#include "cachedof/monomial.hpp"

#include <algorithm>
#include <stdexcept>

namespace cachedof {

BigInt basis_size(std::size_t g, int n) { return ipow(BigInt(n), static_cast<unsigned>(g)); }

std::vector<ExponentVector> monomial_basis(std::size_t g, int n, std::size_t limit) {
  if (g == 0) throw std::invalid_argument("monomial basis needs at least one generator");
  if (n < 1) throw std::invalid_argument("monomial order n must be at least 1");
  if (basis_size(g, n) > limit) {
    throw std::length_error("monomial basis of size " + basis_size(g, n).str() + " exceeds enumeration limit");
  }
  std::vector<ExponentVector> out;
  ExponentVector e(g, 1);
  while (true) {
    out.push_back(e);
    std::size_t k = g;
    while (k > 0 && e[k - 1] == n) {
      e[k - 1] = 1;
      --k;
    }
    if (k == 0) break;
    ++e[k - 1];
  }
  return out;
}

bool in_range(const ExponentVector& e, int m) {
  return std::all_of(e.begin(), e.end(), [m](int x) { return x >= 1 && x <= m; });
}

}  // namespace cachedof
