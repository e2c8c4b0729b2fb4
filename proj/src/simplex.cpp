// Copyright 2026 The cachedof Authors
// SPDX-License-Identifier: Apache-2.0

#include "cachedof/simplex.hpp"

#include <stdexcept>

namespace cachedof {

LpResult maximize(const std::vector<std::vector<Rational>>& a, const std::vector<Rational>& b,
                  const std::vector<Rational>& c) {
  const std::size_t m = a.size();
  const std::size_t n = c.size();
  if (b.size() != m) throw std::invalid_argument("constraint and bound counts differ");
  for (const auto& row : a) {
    if (row.size() != n) throw std::invalid_argument("constraint row has wrong length");
  }
  for (const auto& v : b) {
    if (v < 0) throw std::invalid_argument("negative right-hand side: origin infeasible");
  }

  // Columns 0..n-1 structural, n..n+m-1 slack, last column the bound.
  const std::size_t width = n + m + 1;
  std::vector<std::vector<Rational>> tab(m, std::vector<Rational>(width, Rational(0)));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) tab[i][j] = a[i][j];
    tab[i][n + i] = 1;
    tab[i][width - 1] = b[i];
  }
  std::vector<Rational> reduced(width, Rational(0));  // c_j - z_j, last entry -objective
  for (std::size_t j = 0; j < n; ++j) reduced[j] = c[j];
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

  LpResult out;
  while (true) {
    std::size_t enter = width;
    for (std::size_t j = 0; j + 1 < width; ++j) {
      if (reduced[j] > 0) {
        enter = j;
        break;
      }
    }
    if (enter == width) break;

    std::size_t leave = m;
    Rational best;
    for (std::size_t i = 0; i < m; ++i) {
      if (tab[i][enter] <= 0) continue;
      const Rational ratio = tab[i][width - 1] / tab[i][enter];
      if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == m) {
      out.status = LpResult::Unbounded;
      return out;
    }

    const Rational piv = tab[leave][enter];
    for (auto& v : tab[leave]) v /= piv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == leave || tab[i][enter] == 0) continue;
      const Rational f = tab[i][enter];
      for (std::size_t j = 0; j < width; ++j) tab[i][j] -= f * tab[leave][j];
    }
    if (reduced[enter] != 0) {
      const Rational f = reduced[enter];
      for (std::size_t j = 0; j < width; ++j) reduced[j] -= f * tab[leave][j];
    }
    basis[leave] = enter;
  }

  out.status = LpResult::Optimal;
  out.value = -reduced[width - 1];
  out.x.assign(n, Rational(0));
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] < n) out.x[basis[i]] = tab[i][width - 1];
  }
  return out;
}

}  // namespace cachedof
