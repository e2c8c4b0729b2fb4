// Copyright 2026 The cachedof Authors
// SPDX-License-Identifier: Apache-2.0

#include "cachedof/linalg.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cachedof {

namespace {

void require_finite(const Eigen::MatrixXcd& m) {
  if (!m.allFinite()) throw std::invalid_argument("matrix has non-finite entries");
}

// 2^-k with 2^(k-1) <= x < 2^k, so x * scale lands in [1/2, 1).
double pow2_inverse(double x) { return std::ldexp(1.0, -(std::ilogb(x) + 1)); }

}  // namespace

std::vector<double> singular_values(const Eigen::MatrixXcd& m) {
  require_finite(m);
  if (m.size() == 0) return {};
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
  const auto& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

int numeric_rank(const Eigen::MatrixXcd& m, double rel_tol) {
  const auto s = singular_values(m);
  if (s.empty() || s.front() == 0.0) return 0;
  int r = 0;
  for (double v : s) {
    if (v > rel_tol * s.front()) ++r;
  }
  return r;
}

Eigen::MatrixXcd equilibrate(Eigen::MatrixXcd m, int sweeps) {
  require_finite(m);
  for (int s = 0; s < sweeps; ++s) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const double mx = m.row(i).cwiseAbs().maxCoeff();
      if (mx > 0.0) m.row(i) *= pow2_inverse(mx);
    }
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double mx = m.col(j).cwiseAbs().maxCoeff();
      if (mx > 0.0) m.col(j) *= pow2_inverse(mx);
    }
  }
  return m;
}

double condition_number(const Eigen::MatrixXcd& m) {
  const auto s = singular_values(m);
  if (s.empty() || s.back() == 0.0) return std::numeric_limits<double>::infinity();
  return s.front() / s.back();
}

}  // namespace cachedof
