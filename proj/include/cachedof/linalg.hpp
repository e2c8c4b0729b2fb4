// Copyright 2026 The cachedof Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <vector>

namespace cachedof {

inline constexpr double kDefaultRankTol = 1e-8;

/// Singular values in decreasing order. Throws on non-finite entries.
std::vector<double> singular_values(const Eigen::MatrixXcd& m);

/// Count of singular values above rel_tol times the largest one.
/// Throws std::invalid_argument on non-finite entries.
int numeric_rank(const Eigen::MatrixXcd& m, double rel_tol = kDefaultRankTol);

/// Alternating row/column scaling by powers of two so every nonzero row and
/// column has max-magnitude in [1/2, 1]. Rank is unchanged.
Eigen::MatrixXcd equilibrate(Eigen::MatrixXcd m, int sweeps = 10);

/// Largest singular value over smallest; infinity when singular.
double condition_number(const Eigen::MatrixXcd& m);

}  // namespace cachedof
