// Copyright 2026 The cachedof Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "cachedof/channel_model.hpp"
#include "cachedof/dof.hpp"
#include "cachedof/linalg.hpp"
#include "cachedof/precoder.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace cachedof {

struct NeutralizationResult {
  /// Max over neutralized and zeroed channels of ||G||_inf / (largest |H*U| term), or
  /// ||G||_inf when every term vanishes.
  double max_residual = 0.0;
  int neutralized_checked = 0;
  int zeroed_checked = 0;
  /// Label of the channel with the largest residual.
  std::string worst;
};

/// Half mode with a focus user; uses the realization's channels and U design.
NeutralizationResult check_neutralization(const SchemeInstance& s, const Realization& r);

/// Neutralization on a fresh channel draw of `n_ext` extensions.
NeutralizationResult check_neutralization(const SchemeInstance& s, std::uint64_t seed, std::size_t n_ext = 8);

struct AlignmentResult {
  bool ok = true;
  int channels_checked = 0;
  /// Interference channels with no matching generator.
  std::vector<std::string> missing;
  std::string message;
};

/// Symbolic: each interference channel must be a generator, so that the
/// received exponent vectors stay inside [n+1]^g. Enumerates columns when the
/// basis is small, otherwise uses the per-coordinate bound.
AlignmentResult check_alignment(const SchemeInstance& s, UserIndex u);

/// A decoding-matrix column as (extra channel factor, exponent vector).
/// `factor` is -1 for interference-space columns.
struct SymbolicColumn {
  int factor = -1;
  ExponentVector exponents;
  auto operator<=>(const SymbolicColumn&) const = default;
};

bool distinct_columns(const std::vector<SymbolicColumn>& cols);

/// Symbolic columns of the focus user's decoding matrix for one phase
/// (quarter) or the single matrix (half).
std::vector<SymbolicColumn> symbolic_columns(const SchemeInstance& s, int phase_index = 0);

/// Pairwise-distinct monomials in every decoding matrix of the focus user.
bool check_distinct_monomials(const SchemeInstance& s, UserIndex u);

struct DecodabilitySample {
  std::uint64_t seed = 0;
  int phase = 0;
  int rank_found = 0;
  int rank_expected = 0;
};

struct DecodabilityResult {
  bool ok = true;
  std::vector<DecodabilitySample> samples;
};

/// Rank of each equilibrated decoding matrix must equal its column count on
/// every seed. Throws std::length_error past the dimension budget.
DecodabilityResult check_decodability(const SchemeInstance& s, const std::vector<std::uint64_t>& seeds,
                                      double rel_tol = kDefaultRankTol);

/// Polynomials whose algebraic independence backs decodability at `focus`:
/// the desired effective polynomial for `group` plus the nonzero interference
/// polynomials from intended users of the focus user's class.
std::vector<Polynomial> jacobian_family(const FactorDesign& ud, UserIndex focus, int group);

struct JacobianResult {
  bool full_row_rank = false;
  int rows = 0;
  int cols = 0;
  int rank = 0;
};

/// Jacobian of `family` at a random point keyed by `point_seed`.
JacobianResult jacobian_independence_check(const std::vector<Polynomial>& family, std::uint64_t point_seed);

struct ZfResult {
  int rank = 0;
  int expected_rank = 0;
  /// max |off-diagonal| / min |diagonal| of H * precoder.
  double crosstalk = 0.0;
  /// max |H * precoder - I| entry.
  double identity_error = 0.0;
  bool ok = false;
};

ZfResult check_zero_forcing(const FullZf& z, double tol = 1e-9);

/// Exact per-user DoF of a constructed scheme at its cache size.
DofPoint dof_account(const SchemeInstance& s);
Rational scheme_dof(SchemeMode mode, std::size_t g, int n);

struct VerificationReport {
  SchemeMode mode = SchemeMode::Quarter;
  int n = 1;
  std::size_t g = 0;
  std::string M, N;
  std::string focus;
  std::vector<std::uint64_t> seeds;
  double neutralization_residual = 0.0;
  bool alignment_ok = true;
  bool distinct_monomials_ok = true;
  std::vector<DecodabilitySample> ranks;
  bool zf_ok = true;
  Rational dof;
  std::vector<std::string> notes;
  bool pass = false;
};

/// Runs every check applicable to the scheme's mode.
VerificationReport verify(const SchemeInstance& s, const std::vector<std::uint64_t>& seeds);

nlohmann::json to_json(const VerificationReport& r);

}  // namespace cachedof
