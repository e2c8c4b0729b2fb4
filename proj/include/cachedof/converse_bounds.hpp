// Copyright 2026 The cachedof Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "cachedof/cache_placement.hpp"
#include "cachedof/channel_model.hpp"
#include "cachedof/dof.hpp"
#include "cachedof/grid_topology.hpp"
#include "cachedof/rational.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cachedof {

/// Equal-size user and BS sets with a full-rank cross channel, plus the
/// users outside R that still hear some BS of T.
struct RtPair {
  std::vector<UserIndex> r;
  std::vector<BsIndex> t;
  std::vector<UserIndex> overhearing;
};

enum class RankTest { Numeric, Structural };

std::vector<UserIndex> overhearing_users(const Topology& topo, const std::vector<UserIndex>& r, const std::vector<BsIndex>& t);

/// Maximum matching size between R and T over the edge set (generic rank).
int structural_rank(const Topology& topo, const std::vector<UserIndex>& r, const std::vector<BsIndex>& t);

/// All pairs with |R| = |T| <= max_size passing the rank test. Numeric tests
/// use extension 0 of `cs`. Order: by size, then R, then T lexicographically.
std::vector<RtPair> enumerate_rt_pairs(const Topology& topo, const ChannelSet& cs, int max_size,
                                       RankTest test = RankTest::Numeric);

/// Rational-coefficient constraint sum coeffs[v] * v <= rhs.
struct Inequality {
  std::map<std::string, Rational> coeffs;
  Rational rhs;
  bool operator==(const Inequality&) const = default;
};

/// Rescales so the right-hand side is 1 (rhs must be positive).
Inequality normalized(const Inequality& q);

/// "d_{user,label}"
std::string dof_var(const Topology& topo, UserIndex u, const CacheGroup& g);

/// One inequality per pair: every group for users in R, plus groups inside T
/// for overhearing users; rhs |R|.
std::vector<Inequality> region_inequalities(const Topology& topo, const Placement& p, const std::vector<RtPair>& s);

/// Drops inequalities implied by the remaining ones over the nonnegative
/// orthant (exact LP per row), and duplicates up to positive scaling.
std::vector<Inequality> remove_redundant(const std::vector<Inequality>& ineqs);

/// max sum w.x over {x >= 0 : ineqs}; empty optional when unbounded.
std::optional<Rational> lp_max(const std::vector<Inequality>& ineqs, const std::map<std::string, Rational>& w);

nlohmann::json region_to_json(const std::vector<Inequality>& ineqs);

struct CandidateSet {
  std::vector<int> classes;  // B-classes in the union
  std::vector<BsIndex> bss;
};

/// Singles, pairwise unions, complements of one class, and all BSs (15 sets).
std::vector<CandidateSet> candidate_sets(const Topology& grid);

/// Overhearing users per user of R for a candidate, with R the union of the first |classes|
/// user classes. Throws std::runtime_error if that R fails the rank test.
Rational overhear_ratio(const Topology& grid, const CandidateSet& c, const ChannelSet* cs = nullptr);

/// Sum of fractions of groups inside the BS set.
Rational fraction_within(const Placement& p, const std::vector<BsIndex>& t, int num_bss);

/// Symmetric split-variable system for a cache size.
struct SymmetricSystem {
  Rational mu;
  Rational low_weight;  // weight of low_mode
  PlacementMode low_mode = PlacementMode::Quarter;
  PlacementMode high_mode = PlacementMode::Half;
  std::vector<Inequality> rows;  // over variables split_var(low_mode), split_var(high_mode)
};

/// "d_quarter", "d_half", "d_full"
std::string split_var(PlacementMode m);

/// Coefficient of each split variable per candidate set: 1 + ratio * (fraction
/// of that placement inside the set). Uses a 4x4 wrapping grid unless one is given.
/// Throws std::invalid_argument for mu outside [1/4, 1].
SymmetricSystem memory_sharing_inequalities(const Rational& mu, const Topology* grid = nullptr);

/// max d_low + d_high under the rows and d_low (1 - low_weight) = d_high low_weight.
/// Throws std::runtime_error when unbounded.
Rational solve_symmetric_dof(const SymmetricSystem& sys);

DofPoint closed_form_lower(const Rational& mu);
DofPoint closed_form_upper(const Rational& mu);
DofPoint baseline_dof(const Rational& mu);
/// d_upper - d_lower
Rational gap(const Rational& mu);

/// Cut weight of one BS set for a symmetric placement: (|N(T)| - |T|)/|T| times
/// the fraction of files cached entirely inside T, or empty when no R of
/// size |T| exists (structural test).
std::optional<Rational> cut_weight(const Topology& grid, const Placement& p, const std::vector<BsIndex>& t);

struct CandidateOracleReport {
  Rational candidate_max;   // best weight over the 15 candidates
  Rational structured_max;  // best over every nonempty union of B-classes
  Rational exhaustive_max;  // best over every BS subset
  std::size_t subsets_checked = 0;
  bool argmax_in_candidates = false;
  /// overhearing/|R| ratio keyed by number of classes in the set
  std::map<int, Rational> ratios;
};

/// Brute-force check of the candidate list. Exhaustive over all 2^|BS|
/// subsets when the grid has at most `exhaustive_limit` BSs.
CandidateOracleReport candidate_oracle(const Topology& grid, const Placement& p, const ChannelSet* cs = nullptr,
                           int exhaustive_limit = 20);

}  // namespace cachedof
