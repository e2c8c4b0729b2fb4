// Copyright 2026 The cachedof Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "cachedof/cache_placement.hpp"
#include "cachedof/channel_model.hpp"
#include "cachedof/grid_topology.hpp"
#include "cachedof/monomial.hpp"
#include "cachedof/rational.hpp"

#include <Eigen/Dense>

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace cachedof {

enum class SchemeMode { Quarter, Half, Full };

std::string to_string(SchemeMode m);

/// Largest symbol-extension count realized numerically.
inline constexpr std::size_t kDimensionBudget = 512;

/// A channel whose powers build precoder columns: either a raw link
/// H[user, bs] or an effective channel G[target, group, intended].
struct Generator {
  enum Kind { Raw = 0, Effective = 1 };
  Kind kind = Raw;
  UserIndex user = -1;  // receiving user (target for Effective)
  BsIndex bs = -1;
  int group = -1;
  UserIndex intended = -1;
  auto operator<=>(const Generator&) const = default;
};

Generator raw_generator(UserIndex user, BsIndex bs);
Generator effective_generator(UserIndex target, int group, UserIndex intended);
std::string describe(const Generator& g, const Topology& t);

struct GeneratorSet {
  std::vector<Generator> items;
  /// Set when the set was cut down to the channels seen by a single user.
  bool truncated = false;

  std::size_t size() const { return items.size(); }
  int index_of(const Generator& g) const;
};

/// Throws std::invalid_argument on an empty generator set.
std::vector<ExponentVector> monomial_basis(const GeneratorSet& g, int n, std::size_t limit = kBasisLimit);

/// User served by `bs` in the given phase; phase 1 pairs (p,q) with (p-1,q+1),
/// then (p+1,q+1), (p+1,q-1), (p-1,q-1). Empty when the user falls off a
/// non-wrapping grid. Throws std::invalid_argument for phase outside 1..4.
std::optional<UserIndex> phase_partner(const Topology& t, int phase, BsIndex bs);

/// BS serving `user` in the given phase (inverse of phase_partner).
std::optional<BsIndex> phase_server(const Topology& t, int phase, UserIndex user);

struct QuarterPhase {
  int phase = 1;
  /// Desired BS of the focus user (focus mode only).
  BsIndex desired_bs = -1;
  GeneratorSet generators;
};

/// Symbolic description of a delivery scheme. Numeric matrices come from
/// realize(), once per seed.
struct SchemeInstance {
  SchemeMode mode = SchemeMode::Quarter;
  std::shared_ptr<const Topology> topology;
  std::shared_ptr<const Placement> placement;
  int n = 1;
  std::optional<UserIndex> focus;
  BigInt M;  // signal dimension per desired stream
  BigInt N;  // symbol extensions

  // Quarter: one generator set per phase.
  std::vector<QuarterPhase> phases;

  // Half: generator set shared by all precoders, and the focus user's channels.
  GeneratorSet generators;
  std::vector<Generator> desired;       // six desired effective channels
  std::vector<Generator> interference;  // nonzero interference channels at the focus
  std::vector<Generator> neutralized;      // neutralized by zero-forcing pairs
  std::vector<Generator> zeroed;      // zero by design
  bool truncation_override = false;

  struct Perturbation {
    UserIndex intended;
    int group;
    BsIndex bs;
    Complex eps;
  };
  /// Applied to every U design realized from this instance.
  std::vector<Perturbation> perturbations;

  std::size_t generator_count() const;
};

/// Zero-forcing / zero / random diagonal factors, rotated per user class. Channel-valued
/// entries reference H of the partner user; entries whose partner falls off a
/// non-wrapping grid become random. Throws on non-grid topologies.
FactorDesign build_factor_design(const Topology& t, const Placement& half, std::uint64_t seed);

/// Focus mode: per phase, the three interference links of the focus user.
/// Without a focus, every user's interference links for every phase.
/// Throws std::out_of_range for an unknown focus.
SchemeInstance build_quarter_scheme(std::shared_ptr<const Topology> t, int n, std::optional<UserIndex> focus);

struct HalfOptions {
  /// Generator subset for micro-instances; empty means the full focus set.
  std::vector<Generator> generators;
  /// Allow a subset that leaves some interference channel unaligned.
  bool allow_truncation = false;
};

/// Throws std::invalid_argument when a generator subset drops an
/// interference channel of the focus user and allow_truncation is false.
SchemeInstance build_half_scheme(std::shared_ptr<const Topology> t, int n, std::optional<UserIndex> focus,
                                 const HalfOptions& opts = {});

/// First `count` interference channels of the focus taken from distinct groups.
std::vector<Generator> micro_generators(const SchemeInstance& half, std::size_t count = 3);

/// Numeric matrices for one seed.
struct Realization {
  std::uint64_t seed = 0;
  std::shared_ptr<const Topology> topology;
  std::shared_ptr<const Placement> placement;
  ChannelSet channels;
  std::optional<FactorDesign> udesign;
  /// Quarter: one decoding matrix per phase. Half: one matrix.
  std::vector<Eigen::MatrixXcd> decoding;
  std::vector<int> expected_rank;
};

/// Draws channels with N extensions and builds the decoding matrices of the
/// focus user. Throws std::length_error when N exceeds the dimension budget.
Realization realize(const SchemeInstance& s, std::uint64_t seed, std::size_t budget = kDimensionBudget);

/// Numeric value of a generator (or any effective channel) under a realization.
DiagChannel generator_values(const Realization& r, const Placement* half, const Generator& g);

/// Columns of prod_k gen_k^{e_k}, one per exponent vector.
Eigen::MatrixXcd realize_columns(const std::vector<DiagChannel>& gens, const std::vector<ExponentVector>& basis);

/// Full cooperation: zero-forcing over the whole network at one extension.
struct FullZf {
  Eigen::MatrixXcd network;
  Eigen::MatrixXcd precoder;
  int rank = 0;
  int expected_rank = 0;
};

FullZf build_full_zf(const ChannelSet& cs, std::size_t ext = 0);

/// Symbolic full-cooperation instance (M = N = 1) for DoF accounting.
SchemeInstance build_full_scheme(std::shared_ptr<const Topology> t);

}  // namespace cachedof
