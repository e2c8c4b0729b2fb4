// Copyright 2026 The cachedof Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "cachedof/cache_placement.hpp"
#include "cachedof/grid_topology.hpp"
#include "cachedof/kernels.hpp"

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <vector>

namespace cachedof {

using DiagChannel = std::vector<Complex>;

/// Counter-based sampler: the draw for (seed, key, index) never depends on
/// what else was drawn. Circularly symmetric, unit variance.
Complex gaussian_at(std::uint64_t seed, const std::array<std::uint64_t, 4>& key, std::uint64_t index);

/// Length-n draw of gaussian_at over indices 0..n-1.
DiagChannel random_diag(std::uint64_t seed, const std::array<std::uint64_t, 4>& key, std::size_t n);

/// Diagonal channels for every topology edge over N symbol extensions.
/// Keeps a pointer to the topology, which must outlive the set.
class ChannelSet {
 public:
  const Topology& topology() const { return *topo_; }
  std::size_t extensions() const { return n_; }
  std::uint64_t seed() const { return seed_; }

  /// Throws std::out_of_range when (u, b) is not an edge.
  const DiagChannel& h(UserIndex u, BsIndex b) const;

  friend ChannelSet draw_channels(const Topology& t, std::size_t n, std::uint64_t seed);

 private:
  const Topology* topo_ = nullptr;
  std::size_t n_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<DiagChannel> edges_;
};

/// Throws std::invalid_argument when n == 0.
ChannelSet draw_channels(const Topology& t, std::size_t n, std::uint64_t seed);

/// |R|x|T| gains at one symbol extension; exact zeros off the edge set.
/// Throws std::out_of_range when ext >= N.
Eigen::MatrixXcd submatrix(const ChannelSet& cs, const std::vector<UserIndex>& r,
                           const std::vector<BsIndex>& t, std::size_t ext);

/// {"seed":s,"N":n,"edges":[{"user":id,"bs":id,"values":[[re,im],...]}]}
nlohmann::json dump_channels(const ChannelSet& cs);

// ---------------------------------------------------------------------------
// Symbolic side: channel and precoder coefficients as polynomial variables.

/// Channel gain (user, bs) or precoder factor (intended, group, bs).
struct Variable {
  enum Kind { Gain = 0, Factor = 1 };
  Kind kind = Gain;
  int a = 0;
  int b = 0;
  int c = 0;
  auto operator<=>(const Variable&) const = default;
};

Variable gain_var(UserIndex user, BsIndex bs);
Variable factor_var(UserIndex intended, int group, BsIndex bs);

/// Integer multiple of a product of variables; factors kept sorted.
struct Term {
  int coef = 1;
  std::vector<Variable> factors;
};

struct Polynomial {
  std::vector<Term> terms;
  bool is_zero() const { return terms.empty(); }
};

/// Combines like terms and drops cancelled ones.
Polynomial simplify(Polynomial p);
Polynomial multiply(const Polynomial& a, const Polynomial& b);
Polynomial add(const Polynomial& a, const Polynomial& b);
bool operator==(const Polynomial& a, const Polynomial& b);

using Assignment = std::map<Variable, Complex>;

Complex evaluate(const Polynomial& p, const Assignment& at);
/// d p / d x at `at`.
Complex derivative(const Polynomial& p, const Variable& x, const Assignment& at);
std::vector<Variable> variables_of(const Polynomial& p);

std::string describe(const Variable& v, const Topology& t);
std::string describe(const Polynomial& p, const Topology& t);

// ---------------------------------------------------------------------------
// Per-BS diagonal factors of cooperative precoders.

enum class FactorKind { Zero, ZfMember, Random };

struct FactorEntry {
  FactorKind kind = FactorKind::Zero;
  /// ZfMember: the entry equals sign * H_{partner, channel_bs}.
  UserIndex partner = -1;
  BsIndex channel_bs = -1;
  int sign = 1;
};

/// Diagonal factor table keyed by (intended user, group, BS in group).
/// Filled by build_factor_design; holds pointers to topology and placement.
class FactorDesign {
 public:
  FactorDesign() = default;
  FactorDesign(const Topology& t, const Placement& p, std::uint64_t seed);

  const Topology& topology() const { return *topo_; }
  const Placement& placement() const { return *place_; }
  std::uint64_t seed() const { return seed_; }

  void set(UserIndex intended, int group, BsIndex bs, FactorEntry e);
  /// Entries for BSs outside the group are reported as Zero.
  FactorEntry entry(UserIndex intended, int group, BsIndex bs) const;

  /// Adds `eps` to every extension of one entry (negative controls).
  void perturb(UserIndex intended, int group, BsIndex bs, Complex eps);

  DiagChannel values(const ChannelSet& cs, UserIndex intended, int group, BsIndex bs) const;
  Polynomial polynomial(UserIndex intended, int group, BsIndex bs) const;

 private:
  using Key = std::tuple<UserIndex, int, BsIndex>;
  const Topology* topo_ = nullptr;
  const Placement* place_ = nullptr;
  std::uint64_t seed_ = 0;
  std::map<Key, FactorEntry> table_;
  std::map<Key, Complex> perturb_;
};

enum class EffectiveTag { Desired, Neutralized, Zeroed, Generic };

std::string to_string(EffectiveTag t);

/// Combined gain from `group`'s signal for `intended` at `target`.
struct EffectiveChannel {
  UserIndex target = -1;
  int group = -1;
  UserIndex intended = -1;
  std::array<BsIndex, 2> bss{-1, -1};
  DiagChannel values;
  EffectiveTag tag = EffectiveTag::Generic;
  /// Largest |H*U| magnitude among the summed products (residual scale).
  double term_scale = 0.0;
};

/// The two BSs of M_target inside the group. Throws std::invalid_argument
/// when the intersection does not have exactly two members.
std::array<BsIndex, 2> shared_pair(const Topology& t, const Placement& p, UserIndex target, int group);

EffectiveTag classify(const FactorDesign& ud, UserIndex target, int group, UserIndex intended);

EffectiveChannel effective_channel(const ChannelSet& cs, const FactorDesign& ud, UserIndex target, int group,
                                   UserIndex intended);

/// Symbolic counterpart of effective_channel.
Polynomial effective_polynomial(const FactorDesign& ud, UserIndex target, int group, UserIndex intended);

}  // namespace cachedof
