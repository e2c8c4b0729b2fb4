// Copyright 2026 The cachedof Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "cachedof/grid_topology.hpp"
#include "cachedof/rational.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace cachedof {

enum class PlacementMode { Quarter, Half, Full, Custom };

std::string to_string(PlacementMode m);
/// Accepts "quarter", "half", "full", "custom". Throws std::invalid_argument.
PlacementMode parse_mode(const std::string& s);

/// Cache size at which a pure placement mode operates (1/4, 1/2, 1).
Rational mode_mu(PlacementMode m);

/// One subfile class and the BSs holding it.
struct CacheGroup {
  std::string label;
  std::vector<BsIndex> members;  // sorted, unique
  Rational fraction;
  /// B-classes whose union forms the group (grid placements only).
  std::vector<int> classes;
};

struct Placement {
  Rational mu;
  PlacementMode mode = PlacementMode::Custom;
  std::vector<CacheGroup> groups;

  int group_index(const std::string& label) const;
};

/// Convex split between two pure placements.
struct MixturePlan {
  Rational mu;
  Rational low_weight;  // weight of low_mode
  PlacementMode low_mode = PlacementMode::Quarter;
  PlacementMode high_mode = PlacementMode::Half;
};

/// Quarter: A_k = B_k. Half: A1..A6 = B1∪B2, B3∪B4, B1∪B3, B2∪B4, B1∪B4, B2∪B3.
/// Full: one group with every BS. Throws on general topologies or Custom.
Placement place(const Topology& t, PlacementMode mode);

/// Throws std::invalid_argument when mu is outside [1/4, 1].
MixturePlan memory_share(const Rational& mu);

/// Groups whose members all lie in `in_t` (a mask over BS indices).
std::vector<CacheGroup> groups_within(const Placement& p, const std::vector<bool>& in_t);
std::vector<CacheGroup> groups_within(const Placement& p, const std::vector<BsIndex>& t);

/// Sum of the fractions of groups containing each BS.
std::vector<Rational> per_bs_load(const Placement& p, int num_bss);

/// Checks fractions in (0,1], nonempty members, labels unique, members in range.
void validate(const Placement& p, const Topology& t);

/// {"mu":"p/q","mode":"half","groups":[{"label":"A1","members":[ids],"fraction":"1/6"}]}
nlohmann::json export_placement(const Placement& p, const Topology& t);
Placement load_placement(const nlohmann::json& doc, const Topology& t);

}  // namespace cachedof
