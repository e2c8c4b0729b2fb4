// Copyright 2026 The cachedof Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <nlohmann/json.hpp>

#include <compare>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace cachedof {

/// Lattice coordinate. Users sit on odd/odd points, base stations on even/even.
struct Coord {
  int x = 0;
  int y = 0;
  auto operator<=>(const Coord&) const = default;
};

std::string to_string(const Coord& c);

/// Grid of square cells; one user per cell, one BS per cell corner.
/// `origin_x`/`origin_y` shift the cell lattice (non-wrapping grids only), so
/// that a patch such as users (-1..3)x(-1..3) can be expressed directly.
struct GridSpec {
  int width_cells = 4;
  int height_cells = 4;
  bool wrap = true;
  int origin_x = 0;
  int origin_y = 0;
};

enum class TopologyKind { Grid, General };

using UserIndex = int;
using BsIndex = int;

/// Bipartite user/BS connectivity. Immutable after construction.
class Topology {
 public:
  TopologyKind kind() const { return kind_; }
  bool is_grid() const { return kind_ == TopologyKind::Grid; }
  const GridSpec& grid() const;

  int num_users() const { return static_cast<int>(user_ids_.size()); }
  int num_bss() const { return static_cast<int>(bs_ids_.size()); }
  int num_edges() const { return num_edges_; }

  const std::string& user_id(UserIndex u) const { return user_ids_.at(u); }
  const std::string& bs_id(BsIndex b) const { return bs_ids_.at(b); }
  const std::vector<std::string>& user_ids() const { return user_ids_; }
  const std::vector<std::string>& bs_ids() const { return bs_ids_; }

  /// Grid kind only.
  Coord user_coord(UserIndex u) const;
  Coord bs_coord(BsIndex b) const;

  /// Lookups by id; grid coordinates are reduced modulo the torus on wrap grids.
  /// Throw std::out_of_range for unknown nodes.
  UserIndex user_index(const std::string& id) const;
  BsIndex bs_index(const std::string& id) const;
  UserIndex user_index(Coord c) const;
  BsIndex bs_index(Coord c) const;
  std::optional<UserIndex> find_user(Coord c) const;
  std::optional<BsIndex> find_bs(Coord c) const;

  /// Reduces a coordinate onto the torus (identity on non-wrapping grids).
  Coord normalize(Coord c) const;

  const std::vector<BsIndex>& neighbors_of_user(UserIndex u) const { return user_nbrs_.at(u); }
  const std::vector<UserIndex>& users_of_bs(BsIndex b) const { return bs_users_.at(b); }
  bool connected(UserIndex u, BsIndex b) const;

  /// Position of (u, b) in a dense edge numbering, or -1 when not adjacent.
  int edge_index(UserIndex u, BsIndex b) const;

  friend Topology make_grid(const GridSpec& spec);
  friend Topology make_general(std::vector<std::string> users, std::vector<std::string> bss,
                               const std::vector<std::pair<std::string, std::string>>& edges);

 private:
  void finalize();

  TopologyKind kind_ = TopologyKind::General;
  std::optional<GridSpec> grid_;
  std::vector<std::string> user_ids_;
  std::vector<std::string> bs_ids_;
  std::vector<Coord> user_coords_;
  std::vector<Coord> bs_coords_;
  std::vector<std::vector<BsIndex>> user_nbrs_;
  std::vector<std::vector<UserIndex>> bs_users_;
  std::vector<int> edge_offset_;
  int num_edges_ = 0;
  std::unordered_map<std::string, UserIndex> user_lookup_;
  std::unordered_map<std::string, BsIndex> bs_lookup_;
};

/// Throws std::invalid_argument for dimensions < 1, wrap with odd dimensions,
/// wrap smaller than 4x4 cells, or an origin shift on a wrapping grid.
Topology make_grid(const GridSpec& spec);

/// General bipartite topology with opaque string ids.
/// Throws std::invalid_argument on duplicate ids, dangling edge endpoints,
/// duplicate edges, or users without any edge.
Topology make_general(std::vector<std::string> users, std::vector<std::string> bss,
                      const std::vector<std::pair<std::string, std::string>>& edges);

/// Corner BSs {(i±1, j±1)} of user `u` (after wrap).
std::vector<BsIndex> neighbors_of_user(const Topology& t, Coord u);

/// BS class k ∈ {1,2,3,4} from (p mod 4, q mod 4). Throws on odd coordinates.
int bs_class(Coord b);

/// User class r ∈ {1,2,3,4} from (i mod 4, j mod 4). Throws on even coordinates.
int user_class(Coord u);

/// {"users":[...],"bss":[...],"edges":[[u,b],...]}; grid kind adds its spec.
nlohmann::json export_topology(const Topology& t);

/// Inverse of export_topology. Grid documents are rebuilt with make_grid and
/// their edge list must match the regenerated adjacency.
Topology load_topology(const nlohmann::json& doc);

}  // namespace cachedof
