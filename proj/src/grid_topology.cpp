// Copyright 2026 The cachedof Authors
// SPDX-License-Identifier: Apache-2.0

#include "cachedof/grid_topology.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace cachedof {

namespace {

int pos_mod(int a, int m) {
  const int r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace

std::string to_string(const Coord& c) {
  return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")";
}

const GridSpec& Topology::grid() const {
  if (!grid_) throw std::logic_error("topology is not a grid");
  return *grid_;
}

Coord Topology::user_coord(UserIndex u) const {
  if (!is_grid()) throw std::logic_error("user coordinates exist only on grid topologies");
  return user_coords_.at(u);
}

Coord Topology::bs_coord(BsIndex b) const {
  if (!is_grid()) throw std::logic_error("BS coordinates exist only on grid topologies");
  return bs_coords_.at(b);
}

Coord Topology::normalize(Coord c) const {
  if (!grid_ || !grid_->wrap) return c;
  return {pos_mod(c.x, 2 * grid_->width_cells), pos_mod(c.y, 2 * grid_->height_cells)};
}

UserIndex Topology::user_index(const std::string& id) const {
  auto it = user_lookup_.find(id);
  if (it == user_lookup_.end()) throw std::out_of_range("unknown user id: " + id);
  return it->second;
}

BsIndex Topology::bs_index(const std::string& id) const {
  auto it = bs_lookup_.find(id);
  if (it == bs_lookup_.end()) throw std::out_of_range("unknown BS id: " + id);
  return it->second;
}

std::optional<UserIndex> Topology::find_user(Coord c) const {
  if (!is_grid()) return std::nullopt;
  auto it = user_lookup_.find(to_string(normalize(c)));
  if (it == user_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<BsIndex> Topology::find_bs(Coord c) const {
  if (!is_grid()) return std::nullopt;
  auto it = bs_lookup_.find(to_string(normalize(c)));
  if (it == bs_lookup_.end()) return std::nullopt;
  return it->second;
}

UserIndex Topology::user_index(Coord c) const {
  if (auto u = find_user(c)) return *u;
  throw std::out_of_range("unknown user " + to_string(c));
}

BsIndex Topology::bs_index(Coord c) const {
  if (auto b = find_bs(c)) return *b;
  throw std::out_of_range("unknown BS " + to_string(c));
}

bool Topology::connected(UserIndex u, BsIndex b) const { return edge_index(u, b) >= 0; }

int Topology::edge_index(UserIndex u, BsIndex b) const {
  const auto& nb = user_nbrs_.at(u);
  auto it = std::lower_bound(nb.begin(), nb.end(), b);
  if (it == nb.end() || *it != b) return -1;
  return edge_offset_[u] + static_cast<int>(it - nb.begin());
}

void Topology::finalize() {
  user_lookup_.clear();
  bs_lookup_.clear();
  for (int u = 0; u < num_users(); ++u) {
    if (!user_lookup_.emplace(user_ids_[u], u).second) {
      throw std::invalid_argument("duplicate user id: " + user_ids_[u]);
    }
  }
  for (int b = 0; b < num_bss(); ++b) {
    if (!bs_lookup_.emplace(bs_ids_[b], b).second) {
      throw std::invalid_argument("duplicate BS id: " + bs_ids_[b]);
    }
  }
  bs_users_.assign(bs_ids_.size(), {});
  edge_offset_.assign(user_ids_.size(), 0);
  num_edges_ = 0;
  for (int u = 0; u < num_users(); ++u) {
    auto& nb = user_nbrs_[u];
    std::sort(nb.begin(), nb.end());
    if (std::adjacent_find(nb.begin(), nb.end()) != nb.end()) {
      throw std::invalid_argument("duplicate edge at user " + user_ids_[u]);
    }
    if (nb.empty()) throw std::invalid_argument("isolated user: " + user_ids_[u]);
    edge_offset_[u] = num_edges_;
    num_edges_ += static_cast<int>(nb.size());
    for (BsIndex b : nb) bs_users_[b].push_back(u);
  }
}

Topology make_grid(const GridSpec& spec) {
  if (spec.width_cells < 1 || spec.height_cells < 1) {
    throw std::invalid_argument("grid dimensions must be at least 1 cell");
  }
  if (spec.wrap) {
    if (spec.width_cells % 2 != 0 || spec.height_cells % 2 != 0) {
      throw std::invalid_argument("wrapping grid needs even dimensions (BS classes repeat every 4 units)");
    }
    if (spec.width_cells < 4 || spec.height_cells < 4) {
      throw std::invalid_argument("wrapping grid needs at least 4x4 cells");
    }
    if (spec.origin_x != 0 || spec.origin_y != 0) {
      throw std::invalid_argument("origin shift is only supported on non-wrapping grids");
    }
  }

  Topology t;
  t.kind_ = TopologyKind::Grid;
  t.grid_ = spec;

  const int bw = spec.wrap ? spec.width_cells : spec.width_cells + 1;
  const int bh = spec.wrap ? spec.height_cells : spec.height_cells + 1;
  for (int b = 0; b < bh; ++b) {
    for (int a = 0; a < bw; ++a) {
      Coord c{2 * (a + spec.origin_x), 2 * (b + spec.origin_y)};
      t.bs_coords_.push_back(c);
      t.bs_ids_.push_back(to_string(c));
    }
  }
  for (int b = 0; b < spec.height_cells; ++b) {
    for (int a = 0; a < spec.width_cells; ++a) {
      Coord c{2 * (a + spec.origin_x) + 1, 2 * (b + spec.origin_y) + 1};
      t.user_coords_.push_back(c);
      t.user_ids_.push_back(to_string(c));
    }
  }
  // BS lookup is needed to resolve corners before finalize() rebuilds it.
  for (int i = 0; i < t.num_bss(); ++i) t.bs_lookup_.emplace(t.bs_ids_[i], i);
  t.user_nbrs_.resize(t.user_ids_.size());
  for (int u = 0; u < t.num_users(); ++u) {
    const Coord c = t.user_coords_[u];
    for (int dy : {-1, 1}) {
      for (int dx : {-1, 1}) {
        const Coord corner = t.normalize({c.x + dx, c.y + dy});
        t.user_nbrs_[u].push_back(t.bs_lookup_.at(to_string(corner)));
      }
    }
  }
  t.finalize();
  return t;
}

Topology make_general(std::vector<std::string> users, std::vector<std::string> bss,
                      const std::vector<std::pair<std::string, std::string>>& edges) {
  Topology t;
  t.kind_ = TopologyKind::General;
  t.user_ids_ = std::move(users);
  t.bs_ids_ = std::move(bss);
  std::unordered_map<std::string, int> ul, bl;
  for (int i = 0; i < static_cast<int>(t.user_ids_.size()); ++i) ul.emplace(t.user_ids_[i], i);
  for (int i = 0; i < static_cast<int>(t.bs_ids_.size()); ++i) bl.emplace(t.bs_ids_[i], i);
  t.user_nbrs_.resize(t.user_ids_.size());
  for (const auto& [u, b] : edges) {
    auto iu = ul.find(u);
    auto ib = bl.find(b);
    if (iu == ul.end()) throw std::invalid_argument("edge references unknown user: " + u);
    if (ib == bl.end()) throw std::invalid_argument("edge references unknown BS: " + b);
    t.user_nbrs_[iu->second].push_back(ib->second);
  }
  t.finalize();
  return t;
}

std::vector<BsIndex> neighbors_of_user(const Topology& t, Coord u) {
  return t.neighbors_of_user(t.user_index(u));
}

int bs_class(Coord b) {
  if (b.x % 2 != 0 || b.y % 2 != 0) {
    throw std::invalid_argument("BS coordinates must be even: " + to_string(b));
  }
  const int p = pos_mod(b.x, 4);
  const int q = pos_mod(b.y, 4);
  if (q == 0) return p == 0 ? 1 : 2;
  return p == 0 ? 3 : 4;
}

int user_class(Coord u) {
  if (pos_mod(u.x, 2) != 1 || pos_mod(u.y, 2) != 1) {
    throw std::invalid_argument("user coordinates must be odd: " + to_string(u));
  }
  const int i = pos_mod(u.x, 4);
  const int j = pos_mod(u.y, 4);
  if (j == 1) return i == 1 ? 1 : 2;
  return i == 1 ? 3 : 4;
}

nlohmann::json export_topology(const Topology& t) {
  nlohmann::json doc;
  doc["users"] = t.user_ids();
  doc["bss"] = t.bs_ids();
  auto edges = nlohmann::json::array();
  for (int u = 0; u < t.num_users(); ++u) {
    for (BsIndex b : t.neighbors_of_user(u)) edges.push_back({t.user_id(u), t.bs_id(b)});
  }
  doc["edges"] = std::move(edges);
  if (t.is_grid()) {
    const auto& g = t.grid();
    doc["kind"] = "grid";
    doc["width_cells"] = g.width_cells;
    doc["height_cells"] = g.height_cells;
    doc["wrap"] = g.wrap;
    if (g.origin_x != 0 || g.origin_y != 0) {
      doc["origin_x"] = g.origin_x;
      doc["origin_y"] = g.origin_y;
    }
  }
  return doc;
}

namespace {

std::string id_of(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw std::invalid_argument("topology ids must be strings or integers");
}

}  // namespace

Topology load_topology(const nlohmann::json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("topology document must be a JSON object");
  for (const char* key : {"users", "bss", "edges"}) {
    if (!doc.contains(key) || !doc[key].is_array()) {
      throw std::invalid_argument(std::string("topology document needs array '") + key + "'");
    }
  }
  std::vector<std::string> users, bss;
  for (const auto& v : doc["users"]) users.push_back(id_of(v));
  for (const auto& v : doc["bss"]) bss.push_back(id_of(v));
  std::vector<std::pair<std::string, std::string>> edges;
  for (const auto& e : doc["edges"]) {
    if (!e.is_array() || e.size() != 2) throw std::invalid_argument("each edge must be [user, bs]");
    edges.emplace_back(id_of(e[0]), id_of(e[1]));
  }

  if (doc.value("kind", std::string("general")) == "grid") {
    GridSpec spec;
    spec.width_cells = doc.at("width_cells").get<int>();
    spec.height_cells = doc.at("height_cells").get<int>();
    spec.wrap = doc.at("wrap").get<bool>();
    spec.origin_x = doc.value("origin_x", 0);
    spec.origin_y = doc.value("origin_y", 0);
    Topology grid = make_grid(spec);
    // The stored adjacency must agree with the regenerated lattice.
    Topology stored = make_general(users, bss, edges);
    if (stored.num_users() != grid.num_users() || stored.num_bss() != grid.num_bss() ||
        stored.num_edges() != grid.num_edges()) {
      throw std::invalid_argument("grid document does not match its declared dimensions");
    }
    for (int u = 0; u < stored.num_users(); ++u) {
      const UserIndex gu = grid.user_index(stored.user_id(u));
      std::set<std::string> a, b;
      for (BsIndex x : stored.neighbors_of_user(u)) a.insert(stored.bs_id(x));
      for (BsIndex x : grid.neighbors_of_user(gu)) b.insert(grid.bs_id(x));
      if (a != b) throw std::invalid_argument("grid document adjacency differs at " + stored.user_id(u));
    }
    return grid;
  }
  return make_general(std::move(users), std::move(bss), edges);
}

}  // namespace cachedof
