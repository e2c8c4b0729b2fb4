// Copyright 2026 The cachedof Authors
// SPDX-License-Identifier: Apache-2.0

#include "cachedof/grid_topology.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cstdlib>
#include <map>
#include <set>

using namespace cachedof;

namespace {

std::set<Coord> neighbor_coords(const Topology& t, Coord u) {
  std::set<Coord> out;
  for (BsIndex b : neighbors_of_user(t, u)) out.insert(t.bs_coord(b));
  return out;
}

// Adjacency from first principles: a BS touches a user when both offsets
// are one step on the (possibly wrapped) lattice.
bool lattice_adjacent(const GridSpec& g, Coord u, Coord b) {
  auto step = [&](int a, int c, int period) {
    int d = std::abs(a - c);
    if (g.wrap) d = std::min(d % period, period - d % period);
    return d == 1;
  };
  return step(u.x, b.x, 2 * g.width_cells) && step(u.y, b.y, 2 * g.height_cells);
}

}  // namespace

TEST_CASE("make_grid on a 4x4 torus") {
  const Topology t = make_grid({4, 4, true});
  CHECK(t.num_users() == 16);
  CHECK(t.num_bss() == 16);
  for (UserIndex u = 0; u < t.num_users(); ++u) CHECK(t.neighbors_of_user(u).size() == 4);
  CHECK(neighbor_coords(t, {1, 1}) == std::set<Coord>{{0, 0}, {2, 0}, {0, 2}, {2, 2}});
  CHECK(neighbor_coords(t, {7, 7}) == std::set<Coord>{{6, 6}, {0, 6}, {6, 0}, {0, 0}});
  CHECK(neighbor_coords(t, {5, 3}) == std::set<Coord>{{4, 2}, {6, 2}, {4, 4}, {6, 4}});
}

TEST_CASE("make_grid rejects bad specs") {
  CHECK_THROWS_AS(make_grid({0, 4, false}), std::invalid_argument);
  CHECK_THROWS_AS(make_grid({4, -1, false}), std::invalid_argument);
  CHECK_THROWS_AS(make_grid({5, 4, true}), std::invalid_argument);
  CHECK_THROWS_AS(make_grid({2, 2, true}), std::invalid_argument);
  CHECK_THROWS_AS(make_grid({4, 4, true, 1, 0}), std::invalid_argument);
  CHECK_NOTHROW(make_grid({3, 5, false}));
}

TEST_CASE("shifted 3x3 patch") {
  const Topology t = make_grid(testing::patch3x3());
  CHECK(t.num_users() == 9);
  CHECK(t.num_bss() == 16);
  CHECK(t.user_index(testing::patch_user(5)) == t.user_index(Coord{1, 1}));
  CHECK(neighbor_coords(t, {1, 1}) == std::set<Coord>{{0, 0}, {2, 0}, {0, 2}, {2, 2}});
  CHECK(t.neighbors_of_user(t.user_index(Coord{-1, -1})).size() == 4);
  CHECK_THROWS_AS(t.user_index(Coord{5, 5}), std::out_of_range);
  CHECK_THROWS_AS(t.user_index(std::string("nobody")), std::out_of_range);
}

TEST_CASE("class maps") {
  CHECK(bs_class({0, 0}) == 1);
  CHECK(bs_class({2, 0}) == 2);
  CHECK(bs_class({0, 2}) == 3);
  CHECK(bs_class({2, 2}) == 4);
  CHECK(bs_class({4, 8}) == 1);
  CHECK(bs_class({-2, 0}) == 2);
  CHECK(user_class({1, 1}) == 1);
  CHECK(user_class({3, 1}) == 2);
  CHECK(user_class({1, 3}) == 3);
  CHECK(user_class({3, 3}) == 4);
  CHECK(user_class({-1, -1}) == 4);
  CHECK_THROWS_AS(bs_class({1, 0}), std::invalid_argument);
  CHECK_THROWS_AS(user_class({2, 1}), std::invalid_argument);
}

TEST_CASE("torus invariants") {
  for (const GridSpec& g : {GridSpec{4, 4, true}, GridSpec{4, 6, true}, GridSpec{6, 8, true}, GridSpec{8, 8, true}}) {
    CAPTURE(g.width_cells);
    CAPTURE(g.height_cells);
    const Topology t = make_grid(g);
    CHECK(t.num_users() == g.width_cells * g.height_cells);
    CHECK(t.num_bss() == t.num_users());
    std::size_t degree_sum = 0;
    std::map<int, int> bs_classes, user_classes;
    for (UserIndex u = 0; u < t.num_users(); ++u) {
      degree_sum += t.neighbors_of_user(u).size();
      ++user_classes[user_class(t.user_coord(u))];
      for (BsIndex b = 0; b < t.num_bss(); ++b) {
        const bool listed = t.connected(u, b);
        CHECK(listed == lattice_adjacent(g, t.user_coord(u), t.bs_coord(b)));
        const auto& us = t.users_of_bs(b);
        CHECK(listed == (std::find(us.begin(), us.end(), u) != us.end()));
      }
    }
    CHECK(degree_sum == 4u * t.num_users());
    for (BsIndex b = 0; b < t.num_bss(); ++b) {
      CHECK(t.users_of_bs(b).size() == 4);
      ++bs_classes[bs_class(t.bs_coord(b))];
    }
    for (int k = 1; k <= 4; ++k) {
      CHECK(bs_classes[k] == t.num_bss() / 4);
      CHECK(user_classes[k] == t.num_users() / 4);
    }
    CHECK(t.num_edges() == 4 * t.num_users());
  }
}

TEST_CASE("edge numbering is dense") {
  const Topology t = make_grid({4, 6, true});
  std::set<int> seen;
  for (UserIndex u = 0; u < t.num_users(); ++u) {
    for (BsIndex b = 0; b < t.num_bss(); ++b) {
      const int e = t.edge_index(u, b);
      if (t.connected(u, b)) {
        CHECK(seen.insert(e).second);
      } else {
        CHECK(e == -1);
      }
    }
  }
  CHECK(seen.size() == static_cast<std::size_t>(t.num_edges()));
  CHECK(*seen.rbegin() == t.num_edges() - 1);
}

TEST_CASE("general topology fixture") {
  const Topology t = load_topology(testing::read_json("two_user_topology.json"));
  CHECK(t.kind() == TopologyKind::General);
  CHECK(t.num_users() == 2);
  CHECK(t.num_bss() == 3);
  CHECK(t.num_edges() == 4);
  std::set<std::string> n1;
  for (BsIndex b : t.neighbors_of_user(t.user_index(std::string("1")))) n1.insert(t.bs_id(b));
  CHECK(n1 == std::set<std::string>{"a", "b"});
  CHECK_THROWS_AS(t.user_coord(0), std::logic_error);
}

TEST_CASE("load_topology rejects malformed documents") {
  nlohmann::json no_edges = {{"users", {"1"}}, {"bss", {"a"}}, {"edges", nlohmann::json::array()}};
  CHECK_THROWS_AS(load_topology(no_edges), std::invalid_argument);
  nlohmann::json dangling = {{"users", {"1"}}, {"bss", {"a"}}, {"edges", {{"1", "z"}}}};
  CHECK_THROWS_AS(load_topology(dangling), std::invalid_argument);
  nlohmann::json dup = {{"users", {"1", "1"}}, {"bss", {"a"}}, {"edges", {{"1", "a"}}}};
  CHECK_THROWS_AS(load_topology(dup), std::invalid_argument);
  nlohmann::json twice = {{"users", {"1"}}, {"bss", {"a"}}, {"edges", {{"1", "a"}, {"1", "a"}}}};
  CHECK_THROWS_AS(load_topology(twice), std::invalid_argument);
  CHECK_THROWS_AS(load_topology(nlohmann::json::array()), std::invalid_argument);
  CHECK_THROWS_AS(load_topology(nlohmann::json{{"users", {"1"}}}), std::invalid_argument);
}

TEST_CASE("grid export round trip") {
  for (const GridSpec& g : {GridSpec{4, 4, true}, testing::patch3x3(), GridSpec{2, 3, false}}) {
    const Topology t = make_grid(g);
    const nlohmann::json doc = export_topology(t);
    const Topology back = load_topology(nlohmann::json::parse(doc.dump()));
    REQUIRE(back.is_grid());
    REQUIRE(back.num_users() == t.num_users());
    for (UserIndex u = 0; u < t.num_users(); ++u) {
      std::set<std::string> a, b;
      for (BsIndex x : t.neighbors_of_user(u)) a.insert(t.bs_id(x));
      for (BsIndex x : back.neighbors_of_user(back.user_index(t.user_id(u)))) b.insert(back.bs_id(x));
      CHECK(a == b);
    }
  }
  nlohmann::json doc = export_topology(make_grid({4, 4, true}));
  doc["edges"][0][1] = doc["edges"][5][1];
  CHECK_THROWS_AS(load_topology(doc), std::invalid_argument);
}
