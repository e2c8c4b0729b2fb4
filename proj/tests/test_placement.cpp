// Copyright 2026 The cachedof Authors
// SPDX-License-Identifier: Apache-2.0

#include "cachedof/cache_placement.hpp"

#include "support.hpp"

#include <doctest.h>

#include <set>

using namespace cachedof;

namespace {

std::vector<BsIndex> class_union(const Topology& t, std::set<int> classes) {
  std::vector<BsIndex> out;
  for (BsIndex b = 0; b < t.num_bss(); ++b) {
    if (classes.count(bs_class(t.bs_coord(b)))) out.push_back(b);
  }
  return out;
}

std::set<std::string> labels(const std::vector<CacheGroup>& gs) {
  std::set<std::string> out;
  for (const auto& g : gs) out.insert(g.label);
  return out;
}

}  // namespace

TEST_CASE("half placement groups") {
  const Topology t = make_grid({4, 4, true});
  const Placement p = place(t, PlacementMode::Half);
  REQUIRE(p.groups.size() == 6);
  const std::vector<std::set<int>> expect = {{1, 2}, {3, 4}, {1, 3}, {2, 4}, {1, 4}, {2, 3}};
  for (int k = 0; k < 6; ++k) {
    CHECK(p.groups[k].label == "A" + std::to_string(k + 1));
    CHECK(p.groups[k].members == class_union(t, expect[k]));
    CHECK(p.groups[k].fraction == make_rational(1, 6));
  }
  CHECK(p.mu == make_rational(1, 2));
  // Any two groups share exactly one B-class.
  for (int a = 0; a < 6; ++a) {
    for (int b = a + 1; b < 6; ++b) {
      std::set<int> s(p.groups[a].classes.begin(), p.groups[a].classes.end());
      int shared = 0;
      for (int c : p.groups[b].classes) shared += s.count(c);
      const bool complementary = shared == 0;
      // Complementary pairs (A1/A2, A3/A4, A5/A6) share no class.
      CHECK((complementary ? (b == a + 1 && a % 2 == 0) : shared == 1));
    }
  }
}

TEST_CASE("per-BS load equals mu and fractions sum to one") {
  for (const GridSpec& g : {GridSpec{4, 4, true}, GridSpec{8, 4, true}}) {
    const Topology t = make_grid(g);
    for (PlacementMode m : {PlacementMode::Quarter, PlacementMode::Half, PlacementMode::Full}) {
      const Placement p = place(t, m);
      Rational total = 0;
      for (const auto& grp : p.groups) total += grp.fraction;
      CHECK(total == 1);
      for (const Rational& load : per_bs_load(p, t.num_bss())) CHECK(load == mode_mu(m));
      CHECK_NOTHROW(validate(p, t));
    }
  }
  const Topology t = make_grid({4, 4, true});
  CHECK(place(t, PlacementMode::Quarter).groups.size() == 4);
  const Placement full = place(t, PlacementMode::Full);
  REQUIRE(full.groups.size() == 1);
  CHECK(full.groups[0].members.size() == 16);
}

TEST_CASE("place needs a grid") {
  const Topology t = load_topology(testing::read_json("two_user_topology.json"));
  CHECK_THROWS_AS(place(t, PlacementMode::Half), std::invalid_argument);
  CHECK_THROWS_AS(place(make_grid({4, 4, true}), PlacementMode::Custom), std::invalid_argument);
}

TEST_CASE("memory_share examples and inverse property") {
  const MixturePlan a = memory_share(make_rational(3, 8));
  CHECK(a.low_weight == make_rational(1, 2));
  CHECK(a.low_mode == PlacementMode::Quarter);
  CHECK(a.high_mode == PlacementMode::Half);
  const MixturePlan b = memory_share(make_rational(1, 2));
  CHECK(b.low_weight == 1);
  CHECK(b.low_mode == PlacementMode::Half);
  const MixturePlan c = memory_share(make_rational(3, 4));
  CHECK(c.low_weight == make_rational(1, 2));
  CHECK(c.high_mode == PlacementMode::Full);
  for (int k = 30; k <= 120; ++k) {
    const Rational mu = make_rational(k, 120);
    const MixturePlan m = memory_share(mu);
    CHECK(m.low_weight >= 0);
    CHECK(m.low_weight <= 1);
    CHECK(m.low_weight * mode_mu(m.low_mode) + (1 - m.low_weight) * mode_mu(m.high_mode) == mu);
  }
  CHECK_THROWS_AS(memory_share(make_rational(1, 5)), std::invalid_argument);
  CHECK_THROWS_AS(memory_share(make_rational(6, 5)), std::invalid_argument);
}

TEST_CASE("groups_within") {
  const Topology t = make_grid({4, 4, true});
  const Placement half = place(t, PlacementMode::Half);
  CHECK(labels(groups_within(half, class_union(t, {1, 2}))) == std::set<std::string>{"A1"});
  CHECK(groups_within(half, std::vector<BsIndex>{}).empty());
  CHECK(labels(groups_within(half, class_union(t, {1, 2, 3}))) == std::set<std::string>{"A1", "A3", "A6"});
  const Placement quarter = place(t, PlacementMode::Quarter);
  CHECK(labels(groups_within(quarter, class_union(t, {2, 3, 4}))) == std::set<std::string>{"A2", "A3", "A4"});
  auto partial = class_union(t, {1});
  partial.pop_back();
  CHECK(groups_within(quarter, partial).empty());
}

TEST_CASE("placement JSON round trip and validation") {
  const Topology t = make_grid({4, 4, true});
  const Placement p = place(t, PlacementMode::Half);
  const nlohmann::json doc = export_placement(p, t);
  CHECK(doc["mu"] == "1/2");
  CHECK(doc["groups"][0]["fraction"] == "1/6");
  const Placement back = load_placement(doc, t);
  REQUIRE(back.groups.size() == p.groups.size());
  for (std::size_t k = 0; k < p.groups.size(); ++k) {
    CHECK(back.groups[k].members == p.groups[k].members);
    CHECK(back.groups[k].fraction == p.groups[k].fraction);
  }

  const Topology f = load_topology(testing::read_json("two_user_topology.json"));
  const Placement fp = load_placement(testing::read_json("two_user_placement.json"), f);
  CHECK(fp.groups.size() == 2);
  CHECK(fp.mu == make_rational(1, 2));

  nlohmann::json bad = testing::read_json("two_user_placement.json");
  bad["groups"][0]["fraction"] = "0";
  CHECK_THROWS_AS(load_placement(bad, f), std::invalid_argument);
  bad = testing::read_json("two_user_placement.json");
  bad["groups"][1]["members"] = {"zz"};
  CHECK_THROWS(load_placement(bad, f));
  bad = testing::read_json("two_user_placement.json");
  bad["groups"][1]["label"] = "A1";
  CHECK_THROWS_AS(load_placement(bad, f), std::invalid_argument);
}
