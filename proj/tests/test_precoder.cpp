// Copyright 2026 The cachedof Authors
// SPDX-License-Identifier: Apache-2.0

#include "cachedof/cache_placement.hpp"
#include "cachedof/linalg.hpp"
#include "cachedof/monomial.hpp"
#include "cachedof/precoder.hpp"

#include "support.hpp"

#include <doctest.h>

#include <map>
#include <set>

using namespace cachedof;

namespace {

std::shared_ptr<const Topology> patch() { return std::make_shared<const Topology>(make_grid(testing::patch3x3())); }
std::shared_ptr<const Topology> torus(int w = 4, int h = 4) {
  return std::make_shared<const Topology>(make_grid({w, h, true}));
}

// Row-major numbering 1..9 of users in the 3x3 patch, mapped through the topology.
std::set<std::pair<int, std::string>> labelled(const std::vector<Generator>& gs, const Topology& t,
                                               const Placement& p) {
  std::map<UserIndex, int> number;
  for (int k = 1; k <= 9; ++k) {
    if (auto u = t.find_user(testing::patch_user(k))) number[*u] = k;
  }
  std::set<std::pair<int, std::string>> out;
  for (const auto& g : gs) out.insert({number.at(g.intended), p.groups.at(g.group).label});
  return out;
}

}  // namespace

TEST_CASE("monomial basis size, order and nesting") {
  CHECK(monomial_basis(3, 1) == std::vector<ExponentVector>{{1, 1, 1}});
  const auto b2 = monomial_basis(3, 2);
  CHECK(b2.size() == 8);
  CHECK(b2.front() == ExponentVector{1, 1, 1});
  CHECK(b2[1] == ExponentVector{1, 1, 2});
  CHECK(b2.back() == ExponentVector{2, 2, 2});
  CHECK(std::is_sorted(b2.begin(), b2.end()));
  for (std::size_t g = 1; g <= 20; ++g) {
    for (int n = 1; n <= 4; ++n) {
      BigInt expect = 1;
      for (std::size_t i = 0; i < g; ++i) expect *= n;
      CHECK(basis_size(g, n) == expect);
      if (expect <= BigInt(kBasisLimit)) {
        const auto b = monomial_basis(g, n);
        CHECK(BigInt(b.size()) == expect);
        CHECK(std::set<ExponentVector>(b.begin(), b.end()).size() == b.size());
        for (const auto& e : b) CHECK(in_range(e, n));
        if (n < 4) {
          for (const auto& e : b) CHECK(in_range(e, n + 1));
        }
      } else {
        CHECK_THROWS_AS(monomial_basis(g, n), std::length_error);
      }
    }
  }
  CHECK_THROWS_AS(monomial_basis(0, 2), std::invalid_argument);
  CHECK_THROWS_AS(monomial_basis(3, 0), std::invalid_argument);
  CHECK_FALSE(in_range({1, 3}, 2));
  CHECK_FALSE(in_range({0, 1}, 2));
}

TEST_CASE("phase schedule") {
  const auto t = torus();
  const BsIndex b20 = t->bs_index(Coord{2, 0});
  CHECK(phase_partner(*t, 1, b20) == t->user_index(Coord{1, 1}));
  CHECK_THROWS_AS(phase_partner(*t, 0, b20), std::invalid_argument);
  CHECK_THROWS_AS(phase_partner(*t, 5, b20), std::invalid_argument);
  std::map<std::pair<UserIndex, BsIndex>, int> seen;
  for (int phase = 1; phase <= 4; ++phase) {
    std::set<UserIndex> served;
    for (BsIndex b = 0; b < t->num_bss(); ++b) {
      const auto u = phase_partner(*t, phase, b);
      REQUIRE(u.has_value());
      CHECK(t->connected(*u, b));
      CHECK(served.insert(*u).second);
      CHECK(phase_server(*t, phase, *u) == b);
      ++seen[{*u, b}];
    }
    CHECK(served.size() == static_cast<std::size_t>(t->num_users()));
  }
  CHECK(seen.size() == static_cast<std::size_t>(t->num_edges()));
  for (const auto& kv : seen) CHECK(kv.second == 1);
  // Off the edge of a non-wrapping patch.
  const auto p = patch();
  CHECK_FALSE(phase_partner(*p, 1, p->bs_index(Coord{-2, 4})).has_value());
}

TEST_CASE("quarter focus instance dimensions") {
  const auto t = patch();
  const UserIndex u5 = t->user_index(Coord{1, 1});
  const auto s1 = build_quarter_scheme(t, 1, u5);
  CHECK(s1.M == 1);
  CHECK(s1.N == 9);
  const auto s2 = build_quarter_scheme(t, 2, u5);
  CHECK(s2.M == 8);
  CHECK(s2.N == 35);
  REQUIRE(s2.phases.size() == 4);
  for (const auto& ph : s2.phases) {
    CHECK(ph.generators.size() == 3);
    CHECK(ph.desired_bs == phase_server(*t, ph.phase, u5));
    std::set<BsIndex> gens;
    for (const auto& g : ph.generators.items) {
      CHECK(g.kind == Generator::Raw);
      CHECK(g.user == u5);
      gens.insert(g.bs);
    }
    std::set<BsIndex> others(t->neighbors_of_user(u5).begin(), t->neighbors_of_user(u5).end());
    others.erase(ph.desired_bs);
    CHECK(gens == others);
  }
  CHECK_THROWS_AS(build_quarter_scheme(t, 1, 999), std::out_of_range);
  const auto all = build_quarter_scheme(torus(), 1, std::nullopt);
  REQUIRE_FALSE(all.phases.empty());
  CHECK(all.phases[0].generators.size() == 3u * 16u);
}

TEST_CASE("half focus instance on the 3x3 patch matches the listed sets") {
  const auto t = patch();
  const UserIndex u5 = t->user_index(Coord{1, 1});
  const auto s = build_half_scheme(t, 1, u5);
  const Placement& p = *s.placement;
  CHECK(s.interference.size() == 32);
  CHECK(s.desired.size() == 6);
  const std::set<std::pair<int, std::string>> neutralized = {{2, "A1"}, {8, "A2"}, {4, "A3"}, {6, "A4"}};
  CHECK(labelled(s.neutralized, *t, p) == neutralized);
  const std::set<std::pair<int, std::string>> zeroed = {{7, "A1"}, {8, "A1"}, {9, "A1"}, {1, "A2"},
                                                          {2, "A2"}, {3, "A2"}, {3, "A3"}, {6, "A3"},
                                                          {9, "A3"}, {1, "A4"}, {4, "A4"}, {7, "A4"}};
  CHECK(labelled(s.zeroed, *t, p) == zeroed);
  const auto j = labelled(s.interference, *t, p);
  const std::map<std::string, std::set<int>> expect = {{"A1", {1, 3, 4, 6}},
                                                       {"A2", {4, 6, 7, 9}},
                                                       {"A3", {1, 2, 7, 8}},
                                                       {"A4", {2, 3, 8, 9}},
                                                       {"A5", {1, 2, 3, 4, 6, 7, 8, 9}},
                                                       {"A6", {1, 2, 3, 4, 6, 7, 8, 9}}};
  for (const auto& [label, users] : expect) {
    std::set<int> got;
    for (const auto& [k, l] : j) {
      if (l == label) got.insert(k);
    }
    CHECK_MESSAGE(got == users, label);
  }
}

TEST_CASE("half micro-instances") {
  const auto t = torus();
  const UserIndex u = t->user_index(Coord{1, 1});
  const auto whole = build_half_scheme(t, 1, u);
  const auto micro = micro_generators(whole, 3);
  REQUIRE(micro.size() == 3);
  std::set<int> groups;
  for (const auto& g : micro) groups.insert(g.group);
  CHECK(groups.size() == 3);

  HalfOptions opts;
  opts.generators = micro;
  CHECK_THROWS_AS(build_half_scheme(t, 1, u, opts), std::invalid_argument);
  opts.allow_truncation = true;
  const auto m1 = build_half_scheme(t, 1, u, opts);
  CHECK(m1.M == 1);
  CHECK(m1.N == 14);
  CHECK(m1.truncation_override);
  const auto m2 = build_half_scheme(t, 2, u, opts);
  CHECK(m2.M == 8);
  CHECK(m2.N == 75);

  // The full focus set is far beyond the numeric budget.
  CHECK(whole.N > kDimensionBudget);
  CHECK_THROWS_AS(realize(whole, 1), std::length_error);
  const Realization r = realize(m2, 4);
  REQUIRE(r.decoding.size() == 1);
  CHECK(r.decoding[0].rows() == 75);
  CHECK(r.decoding[0].cols() == 75);
  CHECK(r.expected_rank[0] == 75);
}

TEST_CASE("realized quarter columns are products of generator powers") {
  const auto t = patch();
  const UserIndex u5 = t->user_index(Coord{1, 1});
  const auto s = build_quarter_scheme(t, 1, u5);
  const Realization r = realize(s, 8);
  REQUIRE(r.decoding.size() == 4);
  const auto& ph = s.phases[0];
  std::vector<DiagChannel> gens;
  for (const auto& g : ph.generators.items) gens.push_back(generator_values(r, nullptr, g));
  const auto cols = realize_columns(gens, monomial_basis(3, 2));
  REQUIRE(cols.rows() == 9);
  REQUIRE(cols.cols() == 8);
  for (int row = 0; row < 9; ++row) {
    Complex prod = gens[0][row] * gens[1][row] * gens[2][row];
    CHECK(std::abs(cols(row, 0) - prod) < 1e-12 * std::abs(prod));
  }
}

TEST_CASE("full cooperation zero-forcing") {
  const auto t = torus();
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const ChannelSet cs = draw_channels(*t, 1, seed);
    const FullZf z = build_full_zf(cs);
    CHECK(z.rank == 16);
    CHECK(z.expected_rank == 16);
    const Eigen::MatrixXcd prod = z.network * z.precoder;
    CHECK((prod - Eigen::MatrixXcd::Identity(16, 16)).cwiseAbs().maxCoeff() < 1e-9);
  }
  const auto s = build_full_scheme(t);
  CHECK(s.M == 1);
  CHECK(s.N == 1);
}

TEST_CASE("U design rejects non-grid topologies") {
  const Topology f = load_topology(testing::read_json("two_user_topology.json"));
  const Placement p = load_placement(testing::read_json("two_user_placement.json"), f);
  CHECK_THROWS(build_factor_design(f, p, 1));
}
