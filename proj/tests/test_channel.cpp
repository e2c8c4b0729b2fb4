// Copyright 2026 The cachedof Authors
// SPDX-License-Identifier: Apache-2.0

#include "cachedof/cache_placement.hpp"
#include "cachedof/channel_model.hpp"
#include "cachedof/linalg.hpp"
#include "cachedof/precoder.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace cachedof;

namespace {

struct Patch {
  Topology t = make_grid(testing::patch3x3());
  Placement half = place(t, PlacementMode::Half);
  UserIndex user(int k) const { return t.user_index(testing::patch_user(k)); }
  BsIndex bs(char c) const { return t.bs_index(testing::patch_bs(c)); }
};

bool all_zero(const DiagChannel& v) {
  for (const auto& x : v) {
    if (x.real() != 0.0 || x.imag() != 0.0) return false;
  }
  return true;
}

// Reference sum of H*U products with plain complex arithmetic.
DiagChannel reference_g(const ChannelSet& cs, const FactorDesign& ud, UserIndex target, int group, UserIndex intended) {
  const auto pair = shared_pair(cs.topology(), ud.placement(), target, group);
  DiagChannel out(cs.extensions(), Complex(0, 0));
  for (BsIndex b : pair) {
    const auto u = ud.values(cs, intended, group, b);
    const auto& h = cs.h(target, b);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += h[i] * u[i];
  }
  return out;
}

}  // namespace

TEST_CASE("draw_channels determinism and shape") {
  const Topology t = make_grid(testing::patch3x3());
  const ChannelSet a = draw_channels(t, 9, 42);
  const ChannelSet b = draw_channels(t, 9, 42);
  const ChannelSet c = draw_channels(t, 9, 43);
  const ChannelSet longer = draw_channels(t, 20, 42);
  for (UserIndex u = 0; u < t.num_users(); ++u) {
    for (BsIndex x : t.neighbors_of_user(u)) {
      CHECK(a.h(u, x).size() == 9);
      CHECK(a.h(u, x) == b.h(u, x));
      CHECK(a.h(u, x) != c.h(u, x));
      CHECK(std::equal(a.h(u, x).begin(), a.h(u, x).end(), longer.h(u, x).begin()));
    }
  }
  CHECK_THROWS_AS(draw_channels(t, 0, 1), std::invalid_argument);
  const UserIndex u5 = t.user_index(Coord{1, 1});
  CHECK_THROWS_AS(a.h(u5, t.bs_index(Coord{4, 4})), std::out_of_range);
  CHECK(dump_channels(a)["edges"].size() == static_cast<std::size_t>(t.num_edges()));
}

TEST_CASE("draw statistics: zero mean, unit variance, uncorrelated edges") {
  const Topology t = make_grid({4, 4, true});
  const std::size_t n = 4000;
  const ChannelSet cs = draw_channels(t, n, 7);
  Complex mean(0, 0);
  double power = 0.0, count = 0.0;
  for (UserIndex u = 0; u < t.num_users(); ++u) {
    for (BsIndex b : t.neighbors_of_user(u)) {
      for (const auto& x : cs.h(u, b)) {
        mean += x;
        power += std::norm(x);
        count += 1.0;
      }
    }
  }
  CHECK(std::abs(mean / count) < 0.02);
  CHECK(std::abs(power / count - 1.0) < 0.02);
  const auto& h0 = cs.h(0, t.neighbors_of_user(0)[0]);
  const auto& h1 = cs.h(0, t.neighbors_of_user(0)[1]);
  Complex corr(0, 0);
  for (std::size_t i = 0; i < n; ++i) corr += h0[i] * std::conj(h1[i]);
  CHECK(std::abs(corr) / static_cast<double>(n) < 0.05);
}

TEST_CASE("submatrix sparsity") {
  const Topology f = load_topology(testing::read_json("two_user_topology.json"));
  const ChannelSet cs = draw_channels(f, 2, 3);
  const UserIndex u1 = f.user_index(std::string("1")), u2 = f.user_index(std::string("2"));
  const BsIndex a = f.bs_index(std::string("a")), b = f.bs_index(std::string("b")), c = f.bs_index(std::string("c"));
  const auto m = submatrix(cs, {u1, u2}, {a, c}, 1);
  CHECK(m(0, 1) == Complex(0, 0));
  CHECK(m(1, 0) == Complex(0, 0));
  CHECK(m(0, 0) == cs.h(u1, a)[1]);
  CHECK(numeric_rank(m) == 2);
  CHECK(numeric_rank(submatrix(cs, {u1}, {c}, 0)) == 0);
  CHECK(numeric_rank(submatrix(cs, {u1, u2}, {a, b}, 0)) == 2);
  CHECK_THROWS_AS(submatrix(cs, {u1}, {a}, 2), std::out_of_range);

  const Topology t = make_grid({4, 4, true});
  const ChannelSet g = draw_channels(t, 1, 5);
  std::vector<UserIndex> all_u(t.num_users());
  std::vector<BsIndex> all_b(t.num_bss());
  for (int i = 0; i < t.num_users(); ++i) all_u[i] = i;
  for (int i = 0; i < t.num_bss(); ++i) all_b[i] = i;
  const auto full = submatrix(g, all_u, all_b, 0);
  for (int r = 0; r < full.rows(); ++r) {
    int nz = 0;
    for (int col = 0; col < full.cols(); ++col) {
      const bool edge = t.connected(r, col);
      CHECK(edge == (full(r, col) != Complex(0, 0)));
      nz += edge;
    }
    CHECK(nz == 4);
  }
}

TEST_CASE("U design follows the zero-forcing table at the centre user") {
  Patch p;
  const FactorDesign ud = build_factor_design(p.t, p.half, 11);
  const int a1 = p.half.group_index("A1"), a5 = p.half.group_index("A5");
  const UserIndex u5 = p.user(5), u2 = p.user(2);

  const FactorEntry ea = ud.entry(u5, a1, p.bs('a'));
  CHECK(ea.kind == FactorKind::ZfMember);
  CHECK(ea.partner == u2);
  CHECK(ea.channel_bs == p.bs('b'));
  CHECK(ea.sign == 1);
  const FactorEntry eb = ud.entry(u5, a1, p.bs('b'));
  CHECK(eb.kind == FactorKind::ZfMember);
  CHECK(eb.partner == u2);
  CHECK(eb.channel_bs == p.bs('a'));
  CHECK(eb.sign == -1);

  // Row q = 4 also belongs to A1 but is off the zero-forcing line.
  for (BsIndex b : p.half.groups[a1].members) {
    if (p.t.bs_coord(b).y != 0) CHECK(ud.entry(u5, a1, b).kind == FactorKind::Zero);
  }
  for (BsIndex b : p.half.groups[a5].members) CHECK(ud.entry(u5, a5, b).kind == FactorKind::Random);

  // Signal of user 2 in A1 uses +H_{5,b} at a, -H_{5,a} at b.
  const FactorEntry e2 = ud.entry(u2, a1, p.bs('a'));
  CHECK(e2.kind == FactorKind::ZfMember);
  CHECK(e2.partner == u5);
  CHECK(e2.channel_bs == p.bs('b'));
  CHECK(e2.sign == 1);
  CHECK(ud.entry(u2, a1, p.bs('b')).sign == -1);
}

TEST_CASE("effective channels at the centre user") {
  Patch p;
  const FactorDesign ud = build_factor_design(p.t, p.half, 11);
  const ChannelSet cs = draw_channels(p.t, 16, 99);
  const int a1 = p.half.group_index("A1"), a5 = p.half.group_index("A5");
  const UserIndex u5 = p.user(5);

  const auto g2 = effective_channel(cs, ud, u5, a1, p.user(2));
  CHECK(g2.tag == EffectiveTag::Neutralized);
  CHECK(all_zero(g2.values));
  CHECK(g2.term_scale > 0.0);
  const auto g8 = effective_channel(cs, ud, u5, a1, p.user(8));
  CHECK(g8.tag == EffectiveTag::Zeroed);
  CHECK(all_zero(g8.values));
  const auto g1 = effective_channel(cs, ud, u5, a5, p.user(1));
  CHECK(g1.tag == EffectiveTag::Generic);
  CHECK_FALSE(all_zero(g1.values));
  const auto gd = effective_channel(cs, ud, u5, a1, u5);
  CHECK(gd.tag == EffectiveTag::Desired);
  CHECK_FALSE(all_zero(gd.values));

  for (const auto& g : {g1, gd}) {
    const auto ref = reference_g(cs, ud, u5, g.group, g.intended);
    for (std::size_t i = 0; i < ref.size(); ++i) CHECK(std::abs(ref[i] - g.values[i]) <= 1e-12 * (1 + std::abs(ref[i])));
  }

  // Quarter groups meet the four corners in one BS, not two.
  const Placement quarter = place(p.t, PlacementMode::Quarter);
  CHECK_THROWS_AS(shared_pair(p.t, quarter, u5, 0), std::invalid_argument);
}

TEST_CASE("effective channel is linear in the U entries") {
  Patch p;
  const FactorDesign ud = build_factor_design(p.t, p.half, 3);
  const ChannelSet cs = draw_channels(p.t, 8, 5);
  const int a5 = p.half.group_index("A5");
  const UserIndex u5 = p.user(5), v = p.user(3);
  const auto pair = shared_pair(p.t, p.half, u5, a5);
  const Complex c(0.75, -1.25);
  const auto g = effective_channel(cs, ud, u5, a5, v);
  DiagChannel scaled(cs.extensions(), Complex(0, 0));
  for (BsIndex b : pair) {
    auto u = ud.values(cs, v, a5, b);
    for (auto& x : u) x *= c;
    for (std::size_t i = 0; i < scaled.size(); ++i) scaled[i] += cs.h(u5, b)[i] * u[i];
  }
  for (std::size_t i = 0; i < scaled.size(); ++i) CHECK(std::abs(scaled[i] - c * g.values[i]) < 1e-12);
}

TEST_CASE("Neutralized and zeroed channels cancel exactly is exact on the torus for many seeds") {
  const Topology t = make_grid({4, 4, true});
  const Placement half = place(t, PlacementMode::Half);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const FactorDesign ud = build_factor_design(t, half, seed);
    const ChannelSet cs = draw_channels(t, 6, seed);
    for (UserIndex target = 0; target < t.num_users(); ++target) {
      for (int k = 0; k < 6; ++k) {
        for (UserIndex v = 0; v < t.num_users(); ++v) {
          const auto tag = classify(ud, target, k, v);
          if (tag == EffectiveTag::Neutralized || tag == EffectiveTag::Zeroed) {
            CHECK(all_zero(effective_channel(cs, ud, target, k, v).values));
          }
        }
      }
    }
  }
}

TEST_CASE("perturbing a zero-forcing entry breaks the cancellation") {
  Patch p;
  FactorDesign ud = build_factor_design(p.t, p.half, 11);
  const ChannelSet cs = draw_channels(p.t, 4, 1);
  const int a1 = p.half.group_index("A1");
  ud.perturb(p.user(2), a1, p.bs('a'), Complex(1e-6, 0));
  CHECK_FALSE(all_zero(effective_channel(cs, ud, p.user(5), a1, p.user(2)).values));
}

TEST_CASE("polynomial algebra") {
  const Variable x = gain_var(0, 1), y = gain_var(1, 0), z = factor_var(2, 3, 4);
  const Polynomial px{{{1, {x}}}}, py{{{1, {y}}}}, pz{{{1, {z}}}};
  const Polynomial xy = multiply(px, py);
  const Polynomial yx = multiply(py, px);
  CHECK(xy == yx);
  const Polynomial neg{{{-1, {y, x}}}};
  CHECK(add(xy, neg).is_zero());
  const Polynomial f = add(multiply(xy, pz), multiply(px, px));  // x*y*z + x^2
  Assignment at{{x, Complex(1.5, 0.5)}, {y, Complex(-0.25, 2.0)}, {z, Complex(0.3, -0.7)}};
  const Complex val = at[x] * at[y] * at[z] + at[x] * at[x];
  CHECK(std::abs(evaluate(f, at) - val) < 1e-14);
  // Holomorphic derivative against a central difference.
  const double h = 1e-6;
  Assignment up = at, dn = at;
  up[x] += h;
  dn[x] -= h;
  const Complex fd = (evaluate(f, up) - evaluate(f, dn)) / (2 * h);
  CHECK(std::abs(derivative(f, x, at) - fd) < 1e-6);
  CHECK(std::abs(derivative(f, x, at) - (at[y] * at[z] + 2.0 * at[x])) < 1e-14);
  CHECK(variables_of(f).size() == 3);
}
