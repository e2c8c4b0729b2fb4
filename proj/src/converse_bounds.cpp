// Copyright 2026 The cachedof Authors
// SPDX-License-Identifier: Apache-2.0

#include "cachedof/converse_bounds.hpp"

#include "cachedof/linalg.hpp"
#include "cachedof/simplex.hpp"

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/max_cardinality_matching.hpp>

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>

namespace cachedof {

std::string to_string(DofSource s) {
  switch (s) {
    case DofSource::AchievableClosedForm: return "achievable-closed-form";
    case DofSource::AchievableConstructed: return "achievable-constructed";
    case DofSource::UpperClosedForm: return "upper-closed-form";
    case DofSource::UpperLp: return "upper-lp";
    case DofSource::Baseline: return "baseline";
  }
  return "baseline";
}

namespace {

// Calls f for every k-subset of {0..n-1}, in lexicographic order.
void for_each_combination(int n, int k, const std::function<void(const std::vector<int>&)>& f) {
  if (k < 0 || k > n) return;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    f(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

std::vector<BsIndex> neighbor_union(const Topology& topo, const std::vector<UserIndex>& r) {
  std::set<BsIndex> out;
  for (UserIndex u : r) out.insert(topo.neighbors_of_user(u).begin(), topo.neighbors_of_user(u).end());
  return {out.begin(), out.end()};
}

std::vector<UserIndex> users_hearing(const Topology& topo, const std::vector<BsIndex>& t) {
  std::set<UserIndex> out;
  for (BsIndex b : t) out.insert(topo.users_of_bs(b).begin(), topo.users_of_bs(b).end());
  return {out.begin(), out.end()};
}

void require_mu(const Rational& mu) {
  if (mu < make_rational(1, 4) || mu > 1) {
    throw std::invalid_argument("mu must lie in [1/4, 1], got " + to_string(mu));
  }
}

}  // namespace

std::vector<UserIndex> overhearing_users(const Topology& topo, const std::vector<UserIndex>& r, const std::vector<BsIndex>& t) {
  std::vector<UserIndex> out;
  for (UserIndex u : users_hearing(topo, t)) {
    if (std::find(r.begin(), r.end(), u) == r.end()) out.push_back(u);
  }
  return out;
}

int structural_rank(const Topology& topo, const std::vector<UserIndex>& r, const std::vector<BsIndex>& t) {
  using Graph = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS>;
  const int nr = static_cast<int>(r.size());
  Graph g(r.size() + t.size());
  for (int i = 0; i < nr; ++i) {
    for (int j = 0; j < static_cast<int>(t.size()); ++j) {
      if (topo.connected(r[i], t[j])) boost::add_edge(i, nr + j, g);
    }
  }
  std::vector<boost::graph_traits<Graph>::vertex_descriptor> mate(boost::num_vertices(g));
  boost::edmonds_maximum_cardinality_matching(g, &mate[0]);
  return static_cast<int>(boost::matching_size(g, &mate[0]));
}

std::vector<RtPair> enumerate_rt_pairs(const Topology& topo, const ChannelSet& cs, int max_size, RankTest test) {
  std::vector<RtPair> out;
  for (int s = 1; s <= max_size; ++s) {
    for_each_combination(topo.num_users(), s, [&](const std::vector<int>& ri) {
      const std::vector<UserIndex> r(ri.begin(), ri.end());
      const auto cand = neighbor_union(topo, r);
      for_each_combination(static_cast<int>(cand.size()), s, [&](const std::vector<int>& ti) {
        std::vector<BsIndex> t;
        for (int x : ti) t.push_back(cand[x]);
        const int rank = test == RankTest::Numeric ? numeric_rank(submatrix(cs, r, t, 0)) : structural_rank(topo, r, t);
        if (rank == s) out.push_back({r, t, overhearing_users(topo, r, t)});
      });
    });
  }
  return out;
}

Inequality normalized(const Inequality& q) {
  if (q.rhs <= 0) throw std::invalid_argument("inequality needs a positive right-hand side");
  Inequality out;
  out.rhs = 1;
  for (const auto& [k, v] : q.coeffs) {
    if (v != 0) out.coeffs[k] = v / q.rhs;
  }
  return out;
}

std::string dof_var(const Topology& topo, UserIndex u, const CacheGroup& g) {
  return "d_{" + topo.user_id(u) + "," + g.label + "}";
}

std::vector<Inequality> region_inequalities(const Topology& topo, const Placement& p, const std::vector<RtPair>& s) {
  std::vector<Inequality> out;
  for (const auto& pair : s) {
    Inequality q;
    q.rhs = static_cast<long>(pair.r.size());
    for (UserIndex u : pair.r) {
      for (const auto& g : p.groups) q.coeffs[dof_var(topo, u, g)] += 1;
    }
    const auto inside = groups_within(p, pair.t);
    for (UserIndex u : pair.overhearing) {
      for (const auto& g : inside) q.coeffs[dof_var(topo, u, g)] += 1;
    }
    out.push_back(std::move(q));
  }
  return out;
}

std::optional<Rational> lp_max(const std::vector<Inequality>& ineqs, const std::map<std::string, Rational>& w) {
  std::map<std::string, std::size_t> index;
  for (const auto& q : ineqs) {
    for (const auto& kv : q.coeffs) index.emplace(kv.first, 0);
  }
  for (const auto& kv : w) index.emplace(kv.first, 0);
  std::size_t next = 0;
  for (auto& kv : index) kv.second = next++;

  std::vector<std::vector<Rational>> a;
  std::vector<Rational> b;
  for (const auto& q : ineqs) {
    std::vector<Rational> row(next, Rational(0));
    for (const auto& [k, v] : q.coeffs) row[index[k]] = v;
    a.push_back(std::move(row));
    b.push_back(q.rhs);
  }
  std::vector<Rational> c(next, Rational(0));
  for (const auto& [k, v] : w) c[index[k]] = v;
  const LpResult res = maximize(a, b, c);
  if (res.status == LpResult::Unbounded) return std::nullopt;
  return res.value;
}

std::vector<Inequality> remove_redundant(const std::vector<Inequality>& ineqs) {
  std::vector<Inequality> kept;
  std::vector<Inequality> kept_norm;
  for (const auto& q : ineqs) {
    const Inequality nq = normalized(q);
    if (std::find(kept_norm.begin(), kept_norm.end(), nq) != kept_norm.end()) continue;
    kept.push_back(q);
    kept_norm.push_back(nq);
  }
  std::size_t i = 0;
  while (i < kept.size()) {
    std::vector<Inequality> others;
    for (std::size_t j = 0; j < kept.size(); ++j) {
      if (j != i) others.push_back(kept[j]);
    }
    const auto best = others.empty() ? std::nullopt : lp_max(others, kept[i].coeffs);
    if (best && *best <= kept[i].rhs) {
      kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
      ++i;
    }
  }
  return kept;
}

nlohmann::json region_to_json(const std::vector<Inequality>& ineqs) {
  auto out = nlohmann::json::array();
  for (const auto& q : ineqs) {
    nlohmann::json coeffs = nlohmann::json::object();
    for (const auto& [k, v] : q.coeffs) coeffs[k] = to_string(v);
    out.push_back({{"coeffs", std::move(coeffs)}, {"rhs", to_string(q.rhs)}});
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<CandidateSet> candidate_sets(const Topology& grid) {
  if (!grid.is_grid()) throw std::invalid_argument("candidate sets need a grid topology");
  std::vector<std::vector<int>> class_sets = {{1}, {2}, {3}, {4}};
  for (int a = 1; a <= 4; ++a) {
    for (int b = a + 1; b <= 4; ++b) class_sets.push_back({a, b});
  }
  for (int skip = 1; skip <= 4; ++skip) {
    std::vector<int> s;
    for (int k = 1; k <= 4; ++k) {
      if (k != skip) s.push_back(k);
    }
    class_sets.push_back(s);
  }
  class_sets.push_back({1, 2, 3, 4});

  std::vector<CandidateSet> out;
  for (auto& cls : class_sets) {
    CandidateSet c;
    c.classes = cls;
    for (BsIndex b = 0; b < grid.num_bss(); ++b) {
      if (std::find(cls.begin(), cls.end(), bs_class(grid.bs_coord(b))) != cls.end()) c.bss.push_back(b);
    }
    out.push_back(std::move(c));
  }
  return out;
}

Rational overhear_ratio(const Topology& grid, const CandidateSet& c, const ChannelSet* cs) {
  const int k = static_cast<int>(c.classes.size());
  std::vector<UserIndex> r;
  for (UserIndex u = 0; u < grid.num_users(); ++u) {
    if (user_class(grid.user_coord(u)) <= k) r.push_back(u);
  }
  if (r.size() != c.bss.size()) throw std::runtime_error("user and BS class unions differ in size");
  const int rank = cs ? numeric_rank(submatrix(*cs, r, c.bss, 0)) : structural_rank(grid, r, c.bss);
  if (rank != static_cast<int>(r.size())) throw std::runtime_error("class-union channel is rank deficient");
  const auto overhearing = overhearing_users(grid, r, c.bss);
  return Rational(static_cast<long>(overhearing.size()), static_cast<long>(r.size()));
}

Rational fraction_within(const Placement& p, const std::vector<BsIndex>& t, int num_bss) {
  std::vector<bool> mask(num_bss, false);
  for (BsIndex b : t) mask.at(b) = true;
  Rational sum = 0;
  for (const auto& g : groups_within(p, mask)) sum += g.fraction;
  return sum;
}

std::string split_var(PlacementMode m) { return "d_" + to_string(m); }

SymmetricSystem memory_sharing_inequalities(const Rational& mu, const Topology* grid) {
  require_mu(mu);
  const MixturePlan plan = memory_share(mu);
  Topology local;
  if (grid == nullptr) {
    local = make_grid({4, 4, true});
    grid = &local;
  }
  const Placement low = place(*grid, plan.low_mode);
  const Placement high = place(*grid, plan.high_mode);

  SymmetricSystem sys;
  sys.mu = mu;
  sys.low_weight = plan.low_weight;
  sys.low_mode = plan.low_mode;
  sys.high_mode = plan.high_mode;
  for (const auto& c : candidate_sets(*grid)) {
    const Rational ratio = overhear_ratio(*grid, c);
    Inequality q;
    q.rhs = 1;
    q.coeffs[split_var(plan.low_mode)] = 1 + ratio * fraction_within(low, c.bss, grid->num_bss());
    q.coeffs[split_var(plan.high_mode)] = 1 + ratio * fraction_within(high, c.bss, grid->num_bss());
    if (std::find(sys.rows.begin(), sys.rows.end(), q) == sys.rows.end()) sys.rows.push_back(std::move(q));
  }
  return sys;
}

Rational solve_symmetric_dof(const SymmetricSystem& sys) {
  // Substitute the coupling: (d_low, d_high) = x * (alpha, beta).
  Rational alpha = 1, beta = 0;
  if (sys.low_weight == 0) {
    alpha = 0;
    beta = 1;
  } else if (sys.low_weight != 1) {
    beta = (1 - sys.low_weight) / sys.low_weight;
  }
  const std::string lo = split_var(sys.low_mode), hi = split_var(sys.high_mode);
  std::vector<std::vector<Rational>> a;
  std::vector<Rational> b;
  for (const auto& q : sys.rows) {
    auto coef = [&](const std::string& name) {
      auto it = q.coeffs.find(name);
      return it == q.coeffs.end() ? Rational(0) : it->second;
    };
    a.push_back({alpha * coef(lo) + beta * coef(hi)});
    b.push_back(q.rhs);
  }
  const LpResult res = maximize(a, b, {alpha + beta});
  if (res.status != LpResult::Optimal) throw std::runtime_error("symmetric DoF program is unbounded");
  return res.value;
}

DofPoint closed_form_lower(const Rational& mu) {
  require_mu(mu);
  DofPoint p{mu, 0, DofSource::AchievableClosedForm};
  if (mu < make_rational(1, 2)) {
    p.inv_d = make_rational(17, 6) - make_rational(10, 3) * mu;
  } else {
    p.inv_d = make_rational(4, 3) - mu / 3;
  }
  return p;
}

DofPoint closed_form_upper(const Rational& mu) {
  require_mu(mu);
  DofPoint p{mu, 0, DofSource::UpperClosedForm};
  if (mu < make_rational(1, 2)) {
    const Rational a = Rational(2) / (5 - 6 * mu);
    const Rational b = Rational(6) / (11 - 8 * mu);
    const Rational d = a < b ? a : b;
    p.inv_d = 1 / d;
  } else {
    p.inv_d = make_rational(4, 3) - mu / 3;
  }
  return p;
}

DofPoint baseline_dof(const Rational& mu) {
  require_mu(mu);
  DofPoint p{mu, 0, DofSource::Baseline};
  p.inv_d = mu < make_rational(1, 2) ? Rational(6 - 8 * mu) : Rational(3 - 2 * mu);
  return p;
}

Rational gap(const Rational& mu) { return closed_form_upper(mu).d() - closed_form_lower(mu).d(); }

// ---------------------------------------------------------------------------

std::optional<Rational> cut_weight(const Topology& grid, const Placement& p, const std::vector<BsIndex>& t) {
  if (t.empty()) return std::nullopt;
  const auto heard = users_hearing(grid, t);
  if (structural_rank(grid, heard, t) != static_cast<int>(t.size())) return std::nullopt;
  const Rational ratio(static_cast<long>(heard.size() - t.size()), static_cast<long>(t.size()));
  return ratio * fraction_within(p, t, grid.num_bss());
}

CandidateOracleReport candidate_oracle(const Topology& grid, const Placement& p, const ChannelSet* cs, int exhaustive_limit) {
  CandidateOracleReport rep;
  const auto cands = candidate_sets(grid);
  bool first = true;
  for (const auto& c : cands) {
    const auto weight = cut_weight(grid, p, c.bss);
    if (!weight) throw std::runtime_error("candidate set admits no full-rank user set");
    if (first || *weight > rep.candidate_max) rep.candidate_max = *weight;
    first = false;
    const int k = static_cast<int>(c.classes.size());
    const Rational ratio = overhear_ratio(grid, c, cs);
    auto it = rep.ratios.find(k);
    if (it != rep.ratios.end() && it->second != ratio) throw std::runtime_error("ratio depends on the candidate");
    rep.ratios[k] = ratio;
  }

  std::vector<int> cls(grid.num_bss());
  for (BsIndex b = 0; b < grid.num_bss(); ++b) cls[b] = bs_class(grid.bs_coord(b));
  first = true;
  for (int mask = 1; mask < 16; ++mask) {
    std::vector<BsIndex> t;
    for (BsIndex b = 0; b < grid.num_bss(); ++b) {
      if (mask & (1 << (cls[b] - 1))) t.push_back(b);
    }
    const auto weight = cut_weight(grid, p, t);
    if (weight && (first || *weight > rep.structured_max)) {
      rep.structured_max = *weight;
      first = false;
    }
  }

  rep.exhaustive_max = rep.structured_max;
  if (grid.num_bss() <= exhaustive_limit) {
    const std::uint64_t total = std::uint64_t{1} << grid.num_bss();
    for (std::uint64_t mask = 1; mask < total; ++mask) {
      std::vector<BsIndex> t;
      for (BsIndex b = 0; b < grid.num_bss(); ++b) {
        if (mask & (std::uint64_t{1} << b)) t.push_back(b);
      }
      ++rep.subsets_checked;
      // Sets holding no whole group weigh 0, which the full BS set already attains.
      if (fraction_within(p, t, grid.num_bss()) == 0) continue;
      const auto weight = cut_weight(grid, p, t);
      if (weight && *weight > rep.exhaustive_max) rep.exhaustive_max = *weight;
    }
  }
  rep.argmax_in_candidates = rep.exhaustive_max == rep.candidate_max && rep.structured_max == rep.candidate_max;
  return rep;
}

}  // namespace cachedof
