// Copyright 2026 The cachedof Authors
// SPDX-License-Identifier: Apache-2.0

#include "cachedof/channel_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cachedof {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double open_unit(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t key_base(std::uint64_t seed, const std::array<std::uint64_t, 4>& key) {
  std::uint64_t x = splitmix64(seed);
  for (std::uint64_t k : key) x = splitmix64(x ^ k);
  return x;
}

Complex gaussian_from_base(std::uint64_t base, std::uint64_t index) {
  const double u1 = open_unit(splitmix64(base ^ (2 * index)));
  const double u2 = open_unit(splitmix64(base ^ (2 * index + 1) ^ 0xA5A5A5A5A5A5A5A5ULL));
  // Box-Muller scaled to variance 1/2 per component.
  const double r = std::sqrt(-std::log(u1));
  const double th = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(th), r * std::sin(th)};
}

constexpr std::uint64_t kChannelStream = 1;
constexpr std::uint64_t kPrecoderStream = 2;

}  // namespace

Complex gaussian_at(std::uint64_t seed, const std::array<std::uint64_t, 4>& key, std::uint64_t index) {
  return gaussian_from_base(key_base(seed, key), index);
}

DiagChannel random_diag(std::uint64_t seed, const std::array<std::uint64_t, 4>& key, std::size_t n) {
  const std::uint64_t base = key_base(seed, key);
  DiagChannel out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = gaussian_from_base(base, i);
  return out;
}

const DiagChannel& ChannelSet::h(UserIndex u, BsIndex b) const {
  const int e = topo_->edge_index(u, b);
  if (e < 0) {
    throw std::out_of_range("no channel between user " + topo_->user_id(u) + " and BS " + topo_->bs_id(b));
  }
  return edges_[e];
}

ChannelSet draw_channels(const Topology& t, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("symbol extension count must be at least 1");
  ChannelSet cs;
  cs.topo_ = &t;
  cs.n_ = n;
  cs.seed_ = seed;
  cs.edges_.resize(t.num_edges());
  for (UserIndex u = 0; u < t.num_users(); ++u) {
    for (BsIndex b : t.neighbors_of_user(u)) {
      const std::array<std::uint64_t, 4> key{kChannelStream, static_cast<std::uint64_t>(u),
                                             static_cast<std::uint64_t>(b), 0};
      cs.edges_[t.edge_index(u, b)] = random_diag(seed, key, n);
    }
  }
  return cs;
}

Eigen::MatrixXcd submatrix(const ChannelSet& cs, const std::vector<UserIndex>& r, const std::vector<BsIndex>& t,
                           std::size_t ext) {
  if (ext >= cs.extensions()) throw std::out_of_range("symbol extension index out of range");
  const Topology& topo = cs.topology();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(r.size()), static_cast<Eigen::Index>(t.size()));
  for (std::size_t i = 0; i < r.size(); ++i) {
    for (std::size_t j = 0; j < t.size(); ++j) {
      if (topo.connected(r[i], t[j])) m(i, j) = cs.h(r[i], t[j])[ext];
    }
  }
  return m;
}

nlohmann::json dump_channels(const ChannelSet& cs) {
  const Topology& t = cs.topology();
  nlohmann::json doc;
  doc["seed"] = cs.seed();
  doc["N"] = cs.extensions();
  auto edges = nlohmann::json::array();
  for (UserIndex u = 0; u < t.num_users(); ++u) {
    for (BsIndex b : t.neighbors_of_user(u)) {
      auto vals = nlohmann::json::array();
      for (const Complex& z : cs.h(u, b)) vals.push_back({z.real(), z.imag()});
      edges.push_back({{"user", t.user_id(u)}, {"bs", t.bs_id(b)}, {"values", std::move(vals)}});
    }
  }
  doc["edges"] = std::move(edges);
  return doc;
}

// ---------------------------------------------------------------------------

Variable gain_var(UserIndex user, BsIndex bs) { return {Variable::Gain, user, bs, 0}; }
Variable factor_var(UserIndex intended, int group, BsIndex bs) { return {Variable::Factor, intended, group, bs}; }

Polynomial simplify(Polynomial p) {
  for (auto& term : p.terms) std::sort(term.factors.begin(), term.factors.end());
  std::sort(p.terms.begin(), p.terms.end(), [](const Term& a, const Term& b) { return a.factors < b.factors; });
  Polynomial out;
  for (auto& term : p.terms) {
    if (!out.terms.empty() && out.terms.back().factors == term.factors) {
      out.terms.back().coef += term.coef;
    } else {
      out.terms.push_back(std::move(term));
    }
  }
  std::erase_if(out.terms, [](const Term& t) { return t.coef == 0; });
  return out;
}

Polynomial multiply(const Polynomial& a, const Polynomial& b) {
  Polynomial out;
  for (const auto& x : a.terms) {
    for (const auto& y : b.terms) {
      Term t;
      t.coef = x.coef * y.coef;
      t.factors = x.factors;
      t.factors.insert(t.factors.end(), y.factors.begin(), y.factors.end());
      out.terms.push_back(std::move(t));
    }
  }
  return simplify(std::move(out));
}

Polynomial add(const Polynomial& a, const Polynomial& b) {
  Polynomial out = a;
  out.terms.insert(out.terms.end(), b.terms.begin(), b.terms.end());
  return simplify(std::move(out));
}

bool operator==(const Polynomial& a, const Polynomial& b) {
  const Polynomial x = simplify(a), y = simplify(b);
  if (x.terms.size() != y.terms.size()) return false;
  for (std::size_t i = 0; i < x.terms.size(); ++i) {
    if (x.terms[i].coef != y.terms[i].coef || x.terms[i].factors != y.terms[i].factors) return false;
  }
  return true;
}

namespace {

Complex lookup(const Assignment& at, const Variable& v) {
  auto it = at.find(v);
  if (it == at.end()) throw std::out_of_range("variable missing from assignment");
  return it->second;
}

}  // namespace

Complex evaluate(const Polynomial& p, const Assignment& at) {
  Complex sum = 0.0;
  for (const auto& term : p.terms) {
    Complex prod = static_cast<double>(term.coef);
    for (const auto& f : term.factors) prod *= lookup(at, f);
    sum += prod;
  }
  return sum;
}

Complex derivative(const Polynomial& p, const Variable& x, const Assignment& at) {
  Complex sum = 0.0;
  for (const auto& term : p.terms) {
    const auto k = std::count(term.factors.begin(), term.factors.end(), x);
    if (k == 0) continue;
    Complex prod = static_cast<double>(term.coef) * static_cast<double>(k);
    bool skipped = false;
    for (const auto& f : term.factors) {
      if (f == x && !skipped) {
        skipped = true;
        continue;
      }
      prod *= lookup(at, f);
    }
    sum += prod;
  }
  return sum;
}

std::vector<Variable> variables_of(const Polynomial& p) {
  std::vector<Variable> vars;
  for (const auto& term : p.terms) vars.insert(vars.end(), term.factors.begin(), term.factors.end());
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  return vars;
}

std::string describe(const Variable& v, const Topology& t) {
  if (v.kind == Variable::Gain) return "h[" + t.user_id(v.a) + "," + t.bs_id(v.b) + "]";
  return "u[" + t.user_id(v.a) + ",A" + std::to_string(v.b + 1) + "," + t.bs_id(v.c) + "]";
}

std::string describe(const Polynomial& p, const Topology& t) {
  if (p.is_zero()) return "0";
  std::string s;
  for (std::size_t i = 0; i < p.terms.size(); ++i) {
    const auto& term = p.terms[i];
    if (term.coef < 0) {
      s += i == 0 ? "-" : " - ";
    } else if (i > 0) {
      s += " + ";
    }
    const int mag = term.coef < 0 ? -term.coef : term.coef;
    if (mag != 1) s += std::to_string(mag) + "*";
    for (std::size_t j = 0; j < term.factors.size(); ++j) {
      if (j > 0) s += "*";
      s += describe(term.factors[j], t);
    }
  }
  return s;
}

// ---------------------------------------------------------------------------

FactorDesign::FactorDesign(const Topology& t, const Placement& p, std::uint64_t seed)
    : topo_(&t), place_(&p), seed_(seed) {}

void FactorDesign::set(UserIndex intended, int group, BsIndex bs, FactorEntry e) {
  table_[{intended, group, bs}] = e;
}

FactorEntry FactorDesign::entry(UserIndex intended, int group, BsIndex bs) const {
  auto it = table_.find({intended, group, bs});
  return it == table_.end() ? FactorEntry{} : it->second;
}

void FactorDesign::perturb(UserIndex intended, int group, BsIndex bs, Complex eps) {
  perturb_[{intended, group, bs}] += eps;
}

DiagChannel FactorDesign::values(const ChannelSet& cs, UserIndex intended, int group, BsIndex bs) const {
  const std::size_t n = cs.extensions();
  const FactorEntry e = entry(intended, group, bs);
  DiagChannel out;
  switch (e.kind) {
    case FactorKind::Zero:
      out.assign(n, Complex(0.0, 0.0));
      break;
    case FactorKind::ZfMember:
      out = cs.h(e.partner, e.channel_bs);
      if (e.sign < 0) {
        for (auto& z : out) z = {-z.real(), -z.imag()};
      }
      break;
    case FactorKind::Random: {
      const std::array<std::uint64_t, 4> key{kPrecoderStream, static_cast<std::uint64_t>(intended),
                                             static_cast<std::uint64_t>(group), static_cast<std::uint64_t>(bs)};
      out = random_diag(seed_, key, n);
      break;
    }
  }
  auto it = perturb_.find({intended, group, bs});
  if (it != perturb_.end()) {
    for (auto& z : out) z += it->second;
  }
  return out;
}

Polynomial FactorDesign::polynomial(UserIndex intended, int group, BsIndex bs) const {
  const FactorEntry e = entry(intended, group, bs);
  Polynomial p;
  if (e.kind == FactorKind::ZfMember) {
    p.terms.push_back({e.sign, {gain_var(e.partner, e.channel_bs)}});
  } else if (e.kind == FactorKind::Random) {
    p.terms.push_back({1, {factor_var(intended, group, bs)}});
  }
  return p;
}

std::string to_string(EffectiveTag t) {
  switch (t) {
    case EffectiveTag::Desired: return "desired";
    case EffectiveTag::Neutralized: return "neutralized";
    case EffectiveTag::Zeroed: return "zeroed";
    case EffectiveTag::Generic: return "generic";
  }
  return "generic";
}

std::array<BsIndex, 2> shared_pair(const Topology& t, const Placement& p, UserIndex target, int group) {
  const auto& members = p.groups.at(group).members;
  std::vector<BsIndex> shared;
  for (BsIndex b : t.neighbors_of_user(target)) {
    if (std::binary_search(members.begin(), members.end(), b)) shared.push_back(b);
  }
  if (shared.size() != 2) {
    throw std::invalid_argument("user " + t.user_id(target) + " sees " + std::to_string(shared.size()) +
                                " BSs of group " + p.groups.at(group).label + ", expected 2");
  }
  return {shared[0], shared[1]};
}

EffectiveTag classify(const FactorDesign& ud, UserIndex target, int group, UserIndex intended) {
  if (intended == target) return EffectiveTag::Desired;
  const auto pair = shared_pair(ud.topology(), ud.placement(), target, group);
  const FactorEntry e0 = ud.entry(intended, group, pair[0]);
  const FactorEntry e1 = ud.entry(intended, group, pair[1]);
  if (e0.kind == FactorKind::Zero && e1.kind == FactorKind::Zero) return EffectiveTag::Zeroed;
  if (e0.kind == FactorKind::ZfMember && e1.kind == FactorKind::ZfMember && e0.partner == target && e1.partner == target &&
      e0.channel_bs == pair[1] && e1.channel_bs == pair[0] && e0.sign == -e1.sign) {
    return EffectiveTag::Neutralized;
  }
  return EffectiveTag::Generic;
}

EffectiveChannel effective_channel(const ChannelSet& cs, const FactorDesign& ud, UserIndex target, int group,
                                   UserIndex intended) {
  EffectiveChannel g;
  g.target = target;
  g.group = group;
  g.intended = intended;
  g.bss = shared_pair(cs.topology(), ud.placement(), target, group);
  g.tag = classify(ud, target, group, intended);

  const std::size_t n = cs.extensions();
  const DiagChannel u0 = ud.values(cs, intended, group, g.bss[0]);
  const DiagChannel u1 = ud.values(cs, intended, group, g.bss[1]);
  const DiagChannel& h0 = cs.h(target, g.bss[0]);
  const DiagChannel& h1 = cs.h(target, g.bss[1]);

  DiagChannel t1(n);
  g.values.assign(n, Complex(0.0, 0.0));
  kernels::cmul(h0.data(), u0.data(), g.values.data(), n);
  kernels::cmul(h1.data(), u1.data(), t1.data(), n);
  for (std::size_t i = 0; i < n; ++i) {
    g.term_scale = std::max({g.term_scale, std::abs(g.values[i]), std::abs(t1[i])});
  }
  kernels::cmul_acc(h1.data(), u1.data(), g.values.data(), n);
  return g;
}

Polynomial effective_polynomial(const FactorDesign& ud, UserIndex target, int group, UserIndex intended) {
  const auto pair = shared_pair(ud.topology(), ud.placement(), target, group);
  Polynomial sum;
  for (BsIndex b : pair) {
    Polynomial h;
    h.terms.push_back({1, {gain_var(target, b)}});
    sum = add(sum, multiply(h, ud.polynomial(intended, group, b)));
  }
  return sum;
}

}  // namespace cachedof
