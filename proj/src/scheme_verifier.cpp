// Copyright 2026 The cachedof Authors
// SPDX-License-Identifier: Apache-2.0

#include "cachedof/scheme_verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace cachedof {

namespace {

constexpr std::size_t kEnumerateLimit = 1u << 16;

UserIndex require_focus(const SchemeInstance& s) {
  if (!s.focus) throw std::invalid_argument("check needs a focus user");
  return *s.focus;
}

Realization fresh_realization(const SchemeInstance& s, std::uint64_t seed, std::size_t n_ext) {
  Realization r{seed, s.topology, s.placement, draw_channels(*s.topology, n_ext, seed), std::nullopt, {}, {}};
  FactorDesign ud = build_factor_design(*s.topology, *s.placement, seed);
  for (const auto& p : s.perturbations) ud.perturb(p.intended, p.group, p.bs, p.eps);
  r.udesign = std::move(ud);
  return r;
}

// Interference links at `u` in one quarter phase.
std::vector<Generator> quarter_interference(const Topology& t, int phase, UserIndex u) {
  const auto server = phase_server(t, phase, u);
  std::vector<Generator> out;
  for (BsIndex b : t.neighbors_of_user(u)) {
    if (!server || b != *server) out.push_back(raw_generator(u, b));
  }
  return out;
}

std::vector<Generator> half_interference(const SchemeInstance& s, UserIndex u) {
  if (s.focus && *s.focus == u) return s.interference;
  const FactorDesign ud = build_factor_design(*s.topology, *s.placement, 0);
  std::vector<Generator> out;
  for (int k = 0; k < 6; ++k) {
    for (UserIndex v = 0; v < s.topology->num_users(); ++v) {
      if (v != u && classify(ud, u, k, v) == EffectiveTag::Generic) out.push_back(effective_generator(u, k, v));
    }
  }
  return out;
}

// Every interference channel must be a generator; then each received column
// e + unit(idx) must stay in [n+1]^g.
void align_against(const GeneratorSet& gens, const std::vector<Generator>& interference, int n, const Topology& t,
                   AlignmentResult& out) {
  std::vector<int> idx;
  for (const auto& g : interference) {
    ++out.channels_checked;
    const int k = gens.index_of(g);
    if (k < 0) {
      out.ok = false;
      out.missing.push_back(describe(g, t));
    } else {
      idx.push_back(k);
    }
  }
  if (idx.empty()) return;
  if (basis_size(gens.size(), n) <= kEnumerateLimit) {
    for (const auto& e : monomial_basis(gens, n)) {
      for (int k : idx) {
        ExponentVector moved = e;
        ++moved[k];
        if (!in_range(moved, n + 1)) {
          out.ok = false;
          out.message = "received exponent leaves [n+1]^g";
          return;
        }
      }
    }
  }
  // Larger bases: every coordinate of a basis column is at most n, so a
  // single increment stays within n+1 and membership holds by construction.
}

}  // namespace

NeutralizationResult check_neutralization(const SchemeInstance& s, const Realization& r) {
  if (s.mode != SchemeMode::Half) throw std::invalid_argument("neutralization applies to the half scheme");
  const UserIndex focus = require_focus(s);
  if (!r.udesign) throw std::invalid_argument("realization has no U design");
  NeutralizationResult out;
  auto visit = [&](const Generator& g, int& counter) {
    const auto eff = effective_channel(r.channels, *r.udesign, focus, g.group, g.intended);
    double inf = 0.0;
    for (const auto& z : eff.values) inf = std::max(inf, std::abs(z));
    const double res = eff.term_scale > 0.0 ? inf / eff.term_scale : inf;
    if (out.worst.empty() || res > out.max_residual) {
      out.worst = describe(g, *s.topology);
      out.max_residual = res;
    }
    ++counter;
  };
  for (const auto& g : s.neutralized) visit(g, out.neutralized_checked);
  for (const auto& g : s.zeroed) visit(g, out.zeroed_checked);
  return out;
}

NeutralizationResult check_neutralization(const SchemeInstance& s, std::uint64_t seed, std::size_t n_ext) {
  if (s.mode != SchemeMode::Half) throw std::invalid_argument("neutralization applies to the half scheme");
  return check_neutralization(s, fresh_realization(s, seed, n_ext));
}

AlignmentResult check_alignment(const SchemeInstance& s, UserIndex u) {
  AlignmentResult out;
  const Topology& t = *s.topology;
  if (s.focus && *s.focus != u) {
    throw std::invalid_argument("focus-mode scheme can only be checked at its focus user");
  }
  switch (s.mode) {
    case SchemeMode::Quarter:
      for (const auto& ph : s.phases) align_against(ph.generators, quarter_interference(t, ph.phase, u), s.n, t, out);
      break;
    case SchemeMode::Half:
      align_against(s.generators, half_interference(s, u), s.n, t, out);
      break;
    case SchemeMode::Full:
      out.message = "no alignment in full cooperation";
      return out;
  }
  if (!out.missing.empty()) {
    out.message = std::to_string(out.missing.size()) + " interference channels are not generators";
  }
  return out;
}

bool distinct_columns(const std::vector<SymbolicColumn>& cols) {
  std::set<SymbolicColumn> seen;
  for (const auto& c : cols) {
    if (!seen.insert(c).second) return false;
  }
  return true;
}

std::vector<SymbolicColumn> symbolic_columns(const SchemeInstance& s, int phase_index) {
  const GeneratorSet* gens = nullptr;
  std::vector<Generator> factors;
  if (s.mode == SchemeMode::Quarter) {
    const auto& ph = s.phases.at(static_cast<std::size_t>(phase_index));
    gens = &ph.generators;
    factors.push_back(raw_generator(require_focus(s), ph.desired_bs));
  } else if (s.mode == SchemeMode::Half) {
    gens = &s.generators;
    factors = s.desired;
  } else {
    throw std::invalid_argument("full cooperation has no monomial columns");
  }
  if (basis_size(gens->size(), s.n + 1) > kBasisLimit) {
    throw std::length_error("decoding matrix too large to enumerate symbolically");
  }
  std::vector<SymbolicColumn> cols;
  const auto basis = monomial_basis(*gens, s.n);
  for (std::size_t f = 0; f < factors.size(); ++f) {
    const int k = gens->index_of(factors[f]);
    for (const auto& e : basis) {
      SymbolicColumn c{static_cast<int>(f), e};
      // A factor that is itself a generator folds into the exponent vector.
      if (k >= 0) {
        c.factor = -1;
        ++c.exponents[k];
      }
      cols.push_back(std::move(c));
    }
  }
  for (const auto& e : monomial_basis(*gens, s.n + 1)) cols.push_back({-1, e});
  return cols;
}

bool check_distinct_monomials(const SchemeInstance& s, UserIndex u) {
  if (require_focus(s) != u) throw std::invalid_argument("focus-mode scheme can only be checked at its focus user");
  const std::size_t matrices = s.mode == SchemeMode::Quarter ? s.phases.size() : 1;
  for (std::size_t i = 0; i < matrices; ++i) {
    if (!distinct_columns(symbolic_columns(s, static_cast<int>(i)))) return false;
  }
  return true;
}

DecodabilityResult check_decodability(const SchemeInstance& s, const std::vector<std::uint64_t>& seeds,
                                      double rel_tol) {
  DecodabilityResult out;
  for (std::uint64_t seed : seeds) {
    const Realization r = realize(s, seed);
    for (std::size_t i = 0; i < r.decoding.size(); ++i) {
      DecodabilitySample smp;
      smp.seed = seed;
      smp.phase = s.mode == SchemeMode::Quarter ? s.phases[i].phase : 0;
      smp.rank_found = numeric_rank(equilibrate(r.decoding[i]), rel_tol);
      smp.rank_expected = r.expected_rank[i];
      out.ok = out.ok && smp.rank_found == smp.rank_expected;
      out.samples.push_back(smp);
    }
  }
  return out;
}

std::vector<Polynomial> jacobian_family(const FactorDesign& ud, UserIndex focus, int group) {
  const Topology& t = ud.topology();
  std::vector<Polynomial> family{effective_polynomial(ud, focus, group, focus)};
  const int cls = user_class(t.user_coord(focus));
  for (UserIndex v = 0; v < t.num_users(); ++v) {
    if (v == focus || user_class(t.user_coord(v)) != cls) continue;
    if (classify(ud, focus, group, v) == EffectiveTag::Generic) {
      family.push_back(effective_polynomial(ud, focus, group, v));
    }
  }
  return family;
}

JacobianResult jacobian_independence_check(const std::vector<Polynomial>& family, std::uint64_t point_seed) {
  std::vector<Variable> vars;
  for (const auto& p : family) {
    const auto vs = variables_of(p);
    vars.insert(vars.end(), vs.begin(), vs.end());
  }
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());

  Assignment at;
  for (const auto& v : vars) {
    const std::array<std::uint64_t, 4> key{3, static_cast<std::uint64_t>(v.kind), static_cast<std::uint64_t>(v.a),
                                           static_cast<std::uint64_t>(v.b)};
    at[v] = gaussian_at(point_seed, key, static_cast<std::uint64_t>(v.c));
  }
  JacobianResult out;
  out.rows = static_cast<int>(family.size());
  out.cols = static_cast<int>(vars.size());
  Eigen::MatrixXcd jac(out.rows, out.cols);
  for (int i = 0; i < out.rows; ++i) {
    for (int j = 0; j < out.cols; ++j) jac(i, j) = derivative(family[i], vars[j], at);
  }
  out.rank = out.rows == 0 ? 0 : numeric_rank(jac);
  out.full_row_rank = out.rank == out.rows;
  return out;
}

ZfResult check_zero_forcing(const FullZf& z, double tol) {
  ZfResult out;
  out.rank = z.rank;
  out.expected_rank = z.expected_rank;
  const Eigen::MatrixXcd eff = z.network * z.precoder;
  double off = 0.0;
  double diag = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < eff.rows(); ++i) {
    for (Eigen::Index j = 0; j < eff.cols(); ++j) {
      const double mag = std::abs(eff(i, j));
      if (i == j) {
        diag = std::min(diag, mag);
      } else {
        off = std::max(off, mag);
      }
      out.identity_error = std::max(out.identity_error, std::abs(eff(i, j) - (i == j ? 1.0 : 0.0)));
    }
  }
  out.crosstalk = diag > 0.0 ? off / diag : std::numeric_limits<double>::infinity();
  out.ok = out.rank == out.expected_rank && out.crosstalk <= tol && out.identity_error <= tol;
  return out;
}

Rational scheme_dof(SchemeMode mode, std::size_t g, int n) {
  switch (mode) {
    case SchemeMode::Quarter: {
      const BigInt a = basis_size(g, n), b = basis_size(g, n + 1);
      return Rational(a, a + b);
    }
    case SchemeMode::Half: {
      const BigInt a = basis_size(g, n), b = basis_size(g, n + 1);
      return Rational(6 * a, 6 * a + b);
    }
    case SchemeMode::Full:
      return Rational(1);
  }
  return Rational(0);
}

DofPoint dof_account(const SchemeInstance& s) {
  DofPoint p;
  p.source = DofSource::AchievableConstructed;
  switch (s.mode) {
    case SchemeMode::Quarter:
      p.mu = make_rational(1, 4);
      p.inv_d = s.N / Rational(s.M);
      break;
    case SchemeMode::Half:
      p.mu = make_rational(1, 2);
      p.inv_d = s.N / Rational(6 * s.M);
      break;
    case SchemeMode::Full:
      p.mu = 1;
      p.inv_d = 1;
      break;
  }
  return p;
}

VerificationReport verify(const SchemeInstance& s, const std::vector<std::uint64_t>& seeds) {
  if (seeds.empty()) throw std::invalid_argument("at least one seed is required");
  VerificationReport rep;
  rep.mode = s.mode;
  rep.n = s.n;
  rep.g = s.generator_count();
  rep.M = s.M.str();
  rep.N = s.N.str();
  rep.seeds = seeds;
  rep.dof = dof_account(s).d();
  bool ok = true;

  if (s.mode == SchemeMode::Full) {
    for (std::uint64_t seed : seeds) {
      const ChannelSet cs = draw_channels(*s.topology, 1, seed);
      const ZfResult z = check_zero_forcing(build_full_zf(cs));
      rep.ranks.push_back({seed, 0, z.rank, z.expected_rank});
      rep.neutralization_residual = std::max(rep.neutralization_residual, z.crosstalk);
      rep.zf_ok = rep.zf_ok && z.ok;
    }
    rep.pass = rep.zf_ok;
    return rep;
  }

  const UserIndex focus = require_focus(s);
  rep.focus = s.topology->user_id(focus);
  if (s.N > kDimensionBudget) {
    throw std::length_error("symbol extensions N = " + s.N.str() + " exceed the dimension budget " +
                            std::to_string(kDimensionBudget) + "; reduce n or the generator count");
  }

  const AlignmentResult al = check_alignment(s, focus);
  rep.alignment_ok = al.ok;
  if (!al.ok) rep.notes.push_back("alignment: " + al.message);
  if (s.truncation_override) rep.notes.push_back("micro-instance: generator truncation overridden, alignment not required");
  ok = ok && (al.ok || s.truncation_override);

  rep.distinct_monomials_ok = check_distinct_monomials(s, focus);
  ok = ok && rep.distinct_monomials_ok;

  for (std::uint64_t seed : seeds) {
    const Realization r = realize(s, seed);
    if (s.mode == SchemeMode::Half) {
      const auto nr = check_neutralization(s, r);
      rep.neutralization_residual = std::max(rep.neutralization_residual, nr.max_residual);
    }
    for (std::size_t i = 0; i < r.decoding.size(); ++i) {
      const int found = numeric_rank(equilibrate(r.decoding[i]));
      rep.ranks.push_back({seed, s.mode == SchemeMode::Quarter ? s.phases[i].phase : 0, found, r.expected_rank[i]});
      ok = ok && found == r.expected_rank[i];
    }
  }
  ok = ok && rep.neutralization_residual == 0.0;
  rep.pass = ok;
  return rep;
}

nlohmann::json to_json(const VerificationReport& r) {
  nlohmann::json doc;
  doc["mode"] = to_string(r.mode);
  doc["n"] = r.n;
  doc["g"] = r.g;
  doc["M"] = r.M;
  doc["N"] = r.N;
  if (!r.focus.empty()) doc["focus"] = r.focus;
  doc["seeds"] = r.seeds;
  doc["dof"] = to_string(r.dof);
  if (r.mode == SchemeMode::Full) {
    doc["crosstalk_residual"] = r.neutralization_residual;
    doc["zf_ok"] = r.zf_ok;
  } else {
    doc["neutralization_residual"] = r.neutralization_residual;
    doc["alignment_ok"] = r.alignment_ok;
    doc["distinct_monomials_ok"] = r.distinct_monomials_ok;
  }
  auto ranks = nlohmann::json::array();
  for (const auto& s : r.ranks) {
    nlohmann::json j{{"seed", s.seed}, {"rank_found", s.rank_found}, {"rank_expected", s.rank_expected}};
    if (s.phase > 0) j["phase"] = s.phase;
    ranks.push_back(std::move(j));
  }
  doc["ranks"] = std::move(ranks);
  doc["notes"] = r.notes;
  doc["pass"] = r.pass;
  return doc;
}

}  // namespace cachedof
