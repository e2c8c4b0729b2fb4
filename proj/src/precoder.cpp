// Copyright 2026 The cachedof Authors
// SPDX-License-Identifier: Apache-2.0

#include "cachedof/precoder.hpp"

#include "cachedof/linalg.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace cachedof {

std::string to_string(SchemeMode m) {
  switch (m) {
    case SchemeMode::Quarter: return "quarter";
    case SchemeMode::Half: return "half";
    case SchemeMode::Full: return "full";
  }
  return "quarter";
}

Generator raw_generator(UserIndex user, BsIndex bs) { return {Generator::Raw, user, bs, -1, -1}; }

Generator effective_generator(UserIndex target, int group, UserIndex intended) {
  return {Generator::Effective, target, -1, group, intended};
}

std::string describe(const Generator& g, const Topology& t) {
  if (g.kind == Generator::Raw) return "H[" + t.user_id(g.user) + "," + t.bs_id(g.bs) + "]";
  return "G[" + t.user_id(g.user) + ",A" + std::to_string(g.group + 1) + "," + t.user_id(g.intended) + "]";
}

int GeneratorSet::index_of(const Generator& g) const {
  auto it = std::find(items.begin(), items.end(), g);
  return it == items.end() ? -1 : static_cast<int>(it - items.begin());
}

std::vector<ExponentVector> monomial_basis(const GeneratorSet& g, int n, std::size_t limit) {
  return monomial_basis(g.size(), n, limit);
}

std::size_t SchemeInstance::generator_count() const {
  if (mode == SchemeMode::Quarter) {
    std::size_t g = 0;
    for (const auto& ph : phases) g = std::max(g, ph.generators.size());
    return g;
  }
  return generators.size();
}

namespace {

// Diagonal direction from a BS to the user it serves in each phase.
constexpr int kPhaseDx[4] = {-1, +1, +1, -1};
constexpr int kPhaseDy[4] = {+1, +1, -1, -1};

void check_phase(int phase) {
  if (phase < 1 || phase > 4) throw std::invalid_argument("phase must be in 1..4");
}

const Topology& require_grid(const Topology& t) {
  if (!t.is_grid()) throw std::invalid_argument("operation needs a grid topology");
  return t;
}

int mod4(int v) { return ((v % 4) + 4) % 4; }

}  // namespace

std::optional<UserIndex> phase_partner(const Topology& t, int phase, BsIndex bs) {
  check_phase(phase);
  const Coord b = require_grid(t).bs_coord(bs);
  return t.find_user({b.x + kPhaseDx[phase - 1], b.y + kPhaseDy[phase - 1]});
}

std::optional<BsIndex> phase_server(const Topology& t, int phase, UserIndex user) {
  check_phase(phase);
  const Coord u = require_grid(t).user_coord(user);
  return t.find_bs({u.x - kPhaseDx[phase - 1], u.y - kPhaseDy[phase - 1]});
}

// ---------------------------------------------------------------------------

FactorDesign build_factor_design(const Topology& t, const Placement& half, std::uint64_t seed) {
  require_grid(t);
  if (half.mode != PlacementMode::Half || half.groups.size() != 6) {
    throw std::invalid_argument("U design needs the six-group placement");
  }
  FactorDesign ud(t, half, seed);
  for (UserIndex u = 0; u < t.num_users(); ++u) {
    const Coord c = t.user_coord(u);
    const int i = c.x, j = c.y;
    for (int k = 0; k < 6; ++k) {
      const auto& members = half.groups[k].members;
      if (k >= 4) {
        for (BsIndex b : members) ud.set(u, k, b, {FactorKind::Random});
        continue;
      }
      // Line of BSs carrying the pair, the two pair BSs, and the partner user.
      const bool rows = k < 2;
      const bool low_side = rows ? (mod4(j) == 1) == (k == 0) : (mod4(i) == 1) == (k == 2);
      Coord first, second, partner;
      if (rows) {
        const int r = low_side ? j - 1 : j + 1;
        first = {i - 1, r};
        second = {i + 1, r};
        partner = {i, low_side ? j - 2 : j + 2};
      } else {
        const int col = low_side ? i - 1 : i + 1;
        first = {col, j - 1};
        second = {col, j + 1};
        partner = {low_side ? i - 2 : i + 2, j};
      }
      const auto first_bs = t.find_bs(first);
      const auto second_bs = t.find_bs(second);
      const auto partner_user = t.find_user(partner);
      const bool zf_ok = first_bs && second_bs && partner_user && t.connected(*partner_user, *first_bs) &&
                         t.connected(*partner_user, *second_bs);
      const Coord line = t.normalize(first);
      for (BsIndex b : members) {
        const Coord bc = t.bs_coord(b);
        const bool on_line = rows ? bc.y == line.y : bc.x == line.x;
        if (!on_line) {
          ud.set(u, k, b, {FactorKind::Zero});
        } else if (zf_ok && first_bs && b == *first_bs) {
          ud.set(u, k, b, {FactorKind::ZfMember, *partner_user, *second_bs, +1});
        } else if (zf_ok && second_bs && b == *second_bs) {
          ud.set(u, k, b, {FactorKind::ZfMember, *partner_user, *first_bs, -1});
        } else {
          ud.set(u, k, b, {FactorKind::Random});
        }
      }
    }
  }
  return ud;
}

// ---------------------------------------------------------------------------

SchemeInstance build_quarter_scheme(std::shared_ptr<const Topology> t, int n, std::optional<UserIndex> focus) {
  if (!t) throw std::invalid_argument("missing topology");
  require_grid(*t);
  if (n < 1) throw std::invalid_argument("IA order n must be at least 1");
  SchemeInstance s;
  s.mode = SchemeMode::Quarter;
  s.topology = t;
  s.placement = std::make_shared<const Placement>(place(*t, PlacementMode::Quarter));
  s.n = n;
  s.focus = focus;
  if (focus && (*focus < 0 || *focus >= t->num_users())) throw std::out_of_range("focus user not in topology");

  for (int ph = 1; ph <= 4; ++ph) {
    QuarterPhase qp;
    qp.phase = ph;
    if (focus) {
      const auto server = phase_server(*t, ph, *focus);
      if (!server) throw std::invalid_argument("focus user has no serving BS in phase " + std::to_string(ph));
      qp.desired_bs = *server;
      for (BsIndex b : t->neighbors_of_user(*focus)) {
        if (b != *server) qp.generators.items.push_back(raw_generator(*focus, b));
      }
      qp.generators.truncated = true;
    } else {
      for (UserIndex u = 0; u < t->num_users(); ++u) {
        const auto server = phase_server(*t, ph, u);
        for (BsIndex b : t->neighbors_of_user(u)) {
          if (!server || b != *server) qp.generators.items.push_back(raw_generator(u, b));
        }
      }
    }
    s.phases.push_back(std::move(qp));
  }
  const std::size_t g = s.generator_count();
  s.M = basis_size(g, n);
  s.N = s.M + basis_size(g, n + 1);
  return s;
}

namespace {

void classify_focus(SchemeInstance& s, const FactorDesign& ud, UserIndex focus) {
  const Topology& t = *s.topology;
  for (int k = 0; k < 6; ++k) {
    try {
      (void)shared_pair(t, *s.placement, focus, k);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("focus user is not interior: " + std::string(e.what()));
    }
    s.desired.push_back(effective_generator(focus, k, focus));
    for (UserIndex v = 0; v < t.num_users(); ++v) {
      if (v == focus) continue;
      const Generator g = effective_generator(focus, k, v);
      switch (classify(ud, focus, k, v)) {
        case EffectiveTag::Neutralized: s.neutralized.push_back(g); break;
        case EffectiveTag::Zeroed: s.zeroed.push_back(g); break;
        case EffectiveTag::Generic: s.interference.push_back(g); break;
        case EffectiveTag::Desired: break;
      }
    }
  }
}

}  // namespace

SchemeInstance build_half_scheme(std::shared_ptr<const Topology> t, int n, std::optional<UserIndex> focus,
                                 const HalfOptions& opts) {
  if (!t) throw std::invalid_argument("missing topology");
  require_grid(*t);
  if (n < 1) throw std::invalid_argument("IA order n must be at least 1");
  SchemeInstance s;
  s.mode = SchemeMode::Half;
  s.topology = t;
  s.placement = std::make_shared<const Placement>(place(*t, PlacementMode::Half));
  s.n = n;
  s.focus = focus;
  if (focus && (*focus < 0 || *focus >= t->num_users())) throw std::out_of_range("focus user not in topology");

  const FactorDesign ud = build_factor_design(*t, *s.placement, 0);
  if (focus) {
    classify_focus(s, ud, *focus);
    if (opts.generators.empty()) {
      s.generators.items = s.interference;
      s.generators.truncated = true;
    } else {
      s.generators.items = opts.generators;
      s.generators.truncated = true;
      std::set<Generator> chosen(opts.generators.begin(), opts.generators.end());
      if (chosen.size() != opts.generators.size()) throw std::invalid_argument("duplicate generator in subset");
      std::size_t missing = 0;
      for (const auto& g : s.interference) missing += chosen.count(g) == 0;
      if (missing > 0 && !opts.allow_truncation) {
        throw std::invalid_argument("generator subset drops " + std::to_string(missing) +
                                    " interference channels of the focus user; alignment would fail");
      }
      s.truncation_override = missing > 0;
    }
  } else {
    if (!t->grid().wrap) throw std::invalid_argument("the network-wide generator set needs a wrapping grid");
    for (UserIndex u = 0; u < t->num_users(); ++u) {
      for (int k = 0; k < 6; ++k) {
        for (UserIndex v = 0; v < t->num_users(); ++v) {
          if (v != u && classify(ud, u, k, v) == EffectiveTag::Generic) {
            s.generators.items.push_back(effective_generator(u, k, v));
          }
        }
      }
    }
  }
  if (s.generators.size() == 0) throw std::invalid_argument("empty generator set");
  s.M = basis_size(s.generators.size(), n);
  s.N = 6 * s.M + basis_size(s.generators.size(), n + 1);
  return s;
}

std::vector<Generator> micro_generators(const SchemeInstance& half, std::size_t count) {
  std::vector<Generator> out;
  std::set<int> used_groups;
  for (const auto& g : half.interference) {
    if (out.size() == count) break;
    if (used_groups.insert(g.group).second) out.push_back(g);
  }
  for (const auto& g : half.interference) {
    if (out.size() == count) break;
    if (std::find(out.begin(), out.end(), g) == out.end()) out.push_back(g);
  }
  return out;
}

SchemeInstance build_full_scheme(std::shared_ptr<const Topology> t) {
  if (!t) throw std::invalid_argument("missing topology");
  SchemeInstance s;
  s.mode = SchemeMode::Full;
  s.topology = t;
  s.placement = std::make_shared<const Placement>(place(*t, PlacementMode::Full));
  s.M = 1;
  s.N = 1;
  return s;
}

// ---------------------------------------------------------------------------

Eigen::MatrixXcd realize_columns(const std::vector<DiagChannel>& gens, const std::vector<ExponentVector>& basis) {
  if (gens.empty()) throw std::invalid_argument("no generators to realize");
  const std::size_t n = gens.front().size();
  int top = 0;
  for (const auto& e : basis) {
    if (e.size() != gens.size()) throw std::invalid_argument("exponent vector length mismatch");
    for (int x : e) top = std::max(top, x);
  }
  // powers[k][p] = gens[k]^p elementwise, p = 0..top
  std::vector<std::vector<DiagChannel>> powers(gens.size());
  for (std::size_t k = 0; k < gens.size(); ++k) {
    powers[k].assign(static_cast<std::size_t>(top) + 1, DiagChannel(n, Complex(1.0, 0.0)));
    for (int p = 1; p <= top; ++p) {
      kernels::cmul(powers[k][p - 1].data(), gens[k].data(), powers[k][p].data(), n);
    }
  }
  Eigen::MatrixXcd out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(basis.size()));
  DiagChannel col(n);
  for (std::size_t m = 0; m < basis.size(); ++m) {
    std::fill(col.begin(), col.end(), Complex(1.0, 0.0));
    for (std::size_t k = 0; k < gens.size(); ++k) {
      kernels::cmul(col.data(), powers[k][basis[m][k]].data(), col.data(), n);
    }
    for (std::size_t i = 0; i < n; ++i) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(m)) = col[i];
  }
  return out;
}

DiagChannel generator_values(const Realization& r, const Placement* half, const Generator& g) {
  if (g.kind == Generator::Raw) return r.channels.h(g.user, g.bs);
  if (!r.udesign || half == nullptr) throw std::invalid_argument("effective generator without a U design");
  return effective_channel(r.channels, *r.udesign, g.user, g.group, g.intended).values;
}

namespace {

Eigen::MatrixXcd scale_rows(const DiagChannel& d, const Eigen::MatrixXcd& m) {
  Eigen::MatrixXcd out = m;
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.row(i) *= d[static_cast<std::size_t>(i)];
  return out;
}

}  // namespace

Realization realize(const SchemeInstance& s, std::uint64_t seed, std::size_t budget) {
  if (s.mode == SchemeMode::Full) throw std::invalid_argument("full cooperation is realized with build_full_zf");
  if (!s.focus) throw std::invalid_argument("numeric realization needs a focus user");
  if (s.N > budget) {
    throw std::length_error("symbol extensions N = " + s.N.str() + " exceed the dimension budget " +
                            std::to_string(budget) + "; reduce n or the generator count");
  }
  const auto n_ext = static_cast<std::size_t>(s.N);
  Realization r{seed, s.topology, s.placement, draw_channels(*s.topology, n_ext, seed), std::nullopt, {}, {}};
  const UserIndex focus = *s.focus;

  if (s.mode == SchemeMode::Quarter) {
    for (const auto& ph : s.phases) {
      std::vector<DiagChannel> gens;
      for (const auto& g : ph.generators.items) gens.push_back(generator_values(r, nullptr, g));
      const auto v = realize_columns(gens, monomial_basis(ph.generators, s.n));
      const auto v_next = realize_columns(gens, monomial_basis(ph.generators, s.n + 1));
      Eigen::MatrixXcd decoding(v.rows(), v.cols() + v_next.cols());
      decoding << scale_rows(r.channels.h(focus, ph.desired_bs), v), v_next;
      r.decoding.push_back(std::move(decoding));
      r.expected_rank.push_back(static_cast<int>(v.cols() + v_next.cols()));
    }
    return r;
  }

  FactorDesign ud = build_factor_design(*s.topology, *s.placement, seed);
  for (const auto& p : s.perturbations) ud.perturb(p.intended, p.group, p.bs, p.eps);
  r.udesign = std::move(ud);
  std::vector<DiagChannel> gens;
  for (const auto& g : s.generators.items) gens.push_back(generator_values(r, s.placement.get(), g));
  const auto w = realize_columns(gens, monomial_basis(s.generators, s.n));
  const auto w_next = realize_columns(gens, monomial_basis(s.generators, s.n + 1));
  Eigen::MatrixXcd decoding(w.rows(), 6 * w.cols() + w_next.cols());
  for (std::size_t k = 0; k < s.desired.size(); ++k) {
    decoding.middleCols(static_cast<Eigen::Index>(k) * w.cols(), w.cols()) =
        scale_rows(generator_values(r, s.placement.get(), s.desired[k]), w);
  }
  decoding.rightCols(w_next.cols()) = w_next;
  r.decoding.push_back(std::move(decoding));
  r.expected_rank.push_back(static_cast<int>(6 * w.cols() + w_next.cols()));
  return r;
}

FullZf build_full_zf(const ChannelSet& cs, std::size_t ext) {
  const Topology& t = cs.topology();
  std::vector<UserIndex> users(t.num_users());
  std::vector<BsIndex> bss(t.num_bss());
  for (int i = 0; i < t.num_users(); ++i) users[i] = i;
  for (int i = 0; i < t.num_bss(); ++i) bss[i] = i;
  FullZf z;
  z.network = submatrix(cs, users, bss, ext);
  z.rank = numeric_rank(z.network);
  z.expected_rank = static_cast<int>(std::min(users.size(), bss.size()));
  z.precoder = z.network.completeOrthogonalDecomposition().pseudoInverse();
  return z;
}

}  // namespace cachedof
