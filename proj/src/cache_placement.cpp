// Copyright 2026 The cachedof Authors
// SPDX-License-Identifier: Apache-2.0

#include "cachedof/cache_placement.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace cachedof {

std::string to_string(PlacementMode m) {
  switch (m) {
    case PlacementMode::Quarter: return "quarter";
    case PlacementMode::Half: return "half";
    case PlacementMode::Full: return "full";
    case PlacementMode::Custom: return "custom";
  }
  return "custom";
}

PlacementMode parse_mode(const std::string& s) {
  if (s == "quarter") return PlacementMode::Quarter;
  if (s == "half") return PlacementMode::Half;
  if (s == "full") return PlacementMode::Full;
  if (s == "custom") return PlacementMode::Custom;
  throw std::invalid_argument("unknown placement mode: " + s);
}

Rational mode_mu(PlacementMode m) {
  switch (m) {
    case PlacementMode::Quarter: return make_rational(1, 4);
    case PlacementMode::Half: return make_rational(1, 2);
    case PlacementMode::Full: return make_rational(1);
    case PlacementMode::Custom: break;
  }
  throw std::invalid_argument("custom placements have no canonical cache size");
}

int Placement::group_index(const std::string& label) const {
  for (int k = 0; k < static_cast<int>(groups.size()); ++k) {
    if (groups[k].label == label) return k;
  }
  return -1;
}

Placement place(const Topology& t, PlacementMode mode) {
  if (!t.is_grid()) throw std::invalid_argument("placement needs a grid topology (BS classes)");
  std::vector<std::vector<BsIndex>> by_class(5);
  for (BsIndex b = 0; b < t.num_bss(); ++b) by_class[bs_class(t.bs_coord(b))].push_back(b);

  auto make_group = [&](std::string label, std::vector<int> classes, Rational frac) {
    CacheGroup g;
    g.label = std::move(label);
    g.classes = std::move(classes);
    g.fraction = std::move(frac);
    for (int c : g.classes) g.members.insert(g.members.end(), by_class[c].begin(), by_class[c].end());
    std::sort(g.members.begin(), g.members.end());
    if (g.members.empty()) throw std::invalid_argument("grid too small: empty BS class in group " + g.label);
    return g;
  };

  Placement p;
  p.mode = mode;
  p.mu = mode_mu(mode);
  switch (mode) {
    case PlacementMode::Quarter:
      for (int k = 1; k <= 4; ++k) p.groups.push_back(make_group("A" + std::to_string(k), {k}, make_rational(1, 4)));
      break;
    case PlacementMode::Half: {
      const std::vector<std::vector<int>> unions = {{1, 2}, {3, 4}, {1, 3}, {2, 4}, {1, 4}, {2, 3}};
      for (int k = 0; k < 6; ++k) {
        p.groups.push_back(make_group("A" + std::to_string(k + 1), unions[k], make_rational(1, 6)));
      }
      break;
    }
    case PlacementMode::Full:
      p.groups.push_back(make_group("A1", {1, 2, 3, 4}, make_rational(1)));
      break;
    case PlacementMode::Custom:
      throw std::invalid_argument("custom placements are loaded, not generated");
  }
  return p;
}

MixturePlan memory_share(const Rational& mu) {
  if (mu < make_rational(1, 4) || mu > 1) {
    throw std::invalid_argument("mu must lie in [1/4, 1], got " + to_string(mu));
  }
  MixturePlan m;
  m.mu = mu;
  if (mu < make_rational(1, 2)) {
    m.low_weight = 2 - 4 * mu;
    m.low_mode = PlacementMode::Quarter;
    m.high_mode = PlacementMode::Half;
  } else {
    m.low_weight = 2 - 2 * mu;
    m.low_mode = PlacementMode::Half;
    m.high_mode = PlacementMode::Full;
  }
  return m;
}

std::vector<CacheGroup> groups_within(const Placement& p, const std::vector<bool>& in_t) {
  std::vector<CacheGroup> out;
  for (const auto& g : p.groups) {
    const bool inside = std::all_of(g.members.begin(), g.members.end(), [&](BsIndex b) {
      return b >= 0 && b < static_cast<int>(in_t.size()) && in_t[b];
    });
    if (inside) out.push_back(g);
  }
  return out;
}

std::vector<CacheGroup> groups_within(const Placement& p, const std::vector<BsIndex>& t) {
  int hi = 0;
  for (const auto& g : p.groups) {
    for (BsIndex b : g.members) hi = std::max(hi, b + 1);
  }
  for (BsIndex b : t) hi = std::max(hi, b + 1);
  std::vector<bool> mask(hi, false);
  for (BsIndex b : t) {
    if (b >= 0) mask[b] = true;
  }
  return groups_within(p, mask);
}

std::vector<Rational> per_bs_load(const Placement& p, int num_bss) {
  std::vector<Rational> load(num_bss, Rational(0));
  for (const auto& g : p.groups) {
    for (BsIndex b : g.members) load.at(b) += g.fraction;
  }
  return load;
}

void validate(const Placement& p, const Topology& t) {
  std::set<std::string> labels;
  for (const auto& g : p.groups) {
    if (!labels.insert(g.label).second) throw std::invalid_argument("duplicate group label: " + g.label);
    if (g.members.empty()) throw std::invalid_argument("group " + g.label + " has no members");
    if (g.fraction <= 0 || g.fraction > 1) {
      throw std::invalid_argument("group " + g.label + " fraction outside (0,1]");
    }
    for (BsIndex b : g.members) {
      if (b < 0 || b >= t.num_bss()) throw std::invalid_argument("group " + g.label + " member out of range");
    }
  }
}

nlohmann::json export_placement(const Placement& p, const Topology& t) {
  nlohmann::json doc;
  doc["mu"] = to_string(p.mu);
  doc["mode"] = to_string(p.mode);
  auto groups = nlohmann::json::array();
  for (const auto& g : p.groups) {
    nlohmann::json jg;
    jg["label"] = g.label;
    auto members = nlohmann::json::array();
    for (BsIndex b : g.members) members.push_back(t.bs_id(b));
    jg["members"] = std::move(members);
    jg["fraction"] = to_string(g.fraction);
    groups.push_back(std::move(jg));
  }
  doc["groups"] = std::move(groups);
  return doc;
}

namespace {

Rational rational_field(const nlohmann::json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long long>());
  throw std::invalid_argument("rational fields must be \"p/q\" strings");
}

}  // namespace

Placement load_placement(const nlohmann::json& doc, const Topology& t) {
  if (!doc.is_object() || !doc.contains("groups") || !doc["groups"].is_array()) {
    throw std::invalid_argument("placement document needs a 'groups' array");
  }
  Placement p;
  p.mode = doc.contains("mode") ? parse_mode(doc["mode"].get<std::string>()) : PlacementMode::Custom;
  for (const auto& jg : doc["groups"]) {
    CacheGroup g;
    g.label = jg.at("label").get<std::string>();
    for (const auto& m : jg.at("members")) {
      g.members.push_back(t.bs_index(m.is_string() ? m.get<std::string>() : std::to_string(m.get<long long>())));
    }
    std::sort(g.members.begin(), g.members.end());
    g.members.erase(std::unique(g.members.begin(), g.members.end()), g.members.end());
    g.fraction = rational_field(jg.at("fraction"));
    p.groups.push_back(std::move(g));
  }
  if (doc.contains("mu")) {
    p.mu = rational_field(doc["mu"]);
  } else {
    // Largest per-BS load.
    Rational worst = 0;
    for (const auto& l : per_bs_load(p, t.num_bss())) worst = std::max(worst, l);
    p.mu = worst;
  }
  validate(p, t);
  return p;
}

}  // namespace cachedof
