// Copyright 2026 The cachedof Authors
// SPDX-License-Identifier: Apache-2.0

#include "cachedof/cli_harness.hpp"

#include "cachedof/cache_placement.hpp"
#include "cachedof/channel_model.hpp"
#include "cachedof/converse_bounds.hpp"
#include "cachedof/precoder.hpp"
#include "cachedof/scheme_verifier.hpp"

#include <fstream>
#include <memory>
#include <set>
#include <sstream>

namespace cachedof {

namespace {

using nlohmann::json;

std::string as_text(const json& v, const char* key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw ConfigError(std::string("'") + key + "' must be a string");
}

Rational config_rational(const json& v, const char* key) {
  try {
    return parse_rational(as_text(v, key));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("'") + key + "': " + e.what());
  }
}

std::vector<long long> int_list(const json& v, const char* key) {
  std::vector<long long> out;
  if (v.is_array()) {
    for (const auto& x : v) {
      if (!x.is_number_integer()) throw ConfigError(std::string("'") + key + "' entries must be integers");
      out.push_back(x.get<long long>());
    }
    return out;
  }
  if (!v.is_string()) throw ConfigError(std::string("'") + key + "' must be a list or comma-separated string");
  std::stringstream ss(v.get<std::string>());
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoll(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(std::string("'") + key + "': not an integer: " + item);
    }
  }
  return out;
}

bool config_bool(const json& v, const char* key) {
  if (v.is_boolean()) return v.get<bool>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "true" || s == "1" || s == "on") return true;
    if (s == "false" || s == "0" || s == "off") return false;
  }
  throw ConfigError(std::string("'") + key + "' must be a boolean");
}

int config_int(const json& v, const char* key) {
  const auto xs = int_list(v.is_number_integer() ? json::array({v}) : v, key);
  if (xs.size() != 1) throw ConfigError(std::string("'") + key + "' must be one integer");
  return static_cast<int>(xs[0]);
}

std::shared_ptr<const Topology> make_topology(const ExperimentConfig& cfg) {
  if (cfg.topology_path.empty()) return std::make_shared<const Topology>(make_grid(cfg.grid));
  std::ifstream in(cfg.topology_path);
  if (!in) throw ConfigError("cannot open topology file " + cfg.topology_path);
  return std::make_shared<const Topology>(load_topology(json::parse(in)));
}

Placement make_placement(const ExperimentConfig& cfg, const Topology& t) {
  if (cfg.placement_path.empty()) return place(t, parse_mode(cfg.mode));
  std::ifstream in(cfg.placement_path);
  if (!in) throw ConfigError("cannot open placement file " + cfg.placement_path);
  return load_placement(json::parse(in), t);
}

void require_seeds(const ExperimentConfig& cfg) {
  if (cfg.seeds.empty()) throw ConfigError("this command needs at least one seed");
}

SchemeInstance make_scheme(const ExperimentConfig& cfg, std::shared_ptr<const Topology> t) {
  const PlacementMode mode = parse_mode(cfg.mode);
  if (mode == PlacementMode::Full) return build_full_scheme(t);
  if (!t->is_grid()) throw ConfigError("quarter and half schemes need a grid topology");
  const UserIndex focus = t->user_index(cfg.focus);
  if (mode == PlacementMode::Quarter) {
    if (cfg.micro || cfg.sabotage) throw ConfigError("micro and sabotage apply to half mode only");
    return build_quarter_scheme(t, cfg.n, focus);
  }
  if (mode != PlacementMode::Half) throw ConfigError("verify supports quarter, half and full modes");

  SchemeInstance s = cfg.micro ? [&] {
    const SchemeInstance whole = build_half_scheme(t, cfg.n, focus);
    HalfOptions opts;
    opts.generators = micro_generators(whole, 3);
    opts.allow_truncation = true;
    return build_half_scheme(t, cfg.n, focus, opts);
  }()
                               : build_half_scheme(t, cfg.n, focus);
  if (cfg.sabotage) {
    if (s.neutralized.empty()) throw ConfigError("no zero-forcing pair at the focus user to sabotage");
    const Generator& g = s.neutralized.front();
    const auto pair = shared_pair(*t, *s.placement, g.user, g.group);
    s.perturbations.push_back({g.intended, g.group, pair[0], Complex(1e-3, 0.0)});
  }
  return s;
}

}  // namespace

ExperimentConfig config_from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known = {"command", "grid",  "wrap",  "origin",   "topology", "placement",
                                              "mode",    "mu",    "mu_grid", "n",      "seeds",    "focus",
                                              "out",     "max_size", "micro", "sabotage"};
  for (const auto& [k, v] : doc.items()) {
    if (!known.count(k)) throw ConfigError("unknown config key '" + k + "'");
  }
  ExperimentConfig cfg;
  if (doc.contains("command")) cfg.command = as_text(doc["command"], "command");
  if (doc.contains("grid")) {
    const std::string g = as_text(doc["grid"], "grid");
    const auto x = g.find('x');
    try {
      if (x == std::string::npos) throw std::invalid_argument(g);
      std::size_t a = 0, b = 0;
      cfg.grid.width_cells = std::stoi(g.substr(0, x), &a);
      cfg.grid.height_cells = std::stoi(g.substr(x + 1), &b);
      if (a != x || b != g.size() - x - 1) throw std::invalid_argument(g);
    } catch (const std::exception&) {
      throw ConfigError("'grid' must look like WxH, got " + g);
    }
  }
  if (doc.contains("wrap")) cfg.grid.wrap = config_bool(doc["wrap"], "wrap");
  if (doc.contains("origin")) {
    const auto o = int_list(doc["origin"], "origin");
    if (o.size() != 2) throw ConfigError("'origin' needs two integers");
    cfg.grid.origin_x = static_cast<int>(o[0]);
    cfg.grid.origin_y = static_cast<int>(o[1]);
  }
  if (doc.contains("topology")) cfg.topology_path = as_text(doc["topology"], "topology");
  if (doc.contains("placement")) cfg.placement_path = as_text(doc["placement"], "placement");
  if (doc.contains("mode")) cfg.mode = as_text(doc["mode"], "mode");
  if (doc.contains("mu")) cfg.mu = config_rational(doc["mu"], "mu");
  if (doc.contains("mu_grid")) cfg.mu_step = config_rational(doc["mu_grid"], "mu_grid");
  if (doc.contains("n")) cfg.n = config_int(doc["n"], "n");
  if (doc.contains("seeds")) {
    cfg.seeds.clear();
    for (long long s : int_list(doc["seeds"], "seeds")) {
      if (s < 0) throw ConfigError("seeds must be nonnegative");
      cfg.seeds.push_back(static_cast<std::uint64_t>(s));
    }
  }
  if (doc.contains("focus")) {
    const auto f = int_list(doc["focus"], "focus");
    if (f.size() != 2) throw ConfigError("'focus' needs two coordinates i,j");
    cfg.focus = {static_cast<int>(f[0]), static_cast<int>(f[1])};
  }
  if (doc.contains("out")) cfg.out = as_text(doc["out"], "out");
  if (doc.contains("max_size")) cfg.max_size = config_int(doc["max_size"], "max_size");
  if (doc.contains("micro")) cfg.micro = config_bool(doc["micro"], "micro");
  if (doc.contains("sabotage")) cfg.sabotage = config_bool(doc["sabotage"], "sabotage");

  if (cfg.n < 1) throw ConfigError("'n' must be at least 1");
  if (cfg.max_size < 1) throw ConfigError("'max_size' must be at least 1");
  if (cfg.mu && (*cfg.mu < make_rational(1, 4) || *cfg.mu > 1)) throw ConfigError("'mu' must lie in [1/4, 1]");
  if (cfg.mu_step <= 0 || cfg.mu_step > make_rational(3, 4)) throw ConfigError("'mu_grid' step must lie in (0, 3/4]");
  return cfg;
}

std::vector<Rational> mu_values(const ExperimentConfig& cfg) {
  if (cfg.mu) return {*cfg.mu};
  std::vector<Rational> out;
  for (Rational mu = make_rational(1, 4); mu <= 1; mu += cfg.mu_step) out.push_back(mu);
  if (out.back() != 1) out.push_back(1);
  return out;
}

CommandResult run_curve(const ExperimentConfig& cfg) {
  std::ostringstream csv;
  csv << "mu,inv_d_lower,inv_d_upper,inv_d_baseline,gap\n";
  for (const Rational& mu : mu_values(cfg)) {
    csv << to_string(mu) << ',' << to_string(closed_form_lower(mu).inv_d) << ','
        << to_string(closed_form_upper(mu).inv_d) << ',' << to_string(baseline_dof(mu).inv_d) << ','
        << to_string(gap(mu)) << '\n';
  }
  return {kExitPass, csv.str(), ""};
}

CommandResult run_verify(const ExperimentConfig& cfg) {
  require_seeds(cfg);
  const auto t = make_topology(cfg);
  const SchemeInstance s = make_scheme(cfg, t);
  const VerificationReport rep = verify(s, cfg.seeds);
  json doc = to_json(rep);
  const Rational mu = mode_mu(parse_mode(cfg.mode));
  doc["dof_point"] = {{"mu", to_string(mu)},
                      {"d", to_string(rep.dof)},
                      {"inv_d", to_string(1 / rep.dof)},
                      {"source", to_string(DofSource::AchievableConstructed)}};
  return {rep.pass ? kExitPass : kExitFail, doc.dump(2) + "\n", rep.pass ? "pass" : "verification failed"};
}

CommandResult run_region(const ExperimentConfig& cfg) {
  const auto t = make_topology(cfg);
  const Placement p = make_placement(cfg, *t);
  validate(p, *t);
  const ChannelSet cs = draw_channels(*t, 1, cfg.seeds.empty() ? 1 : cfg.seeds.front());
  const auto pairs = enumerate_rt_pairs(*t, cs, cfg.max_size);
  const auto reduced = remove_redundant(region_inequalities(*t, p, pairs));
  return {kExitPass, region_to_json(reduced).dump(2) + "\n", std::to_string(reduced.size()) + " inequalities"};
}

CommandResult run_lp_check(const ExperimentConfig& cfg) {
  const Topology grid = make_grid({4, 4, true});
  json rows = json::array();
  bool ok = true;
  for (const Rational& mu : mu_values(cfg)) {
    const Rational lp = solve_symmetric_dof(memory_sharing_inequalities(mu, &grid));
    const Rational cf = closed_form_upper(mu).d();
    ok = ok && lp == cf;
    rows.push_back({{"mu", to_string(mu)}, {"lp_d", to_string(lp)}, {"closed_form_d", to_string(cf)}, {"equal", lp == cf}});
  }
  json doc = {{"rows", rows}, {"pass", ok}};
  return {ok ? kExitPass : kExitFail, doc.dump(2) + "\n", ok ? "pass" : "LP and closed form disagree"};
}

CommandResult run_jacobian(const ExperimentConfig& cfg) {
  require_seeds(cfg);
  const auto t = make_topology(cfg);
  if (!t->is_grid()) throw ConfigError("jacobian needs a grid topology");
  const Placement half = place(*t, PlacementMode::Half);
  const UserIndex focus = t->user_index(cfg.focus);
  const FactorDesign ud = build_factor_design(*t, half, cfg.seeds.front());

  bool ok = true;
  json families = json::array();
  json control = json::array();
  for (int k = 0; k < static_cast<int>(half.groups.size()); ++k) {
    const auto family = jacobian_family(ud, focus, k);
    auto dup = family;
    dup.push_back(family.back());
    json ranks = json::array();
    bool full = true, caught = true;
    JacobianResult last;
    for (std::uint64_t seed : cfg.seeds) {
      last = jacobian_independence_check(family, seed);
      full = full && last.full_row_rank;
      ranks.push_back(last.rank);
      caught = caught && !jacobian_independence_check(dup, seed).full_row_rank;
    }
    ok = ok && full && caught;
    families.push_back({{"group", half.groups[k].label},
                        {"rows", last.rows},
                        {"cols", last.cols},
                        {"ranks", ranks},
                        {"full_row_rank", full}});
    control.push_back({{"group", half.groups[k].label}, {"duplicate_detected", caught}});
  }
  json doc = {{"focus", t->user_id(focus)}, {"families", families}, {"negative_control", control}, {"pass", ok}};
  return {ok ? kExitPass : kExitFail, doc.dump(2) + "\n", ok ? "pass" : "Jacobian check failed"};
}

CommandResult run_command(const ExperimentConfig& cfg) {
  CommandResult res;
  try {
    if (cfg.command == "curve") {
      res = run_curve(cfg);
    } else if (cfg.command == "verify") {
      res = run_verify(cfg);
    } else if (cfg.command == "region") {
      res = run_region(cfg);
    } else if (cfg.command == "lp-check") {
      res = run_lp_check(cfg);
    } else if (cfg.command == "jacobian") {
      res = run_jacobian(cfg);
    } else {
      throw ConfigError("unknown command '" + cfg.command + "' (curve, verify, region, lp-check, jacobian)");
    }
  } catch (const ConfigError& e) {
    return {kExitConfig, "", e.what()};
  } catch (const std::invalid_argument& e) {
    return {kExitConfig, "", e.what()};
  } catch (const std::out_of_range& e) {
    return {kExitConfig, "", e.what()};
  } catch (const std::length_error& e) {
    return {kExitConfig, "", e.what()};
  } catch (const nlohmann::json::exception& e) {
    return {kExitConfig, "", std::string("malformed JSON: ") + e.what()};
  } catch (const std::exception& e) {
    return {kExitFail, "", e.what()};
  }
  if (!cfg.out.empty()) {
    std::ofstream out(cfg.out, std::ios::binary);
    out << res.output;
    if (!out) return {kExitConfig, res.output, "cannot write " + cfg.out};
  }
  return res;
}

}  // namespace cachedof
