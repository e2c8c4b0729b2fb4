// Copyright 2026 The cachedof Authors
// SPDX-License-Identifier: Apache-2.0

#include "cachedof/cli_harness.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"cachedof: DoF bounds and scheme verification for cache-aided cellular grids"};
  std::string config_path;
  app.add_option("--config", config_path, "JSON experiment config");

  // Flags are collected as raw strings and merged over the config document.
  struct Flag {
    const char* name;
    const char* key;
    const char* help;
    std::string value;
  };
  std::vector<Flag> flags = {
      {"--command", "command", "curve | verify | region | lp-check | jacobian", {}},
      {"--mu", "mu", "single cache size p/q", {}},
      {"--mu-grid", "mu_grid", "mu grid step p/q", {}},
      {"--n", "n", "alignment parameter", {}},
      {"--seeds", "seeds", "comma-separated seeds", {}},
      {"--focus", "focus", "focus user \"i,j\"", {}},
      {"--grid", "grid", "grid size WxH (cells)", {}},
      {"--wrap", "wrap", "wrap the grid into a torus (true/false)", {}},
      {"--origin", "origin", "cell origin \"x,y\" (non-wrapping grids)", {}},
      {"--out", "out", "output path (stdout when absent)", {}},
      {"--mode", "mode", "quarter | half | full", {}},
      {"--topology", "topology", "topology JSON file", {}},
      {"--placement", "placement", "placement JSON file", {}},
      {"--max-size", "max_size", "largest |R| enumerated by region", {}},
      {"--micro", "micro", "half mode: three-generator instance (true/false)", {}},
      {"--sabotage", "sabotage", "half mode: perturb a zero-forcing entry (true/false)", {}},
  };
  for (auto& f : flags) app.add_option(f.name, f.value, f.help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cachedof::kExitConfig;
  }

  nlohmann::json doc = nlohmann::json::object();
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "error: cannot open config " << config_path << "\n";
      return cachedof::kExitConfig;
    }
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      std::cerr << "error: malformed config: " << e.what() << "\n";
      return cachedof::kExitConfig;
    }
  }
  for (const auto& f : flags) {
    if (app.count(f.name) > 0) doc[f.key] = f.value;
  }

  cachedof::ExperimentConfig cfg;
  try {
    cfg = cachedof::config_from_json(doc);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cachedof::kExitConfig;
  }
  const auto res = cachedof::run_command(cfg);
  if (cfg.out.empty()) std::cout << res.output;
  if (res.exit_code != cachedof::kExitPass) std::cerr << "error: " << res.message << "\n";
  return res.exit_code;
}
