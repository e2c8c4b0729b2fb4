// Copyright 2026 The cachedof Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "cachedof/grid_topology.hpp"
#include "cachedof/rational.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cachedof {

/// Raised for unusable configurations; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum ExitCode : int { kExitPass = 0, kExitFail = 1, kExitConfig = 2 };

struct ExperimentConfig {
  std::string command;  // curve | verify | region | lp-check | jacobian
  GridSpec grid{4, 4, true, 0, 0};
  std::string topology_path;   // overrides the grid when set
  std::string placement_path;  // region only
  std::string mode = "quarter";
  std::optional<Rational> mu;
  Rational mu_step = make_rational(1, 120);
  int n = 1;
  std::vector<std::uint64_t> seeds{1};
  Coord focus{1, 1};
  std::string out;
  int max_size = 3;
  bool micro = false;     // half mode: three-generator instance
  bool sabotage = false;  // half mode: perturb one zero-forcing entry
};

/// Keys: command, grid ("WxH"), wrap, origin ([x,y]), topology, placement,
/// mode, mu, mu_grid, n, seeds (list or "1,2,3"), focus ("i,j" or [i,j]),
/// out, max_size, micro, sabotage. Unknown keys are rejected.
ExperimentConfig config_from_json(const nlohmann::json& doc);

/// Inclusive grid 1/4, 1/4 + step, ..., 1 (or the single mu when set).
std::vector<Rational> mu_values(const ExperimentConfig& cfg);

struct CommandResult {
  int exit_code = kExitPass;
  std::string output;  // document body (CSV or JSON text)
  std::string message;
};

CommandResult run_curve(const ExperimentConfig& cfg);
CommandResult run_verify(const ExperimentConfig& cfg);
CommandResult run_region(const ExperimentConfig& cfg);
CommandResult run_lp_check(const ExperimentConfig& cfg);
CommandResult run_jacobian(const ExperimentConfig& cfg);

/// Dispatches on cfg.command, converts configuration errors to exit 2 and
/// writes the output to cfg.out when set.
CommandResult run_command(const ExperimentConfig& cfg);

}  // namespace cachedof
