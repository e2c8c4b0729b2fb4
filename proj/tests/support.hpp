// Copyright 2026 The cachedof Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "cachedof/grid_topology.hpp"

#include <fstream>
#include <stdexcept>
#include <string>

namespace testing {

// 3x3 patch of users around (1,1); users numbered 1..9 row by row.
inline cachedof::GridSpec patch3x3() { return {3, 3, false, -1, -1}; }

inline cachedof::Coord patch_user(int k) { return {2 * ((k - 1) % 3) - 1, 2 * ((k - 1) / 3) - 1}; }

// Corner BSs of the centre user: a, b, c, d.
inline cachedof::Coord patch_bs(char name) {
  switch (name) {
    case 'a': return {0, 0};
    case 'b': return {2, 0};
    case 'c': return {0, 2};
    case 'd': return {2, 2};
  }
  throw std::invalid_argument("unknown BS label");
}

inline nlohmann::json read_json(const std::string& name) {
  std::ifstream in(std::string(CACHEDOF_TEST_DATA) + "/" + name);
  if (!in) throw std::runtime_error("missing fixture " + name);
  return nlohmann::json::parse(in);
}

}  // namespace testing
