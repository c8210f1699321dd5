// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The nchodge authors

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nchodge/study.hpp"

namespace nchodge::cli {

enum ExitCode : int { kPass = 0, kVerificationFailure = 1, kUsageError = 2, kNumericalFailure = 3 };

/// Settings shared by all subcommands. A JSON config file is applied first,
/// explicitly given flags override it.
struct StudyConfig {
  std::string command;
  std::optional<int> mesh_m;
  std::optional<std::string> mesh_file;
  MeshPattern pattern = MeshPattern::kDiagonal;
  std::vector<int> refinements;  // empty: command default
  int quad_order = kDefaultQuadratureOrder;
  double tol = 1e-10;
  std::optional<std::string> out;
  std::uint64_t seed = 20240601;
  bool oracle = true;
  std::string target = "default";
};

/// Applies the keys of a JSON object (mesh_m, mesh_file, pattern, refinements,
/// quad_order, tol, out, seed, oracle, target) on top of `config`. Throws
/// DomainError on unknown keys or bad values.
void apply_json_config(const std::string& json_text, StudyConfig& config);

/// Parses "2,4,8" into a strictly increasing list.
std::vector<int> parse_refinements(const std::string& text);

/// Full driver; returns the process exit code. Results go to `out` (or the
/// --out file), progress and summaries to `log`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& log);

}  // namespace nchodge::cli
