// Copyright 2026 The ssmreg Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ssmreg {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;

struct BuildSsmOptions {
  std::vector<std::filesystem::path> meshes;
  std::optional<std::filesystem::path> config;  // {"meshes": [...]}
  std::filesystem::path output = ".";           // writes ssm.json
};

struct RegisterOptions {
  std::optional<std::filesystem::path> config;  // {"model", "data", "registration"}
  std::optional<std::filesystem::path> model;
  std::optional<std::filesystem::path> data;
  std::filesystem::path output = ".";  // writes result.json and trace.csv
  std::optional<std::string> modes;     // single mode count
  std::optional<std::string> p_ladder;
  int workers = 0;
};

struct SimulateOptions {
  std::optional<std::filesystem::path> config;  // {"corpus", "trial"}
  std::optional<std::uint64_t> seed;
  int workers = 0;
  std::filesystem::path output = ".";  // trials.csv, summary.json, tiers_long.csv
  std::optional<std::string> modes;
  std::optional<std::string> p_ladder;
  bool timing = false;
};

struct ReportOptions {
  std::vector<std::filesystem::path> inputs;
  std::optional<std::filesystem::path> output;  // summary.json, tiers_long.csv
  std::optional<std::string> p_ladder;
};

/// Each command prints progress to `out`, diagnostics to `err`, and returns
/// an exit code: 0 success, 1 usage or configuration error, 2 runtime error.
int cmd_build_ssm(const BuildSsmOptions& options, std::ostream& out, std::ostream& err);
int cmd_register(const RegisterOptions& options, std::ostream& out, std::ostream& err);
int cmd_simulate(const SimulateOptions& options, std::ostream& out, std::ostream& err);
int cmd_report(const ReportOptions& options, std::ostream& out, std::ostream& err);

/// "0,10,20" -> {0, 10, 20}. Throws InvalidArgument on malformed input.
std::vector<int> parse_int_list(const std::string& text);
std::vector<double> parse_double_list(const std::string& text);

}  // namespace ssmreg
