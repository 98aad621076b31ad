// Copyright 2026 The ssmreg Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include <json.hpp>

#include "ssmreg/experiment.hpp"

namespace ssmreg {

/// Parses a trial CSV. Throws ParseError naming the first missing,
/// unexpected or malformed column.
std::vector<TrialReport> read_trials_csv(std::istream& in);
std::vector<TrialReport> load_trials_csv(const std::filesystem::path& path);

struct TierStats {
  int count = 0;
  double mean_tre_mm = 0.0;  // NaN when count == 0
  double sd_tre_mm = 0.0;    // sample SD; 0 for a single trial
};

/// Predicted success at ladder level k means the tier index is at most k.
struct Confusion {
  double p = 0.0;
  int true_positive = 0;
  int false_positive = 0;
  int false_negative = 0;
  int true_negative = 0;

  /// NaN when nothing is predicted successful.
  double precision() const;
};

struct ExperimentSummary {
  int trials = 0;
  int failed = 0;
  int successes = 0;
  std::array<TierStats, kTierCount> tiers{};
  std::vector<Confusion> confusion;
  double mean_shape_error_mm = 0.0;
  double mean_tre_success_mm = 0.0;
  double median_iterations = 0.0;
};

/// Failed registrations count as unsuccessful NoConfidence trials and are
/// left out of the tRE and shape-error means.
ExperimentSummary summarize(std::span<const TrialReport> trials,
                            std::span<const double> ladder = {});

nlohmann::json summary_to_json(const ExperimentSummary& summary);

/// Long format: one row per (modes, tier) with count, mean and SD of tRE,
/// where modes "all" pools every mode count.
void write_tier_long_csv(std::ostream& out, std::span<const TrialReport> trials);

/// Human-readable tier table.
void print_tier_table(std::ostream& out, const ExperimentSummary& summary);

}  // namespace ssmreg
