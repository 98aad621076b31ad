// Copyright 2026 The ssmreg Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ssmreg/confidence.hpp"
#include "ssmreg/registration.hpp"
#include "ssmreg/ssm.hpp"
#include "ssmreg/synthetic.hpp"

namespace ssmreg {

struct OffsetRanges {
  double rotation_min_deg = 0.0;
  double rotation_max_deg = 10.0;
  double translation_min_mm = 0.0;
  double translation_max_mm = 10.0;
  double scale_min = 0.95;
  double scale_max = 1.05;
};

/// Noise used to corrupt sampled points.
struct GeneratorNoise {
  Vec3 position_sd_mm = Vec3(0.5, 0.5, 0.75);
  double orientation_sd_deg = 10.0;
  double eccentricity = 0.5;
};

struct TrialSpec {
  int n_points = 3000;
  int offsets_per_shape = 2;
  std::vector<int> left_out;  // empty: every shape in turn
  std::vector<int> modes = {0, 10, 20, 30, 40, 50};
  double success_threshold_mm = 1.0;
  double viewpoint_depth_mm = 5.0;
  OffsetRanges offsets;
  bool corrupt = true;
  GeneratorNoise generator;
  /// Assumed noise, bounds and ladder; n_modes is set per trial.
  RegistrationConfig registration;

  /// Throws InvalidArgument; mode counts must fit a model built from
  /// n_shapes - 1 shapes.
  void validate(int n_shapes) const;
};

struct TrialReport {
  int shape = 0;
  int offset = 0;
  int modes = 0;
  double tre_mm = 0.0;
  double shape_error_mm = 0.0;
  double e_p = 0.0;
  double e_o = 0.0;
  ConfidenceTier tier = ConfidenceTier::NoConfidence;
  bool success = false;
  int iterations = 0;
  double seconds = 0.0;

  bool failed = false;  // registration threw; see error
  std::string error;
  bool converged = false;
  int n_inliers = 0;
  double scale = 1.0;
  /// a tRE + max |v - T(G(v))| over left-out vertices; shape_error_mm
  /// never exceeds it.
  double shape_error_bound_mm = 0.0;
};

/// Random similarity: axis uniform on the sphere, angle, translation
/// magnitude and scale uniform in their ranges, translation direction
/// uniform. Returns the moved points and the transform applied.
std::pair<std::vector<OrientedPoint>, SimilarityTransform> apply_offset(
    std::span<const OrientedPoint> points, const OffsetRanges& ranges, std::mt19937_64& rng);
std::pair<std::vector<OrientedPoint>, SimilarityTransform> apply_offset(
    std::span<const OrientedPoint> points, const OffsetRanges& ranges, std::uint64_t seed);

/// Samples, corrupts and offsets points from corpus shape `left_out`, then
/// registers them to `model` once per mode count in spec.modes. `model`
/// should exclude the left-out shape.
std::vector<TrialReport> run_trial(const TrialSpec& spec, const ShapeCorpus& corpus,
                                   const SyntheticCorpusSpec& corpus_spec,
                                   const StatisticalShapeModel& model, int left_out,
                                   int offset_index, std::uint64_t seed, bool timing = false);

/// Model of every corpus shape except `left_out`.
StatisticalShapeModel leave_one_out_model(const ShapeCorpus& corpus, int left_out);

struct ExperimentOptions {
  std::uint64_t seed = 1;
  int workers = 0;  // 0: all available threads
  bool timing = false;
};

/// Generates the corpus from options.seed, then runs every
/// leave-one-out x offset x mode trial. Rows are ordered by shape, offset,
/// then mode list order regardless of worker count.
std::vector<TrialReport> run_experiment(SyntheticCorpusSpec corpus_spec, const TrialSpec& spec,
                                        const ExperimentOptions& options);

/// Seed of the data drawn for (shape, offset).
std::uint64_t trial_seed(std::uint64_t master, int shape, int offset);
/// Seed of the synthetic corpus.
std::uint64_t corpus_seed(std::uint64_t master);

void write_trials_csv(std::ostream& out, std::span<const TrialReport> trials);

/// Experiment file: {"corpus": {...}, "trial": {...}}. Missing keys keep
/// their defaults; unknown keys are rejected.
std::pair<SyntheticCorpusSpec, TrialSpec> experiment_from_json(const nlohmann::json& j);

}  // namespace ssmreg
