// Copyright 2026 The ssmreg Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "ssmreg/confidence.hpp"
#include "ssmreg/correspondence.hpp"
#include "ssmreg/noise.hpp"
#include "ssmreg/optimizer.hpp"
#include "ssmreg/outliers.hpp"
#include "ssmreg/ssm.hpp"

namespace ssmreg {

struct RegistrationConfig {
  int n_modes = 0;
  double scale_lower = 0.9;
  double scale_upper = 1.1;
  double shape_bound = 3.0;  // |s_j| limit in SDs
  double p_outlier = 0.95;
  int max_iterations = 100;
  int min_points = 10;

  // Convergence: all changes between outer iterations below these.
  double rotation_tol_deg = 0.01;
  double translation_tol_mm = 0.01;
  double scale_tol = 1e-4;
  double shape_tol = 1e-3;

  PositionNoise position_noise = PositionNoise::from_sd(Vec3(1.0, 1.0, 2.0));
  KentParameters kent = kent_from_sd(30.0, 0.5);
  std::vector<double> p_ladder = default_p_ladder();
  std::optional<SimilarityTransform> initial_transform;
  Execution execution = Execution::Parallel;
  BoxBfgsOptions optimizer;

  /// Throws InvalidArgument on out-of-range settings.
  void validate(int available_modes) const;
};

struct IterationRecord {
  int iteration = 0;
  int inliers = 0;
  int position_rejected = 0;
  int orientation_rejected = 0;
  double sigma_circ_deg = 0.0;
  double cost_start = 0.0;
  double cost_end = 0.0;
  int optimizer_iterations = 0;
  double rotation_change_deg = 0.0;
  double translation_change_mm = 0.0;
  double scale_change = 0.0;
  double shape_change = 0.0;
  double scale = 1.0;
};

struct RegistrationResult {
  SimilarityTransform transform;  // data frame -> model frame
  Eigen::VectorXd shape;          // n_modes parameters in SDs
  std::vector<Correspondence> inliers;  // final phase, data order
  int n_data = 0;
  int iterations = 0;
  bool converged = false;
  double position_score = 0.0;     // E_p
  double orientation_score = 0.0;  // E_o
  Classification classification;
  OutlierSummary final_outliers;
  std::vector<IterationRecord> trace;

  ConfidenceTier tier() const { return classification.tier; }
};

/// Deformable most-likely oriented point registration of `data` to the shape
/// model. Each outer iteration matches every point on the current deformed
/// model, rejects outliers, and minimises the registration objective jointly
/// over pose, scale and the first n_modes shape parameters. After the loop a
/// final matching pass supplies the inliers for the confidence scores.
RegistrationResult register_points(std::span<const OrientedPoint> data,
                                   const StatisticalShapeModel& ssm,
                                   const RegistrationConfig& config);

/// One correspondence phase at a fixed state, returning all matches with
/// outlier flags set.
std::vector<Correspondence> correspondence_phase(std::span<const OrientedPoint> data,
                                                 const StatisticalShapeModel& ssm,
                                                 const SimilarityTransform& t,
                                                 const Eigen::VectorXd& shape,
                                                 const RegistrationConfig& config,
                                                 OutlierSummary* summary = nullptr);

}  // namespace ssmreg
