// Copyright 2026 The ssmreg Authors
// SPDX-License-Identifier: Apache-2.0

#include "ssmreg/registration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "ssmreg/cost.hpp"
#include "ssmreg/error.hpp"
#include "ssmreg/transform.hpp"

namespace ssmreg {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

std::vector<Correspondence> inliers_of(const std::vector<Correspondence>& corrs) {
  std::vector<Correspondence> out;
  out.reserve(corrs.size());
  for (const Correspondence& c : corrs) {
    if (!c.outlier) out.push_back(c);
  }
  return out;
}

}  // namespace

void RegistrationConfig::validate(int available_modes) const {
  if (n_modes < 0 || n_modes > available_modes) {
    throw InvalidArgument("n_modes " + std::to_string(n_modes) + " exceeds the " +
                          std::to_string(available_modes) + " modes of the model");
  }
  if (!(scale_lower > 0.0 && scale_lower <= 1.0 && scale_upper >= 1.0)) {
    throw InvalidArgument("scale bounds must satisfy 0 < lo <= 1 <= hi");
  }
  if (!(shape_bound >= 0.0)) throw InvalidArgument("shape bound must be nonnegative");
  if (!(p_outlier > 0.0 && p_outlier < 1.0)) {
    throw InvalidArgument("outlier probability must lie in (0, 1)");
  }
  if (max_iterations < 1) throw InvalidArgument("max_iterations must be positive");
  if (min_points < 1) throw InvalidArgument("min_points must be positive");
  if (kent.kappa - 2.0 * kent.beta < 0.0) throw InvalidArgument("kappa - 2 beta < 0");
  validate_ladder(p_ladder);
}

std::vector<Correspondence> correspondence_phase(std::span<const OrientedPoint> data,
                                                 const StatisticalShapeModel& ssm,
                                                 const SimilarityTransform& t,
                                                 const Eigen::VectorXd& shape,
                                                 const RegistrationConfig& config,
                                                 OutlierSummary* summary) {
  const MatchSurface surface(instantiate(ssm, shape),
                             config.position_noise.combined(t.rotation));
  std::vector<Correspondence> corrs =
      match_all(data, surface, config.kent, t, config.execution);
  const OutlierSummary s = reject_outliers(corrs, config.p_outlier);
  if (summary) *summary = s;
  return corrs;
}

RegistrationResult register_points(std::span<const OrientedPoint> data,
                                   const StatisticalShapeModel& ssm,
                                   const RegistrationConfig& config) {
  config.validate(ssm.mode_count());
  if (static_cast<int>(data.size()) < config.min_points) {
    throw DegenerateRegistration("registration needs at least " +
                                 std::to_string(config.min_points) + " points, got " +
                                 std::to_string(data.size()));
  }

  const int n_m = config.n_modes;
  RegistrationResult result;
  result.n_data = static_cast<int>(data.size());
  SimilarityTransform t = config.initial_transform.value_or(SimilarityTransform{});
  t.scale = std::clamp(t.scale, config.scale_lower, config.scale_upper);
  Eigen::VectorXd s = Eigen::VectorXd::Zero(n_m);

  Eigen::VectorXd lower(RegistrationCost::kShape + n_m);
  Eigen::VectorXd upper(RegistrationCost::kShape + n_m);
  constexpr double inf = std::numeric_limits<double>::infinity();
  lower.head<6>().setConstant(-inf);
  upper.head<6>().setConstant(inf);
  lower[RegistrationCost::kScale] = config.scale_lower;
  upper[RegistrationCost::kScale] = config.scale_upper;
  lower.tail(n_m).setConstant(-config.shape_bound);
  upper.tail(n_m).setConstant(config.shape_bound);

  for (int iter = 1; iter <= config.max_iterations; ++iter) {
    IterationRecord rec;
    rec.iteration = iter;
    OutlierSummary summary;
    const std::vector<Correspondence> corrs =
        correspondence_phase(data, ssm, t, s, config, &summary);
    const std::vector<Correspondence> inliers = inliers_of(corrs);
    rec.inliers = summary.inliers;
    rec.position_rejected = summary.position_rejected;
    rec.orientation_rejected = summary.orientation_rejected;
    rec.sigma_circ_deg = summary.sigma_circ * kRadToDeg;

    const RegistrationCost cost(data, inliers, ssm, n_m,
                                config.position_noise.combined(t.rotation), config.kent,
                                t.rotation);
    const Eigen::VectorXd x0 = cost.pack(t, s);
    const Eigen::VectorXd curvature = cost.curvature_diagonal(x0);
    const Eigen::VectorXd inverse_diag =
        curvature.unaryExpr([](double c) { return c > 1e-12 ? 1.0 / c : 1.0; });
    const BoxBfgsResult opt = minimize_box_bfgs(
        [&cost](const Eigen::VectorXd& x, Eigen::VectorXd* g) { return cost.evaluate(x, g); },
        x0, lower, upper, inverse_diag, config.optimizer);

    const SimilarityTransform t_new = cost.transform(opt.x);
    const Eigen::VectorXd s_new = cost.shape(opt.x);
    rec.cost_start = cost.evaluate(x0);
    rec.cost_end = opt.value;
    rec.optimizer_iterations = opt.iterations;
    rec.rotation_change_deg =
        rotation_angle(t_new.rotation * t.rotation.transpose()) * kRadToDeg;
    rec.translation_change_mm = (t_new.translation - t.translation).norm();
    rec.scale_change = std::abs(t_new.scale - t.scale);
    rec.shape_change = n_m > 0 ? (s_new - s).cwiseAbs().maxCoeff() : 0.0;
    rec.scale = t_new.scale;
    result.trace.push_back(rec);

    t = t_new;
    t.rotation = orthonormalize(t.rotation);
    s = s_new;
    result.iterations = iter;
    if (rec.rotation_change_deg < config.rotation_tol_deg &&
        rec.translation_change_mm < config.translation_tol_mm &&
        rec.scale_change < config.scale_tol && rec.shape_change < config.shape_tol) {
      result.converged = true;
      break;
    }
  }

  result.transform = t;
  result.shape = s;
  const std::vector<Correspondence> final_corrs =
      correspondence_phase(data, ssm, t, s, config, &result.final_outliers);
  result.inliers = inliers_of(final_corrs);

  std::vector<OrientedPoint> xs;
  std::vector<OrientedPoint> ys;
  xs.reserve(result.inliers.size());
  ys.reserve(result.inliers.size());
  for (const Correspondence& c : result.inliers) {
    xs.push_back(data[c.data_index]);
    ys.push_back(c.y);
  }
  result.position_score = position_score(xs, ys, t, config.position_noise);
  result.orientation_score = orientation_score(xs, ys, t, config.kent);
  result.classification =
      classify(result.position_score, result.orientation_score,
               static_cast<int>(result.inliers.size()), config.p_ladder);
  return result;
}

}  // namespace ssmreg
