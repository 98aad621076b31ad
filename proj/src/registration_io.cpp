// Copyright 2026 The ssmreg Authors
// SPDX-License-Identifier: Apache-2.0

#include "ssmreg/registration_io.hpp"

#include <iomanip>
#include <limits>
#include <ostream>

#include <Eigen/Geometry>

#include "ssmreg/error.hpp"

namespace ssmreg {

using nlohmann::json;

json result_to_json(const RegistrationResult& result, const RegistrationConfig& config) {
  const SimilarityTransform& t = result.transform;
  json rot = json::array();
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) rot.push_back(t.rotation(r, c));
  }
  const Eigen::Quaterniond q(t.rotation);
  json thresholds = json::array();
  const int n = static_cast<int>(result.inliers.size());
  for (const LadderThresholds& th : ladder_thresholds(n, config.p_ladder)) {
    thresholds.push_back({{"p", th.p},
                          {"position", th.position},
                          {"orientation", th.orientation},
                          {"position_pass", result.position_score < th.position},
                          {"orientation_pass", result.orientation_score < th.orientation}});
  }
  json j;
  j["schema"] = kResultSchema;
  j["transform"] = {{"scale", t.scale},
                    {"rotation", rot},
                    {"quaternion", {q.w(), q.x(), q.y(), q.z()}},
                    {"translation", {t.translation.x(), t.translation.y(), t.translation.z()}}};
  j["shape_parameters"] = std::vector<double>(result.shape.begin(), result.shape.end());
  j["n_modes"] = config.n_modes;
  j["n_data"] = result.n_data;
  j["n_inliers"] = n;
  j["iterations"] = result.iterations;
  j["converged"] = result.converged;
  j["E_p"] = result.position_score;
  j["E_o"] = result.orientation_score;
  j["thresholds"] = std::move(thresholds);
  j["tier"] = std::string(to_string(result.tier()));
  j["passing_p"] = result.classification.passing_p
                       ? json(*result.classification.passing_p)
                       : json(nullptr);
  return j;
}

void write_trace_csv(std::ostream& out, const RegistrationResult& result) {
  out << "iteration,inliers,position_rejected,orientation_rejected,sigma_circ_deg,"
         "cost_start,cost_end,optimizer_iterations,rotation_change_deg,"
         "translation_change_mm,scale_change,shape_change,scale\n";
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const IterationRecord& r : result.trace) {
    out << r.iteration << ',' << r.inliers << ',' << r.position_rejected << ','
        << r.orientation_rejected << ',' << r.sigma_circ_deg << ',' << r.cost_start << ','
        << r.cost_end << ',' << r.optimizer_iterations << ',' << r.rotation_change_deg << ','
        << r.translation_change_mm << ',' << r.scale_change << ',' << r.shape_change << ','
        << r.scale << '\n';
  }
}

namespace {

Vec3 vec3_of(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 3) {
    throw ParseError(std::string(what) + " must be an array of 3 numbers");
  }
  return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

}  // namespace

RegistrationConfig registration_config_from_json(const json& j) {
  RegistrationConfig c;
  try {
    c.n_modes = j.value("n_modes", c.n_modes);
    if (j.contains("scale_bounds")) {
      c.scale_lower = j["scale_bounds"].at(0).get<double>();
      c.scale_upper = j["scale_bounds"].at(1).get<double>();
    }
    c.shape_bound = j.value("shape_bound_sd", c.shape_bound);
    c.p_outlier = j.value("p_outlier", c.p_outlier);
    c.max_iterations = j.value("max_iterations", c.max_iterations);
    c.min_points = j.value("min_points", c.min_points);
    if (j.contains("p_ladder")) c.p_ladder = j["p_ladder"].get<std::vector<double>>();
    if (j.contains("noise")) {
      const json& n = j["noise"];
      if (n.contains("position_sd_mm")) {
        c.position_noise = PositionNoise::from_sd(vec3_of(n["position_sd_mm"], "position_sd_mm"));
      }
      if (n.contains("model_sd_mm")) {
        const Vec3 sd = vec3_of(n["model_sd_mm"], "model_sd_mm");
        c.position_noise.sigma_y = sd.cwiseProduct(sd).asDiagonal();
      }
      c.kent = kent_from_sd(n.value("orientation_sd_deg", 30.0), n.value("eccentricity", 0.5));
    }
    if (j.contains("tolerances")) {
      const json& tol = j["tolerances"];
      c.rotation_tol_deg = tol.value("rotation_deg", c.rotation_tol_deg);
      c.translation_tol_mm = tol.value("translation_mm", c.translation_tol_mm);
      c.scale_tol = tol.value("scale", c.scale_tol);
      c.shape_tol = tol.value("shape_sd", c.shape_tol);
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("registration config: ") + e.what());
  }
  return c;
}

}  // namespace ssmreg
