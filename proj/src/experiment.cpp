// Copyright 2026 The ssmreg Authors
// SPDX-License-Identifier: Apache-2.0

#include "ssmreg/experiment.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <numbers>
#include <ostream>
#include <set>

#include "ssmreg/error.hpp"
#include "ssmreg/mesh_query.hpp"
#include "ssmreg/noise.hpp"
#include "ssmreg/registration_io.hpp"
#include "ssmreg/visibility.hpp"

namespace ssmreg {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

void check_range(double lo, double hi, const char* what) {
  if (!(lo >= 0.0 && hi >= lo)) {
    throw InvalidArgument(std::string(what) + " range must satisfy 0 <= lo <= hi");
  }
}

Vec3 random_direction(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (;;) {
    const Vec3 v(gauss(rng), gauss(rng), gauss(rng));
    const double n = v.norm();
    if (n > 1e-12) return v / n;
  }
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

double max_vertex_displacement(const TriangleMesh& mesh, const SimilarityTransform& t) {
  double d = 0.0;
  for (const Vec3& v : mesh.vertices) d = std::max(d, (t.apply(v) - v).norm());
  return d;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void reject_unknown(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                    const std::string& where) {
  if (!j.is_object()) throw ParseError(where + " must be an object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!keys.count(it.key())) throw ParseError("unknown key '" + it.key() + "' in " + where);
  }
}

std::pair<double, double> pair_of(const nlohmann::json& j, const char* what) {
  if (!j.is_array() || j.size() != 2) {
    throw ParseError(std::string(what) + " must be a [lo, hi] pair");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

void TrialSpec::validate(int n_shapes) const {
  if (n_points < 1) throw InvalidArgument("n_points must be positive");
  if (offsets_per_shape < 1) throw InvalidArgument("offsets_per_shape must be positive");
  if (modes.empty()) throw InvalidArgument("mode list is empty");
  if (n_shapes < 2) throw InvalidArgument("leave-one-out needs at least 2 shapes");
  for (int m : modes) {
    if (m < 0 || m > n_shapes - 2) {
      throw InvalidArgument("mode count " + std::to_string(m) + " outside [0, " +
                            std::to_string(n_shapes - 2) + "]");
    }
  }
  for (int j : left_out) {
    if (j < 0 || j >= n_shapes) {
      throw InvalidArgument("left-out index " + std::to_string(j) + " outside the corpus");
    }
  }
  if (!(success_threshold_mm > 0.0)) throw InvalidArgument("success threshold must be positive");
  if (!(viewpoint_depth_mm >= 0.0)) throw InvalidArgument("viewpoint depth must be nonnegative");
  check_range(offsets.rotation_min_deg, offsets.rotation_max_deg, "rotation");
  check_range(offsets.translation_min_mm, offsets.translation_max_mm, "translation");
  if (!(offsets.scale_min > 0.0 && offsets.scale_max >= offsets.scale_min)) {
    throw InvalidArgument("scale range must satisfy 0 < lo <= hi");
  }
  if (corrupt) {
    if (!(generator.position_sd_mm.minCoeff() > 0.0)) {
      throw InvalidArgument("generator position SDs must be positive");
    }
    kent_from_sd(generator.orientation_sd_deg, generator.eccentricity);
  }
  RegistrationConfig probe = registration;
  probe.n_modes = 0;
  probe.validate(0);
}

std::uint64_t trial_seed(std::uint64_t master, int shape, int offset) {
  return derive_seed(master, 1, static_cast<std::uint64_t>(shape),
                     static_cast<std::uint64_t>(offset));
}

std::uint64_t corpus_seed(std::uint64_t master) { return derive_seed(master, 0); }

std::pair<std::vector<OrientedPoint>, SimilarityTransform> apply_offset(
    std::span<const OrientedPoint> points, const OffsetRanges& ranges, std::mt19937_64& rng) {
  const Vec3 axis = random_direction(rng);
  const double angle = uniform(rng, ranges.rotation_min_deg, ranges.rotation_max_deg) * kDeg;
  const Vec3 direction = random_direction(rng);
  const double magnitude = uniform(rng, ranges.translation_min_mm, ranges.translation_max_mm);
  const double scale = uniform(rng, ranges.scale_min, ranges.scale_max);

  SimilarityTransform g;
  g.rotation = so3_exp(angle * axis);
  g.translation = magnitude * direction;
  g.scale = scale;
  std::vector<OrientedPoint> moved;
  moved.reserve(points.size());
  for (const OrientedPoint& p : points) moved.push_back(g.apply(p));
  return {std::move(moved), g};
}

std::pair<std::vector<OrientedPoint>, SimilarityTransform> apply_offset(
    std::span<const OrientedPoint> points, const OffsetRanges& ranges, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return apply_offset(points, ranges, rng);
}

StatisticalShapeModel leave_one_out_model(const ShapeCorpus& corpus, int left_out) {
  ShapeCorpus training;
  for (int j = 0; j < static_cast<int>(corpus.shapes.size()); ++j) {
    if (j != left_out) training.shapes.push_back(corpus.shapes[j]);
  }
  return build_ssm(training);
}

std::vector<TrialReport> run_trial(const TrialSpec& spec, const ShapeCorpus& corpus,
                                   const SyntheticCorpusSpec& corpus_spec,
                                   const StatisticalShapeModel& model, int left_out,
                                   int offset_index, std::uint64_t seed, bool timing) {
  if (left_out < 0 || left_out >= static_cast<int>(corpus.shapes.size())) {
    throw InvalidArgument("left-out index outside the corpus");
  }
  const TriangleMesh& truth = corpus.shapes[left_out];
  const Vec3 viewpoint = entrance_viewpoint(truth, corpus_spec, spec.viewpoint_depth_mm);

  std::mt19937_64 rng(seed);
  std::vector<OrientedPoint> points =
      sample_triangles(truth, visible_triangles(truth, viewpoint), spec.n_points, rng);
  if (spec.corrupt) {
    const Vec3 sd = spec.generator.position_sd_mm;
    const Mat3 sigma = sd.cwiseProduct(sd).asDiagonal();
    const KentParameters kent =
        kent_from_sd(spec.generator.orientation_sd_deg, spec.generator.eccentricity);
    for (OrientedPoint& p : points) p = sample_noise(rng, sigma, kent, p);
  }
  auto [data, offset] = apply_offset(points, spec.offsets, rng);
  const TriangleMesh truth_in_data = transformed(truth, offset);

  std::vector<TrialReport> reports;
  for (int modes : spec.modes) {
    TrialReport r;
    r.shape = left_out;
    r.offset = offset_index;
    r.modes = modes;
    const auto start = std::chrono::steady_clock::now();
    try {
      RegistrationConfig config = spec.registration;
      config.n_modes = std::min(modes, model.mode_count());
      const RegistrationResult result = register_points(data, model, config);
      const TriangleMesh estimate = instantiate(model, result.shape);
      r.tre_mm = hausdorff_distance(truth_in_data, transformed(estimate, result.transform.inverse()),
                                    config.execution);
      r.shape_error_mm = hausdorff_distance(truth, estimate, config.execution);
      r.shape_error_bound_mm = result.transform.scale * r.tre_mm +
                               max_vertex_displacement(truth, result.transform * offset);
      r.e_p = result.position_score;
      r.e_o = result.orientation_score;
      r.tier = result.tier();
      r.iterations = result.iterations;
      r.converged = result.converged;
      r.n_inliers = static_cast<int>(result.inliers.size());
      r.scale = result.transform.scale;
      r.success = r.tre_mm < spec.success_threshold_mm;
    } catch (const Error& e) {
      r.failed = true;
      r.error = e.what();
      r.tre_mm = std::numeric_limits<double>::quiet_NaN();
      r.shape_error_mm = std::numeric_limits<double>::quiet_NaN();
      r.e_p = std::numeric_limits<double>::quiet_NaN();
      r.e_o = std::numeric_limits<double>::quiet_NaN();
      r.tier = ConfidenceTier::NoConfidence;
      r.success = false;
    }
    if (timing) {
      r.seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    reports.push_back(std::move(r));
  }
  return reports;
}

std::vector<TrialReport> run_experiment(SyntheticCorpusSpec corpus_spec, const TrialSpec& spec,
                                        const ExperimentOptions& options) {
  corpus_spec.validate();
  spec.validate(corpus_spec.n_shapes);
  corpus_spec.seed = corpus_seed(options.seed);
  const ShapeCorpus corpus = generate_corpus(corpus_spec);

  std::vector<int> shapes = spec.left_out;
  if (shapes.empty()) {
    for (int j = 0; j < corpus_spec.n_shapes; ++j) shapes.push_back(j);
  }
  const int workers = options.workers > 0 ? options.workers : omp_get_max_threads();
  const int n_tasks = static_cast<int>(shapes.size());
  std::vector<std::vector<TrialReport>> per_shape(n_tasks);

  TrialSpec inner = spec;
  if (workers > 1) inner.registration.execution = Execution::Serial;

  std::exception_ptr failure;
#pragma omp parallel for num_threads(workers) schedule(dynamic, 1)
  for (int k = 0; k < n_tasks; ++k) {
    try {
      const StatisticalShapeModel model = leave_one_out_model(corpus, shapes[k]);
      for (int o = 0; o < spec.offsets_per_shape; ++o) {
        std::vector<TrialReport> rows =
            run_trial(inner, corpus, corpus_spec, model, shapes[k], o,
                      trial_seed(options.seed, shapes[k], o), options.timing);
        per_shape[k].insert(per_shape[k].end(), rows.begin(), rows.end());
      }
    } catch (...) {
#pragma omp critical(ssmreg_experiment_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<TrialReport> all;
  for (auto& rows : per_shape) all.insert(all.end(), rows.begin(), rows.end());
  return all;
}

void write_trials_csv(std::ostream& out, std::span<const TrialReport> trials) {
  out << "shape,offset,modes,tRE_mm,shape_err_mm,E_p,E_o,tier,success,iterations,seconds\n";
  for (const TrialReport& r : trials) {
    out << r.shape << ',' << r.offset << ',' << r.modes << ',' << format_number(r.tre_mm) << ','
        << format_number(r.shape_error_mm) << ',' << format_number(r.e_p) << ','
        << format_number(r.e_o) << ',' << to_string(r.tier) << ',' << (r.success ? 1 : 0)
        << ',' << r.iterations << ',' << format_number(r.seconds) << '\n';
  }
}

std::pair<SyntheticCorpusSpec, TrialSpec> experiment_from_json(const nlohmann::json& j) {
  SyntheticCorpusSpec c;
  TrialSpec t;
  try {
    reject_unknown(j, {"corpus", "trial"}, "experiment");
    if (j.contains("corpus")) {
      const auto& cj = j["corpus"];
      reject_unknown(cj,
                     {"n_shapes", "length_mm", "radius_mm", "cap_depth_mm", "rings", "segments",
                      "cap_rings", "aspect", "bend_mm", "amplitude_mm", "decay", "max_frequency",
                      "basis_size", "ridge_jitter", "relief_mm", "relief_wavelength_mm",
                      "relief_lobes"},
                     "corpus");
      c.n_shapes = cj.value("n_shapes", c.n_shapes);
      c.length_mm = cj.value("length_mm", c.length_mm);
      c.radius_mm = cj.value("radius_mm", c.radius_mm);
      c.cap_depth_mm = cj.value("cap_depth_mm", c.cap_depth_mm);
      c.rings = cj.value("rings", c.rings);
      c.segments = cj.value("segments", c.segments);
      c.cap_rings = cj.value("cap_rings", c.cap_rings);
      c.amplitude_mm = cj.value("amplitude_mm", c.amplitude_mm);
      c.max_frequency = cj.value("max_frequency", c.max_frequency);
      c.ridge_jitter = cj.value("ridge_jitter", c.ridge_jitter);
      c.aspect = cj.value("aspect", c.aspect);
      c.bend_mm = cj.value("bend_mm", c.bend_mm);
      c.decay = cj.value("decay", c.decay);
      c.basis_size = cj.value("basis_size", c.basis_size);
      c.relief_mm = cj.value("relief_mm", c.relief_mm);
      c.relief_wavelength_mm = cj.value("relief_wavelength_mm", c.relief_wavelength_mm);
      c.relief_lobes = cj.value("relief_lobes", c.relief_lobes);
    }
    if (j.contains("trial")) {
      const auto& tj = j["trial"];
      reject_unknown(tj,
                     {"n_points", "offsets_per_shape", "left_out", "modes",
                      "success_threshold_mm", "viewpoint_depth_mm", "rotation_deg",
                      "translation_mm", "scale", "corrupt", "generator_noise", "registration"},
                     "trial");
      t.n_points = tj.value("n_points", t.n_points);
      t.offsets_per_shape = tj.value("offsets_per_shape", t.offsets_per_shape);
      if (tj.contains("left_out")) t.left_out = tj["left_out"].get<std::vector<int>>();
      if (tj.contains("modes")) t.modes = tj["modes"].get<std::vector<int>>();
      t.success_threshold_mm = tj.value("success_threshold_mm", t.success_threshold_mm);
      t.viewpoint_depth_mm = tj.value("viewpoint_depth_mm", t.viewpoint_depth_mm);
      if (tj.contains("rotation_deg")) {
        std::tie(t.offsets.rotation_min_deg, t.offsets.rotation_max_deg) =
            pair_of(tj["rotation_deg"], "rotation_deg");
      }
      if (tj.contains("translation_mm")) {
        std::tie(t.offsets.translation_min_mm, t.offsets.translation_max_mm) =
            pair_of(tj["translation_mm"], "translation_mm");
      }
      if (tj.contains("scale")) {
        std::tie(t.offsets.scale_min, t.offsets.scale_max) = pair_of(tj["scale"], "scale");
      }
      t.corrupt = tj.value("corrupt", t.corrupt);
      if (tj.contains("generator_noise")) {
        const auto& g = tj["generator_noise"];
        reject_unknown(g, {"position_sd_mm", "orientation_sd_deg", "eccentricity"},
                       "generator_noise");
        if (g.contains("position_sd_mm")) {
          const auto v = g["position_sd_mm"].get<std::vector<double>>();
          if (v.size() != 3) throw ParseError("generator position_sd_mm needs 3 values");
          t.generator.position_sd_mm = Vec3(v[0], v[1], v[2]);
        }
        t.generator.orientation_sd_deg =
            g.value("orientation_sd_deg", t.generator.orientation_sd_deg);
        t.generator.eccentricity = g.value("eccentricity", t.generator.eccentricity);
      }
      if (tj.contains("registration")) {
        const auto& rj = tj["registration"];
        reject_unknown(rj,
                       {"scale_bounds", "shape_bound_sd", "p_outlier", "max_iterations",
                        "min_points", "p_ladder", "noise", "tolerances"},
                       "registration");
        t.registration = registration_config_from_json(rj);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("experiment config: ") + e.what());
  }
  return {c, t};
}

}  // namespace ssmreg
