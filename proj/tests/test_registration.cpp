// Copyright 2026 The ssmreg Authors
// SPDX-License-Identifier: Apache-2.0

#include <numbers>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "ssmreg/error.hpp"
#include "ssmreg/experiment.hpp"
#include "ssmreg/mesh_query.hpp"
#include "ssmreg/outliers.hpp"
#include "ssmreg/registration.hpp"
#include "ssmreg/registration_io.hpp"
#include "ssmreg/synthetic.hpp"
#include "ssmreg/visibility.hpp"

using namespace ssmreg;
using namespace ssmreg::testing;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

const StatisticalShapeModel& cavity_model() {
  static const StatisticalShapeModel model = [] {
    SyntheticCorpusSpec spec;
    spec.n_shapes = 8;
    spec.seed = 5;
    return build_ssm(generate_corpus(spec));
  }();
  return model;
}

std::vector<OrientedPoint> sample_all(const TriangleMesh& mesh, int n, std::uint64_t seed) {
  std::vector<int> all(mesh.triangles.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  std::mt19937_64 rng(seed);
  return sample_triangles(mesh, all, n, rng);
}

std::vector<OrientedPoint> moved(std::span<const OrientedPoint> pts, const SimilarityTransform& g) {
  std::vector<OrientedPoint> out;
  for (const OrientedPoint& p : pts) out.push_back(g.apply(p));
  return out;
}

double tre(const TriangleMesh& truth, const SimilarityTransform& g, const TriangleMesh& estimate,
           const SimilarityTransform& t) {
  return hausdorff_distance(transformed(truth, g), transformed(estimate, t.inverse()));
}

// Rotation-vector / translation Newton iterations on the reference cost with
// finite-difference derivatives; scale fixed at 1, no shape modes.
Eigen::VectorXd rigid_newton(const CostConfig& c, const StatisticalShapeModel& ssm,
                             Eigen::VectorXd x) {
  const double h = 1e-4;
  auto f = [&](const Eigen::VectorXd& p) { return reference_cost(c, ssm, p); };
  for (int it = 0; it < 50; ++it) {
    Eigen::VectorXd g(6);
    Eigen::MatrixXd hess(6, 6);
    for (int i = 0; i < 6; ++i) {
      Eigen::VectorXd xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      g[i] = (f(xp) - f(xm)) / (2 * h);
      for (int j = 0; j < 6; ++j) {
        Eigen::VectorXd a = x, b = x, d = x, e = x;
        a[i] += h, a[j] += h;
        b[i] += h, b[j] -= h;
        d[i] -= h, d[j] += h;
        e[i] -= h, e[j] -= h;
        hess(i, j) = (f(a) - f(b) - f(d) + f(e)) / (4 * h * h);
      }
    }
    Eigen::VectorXd step = hess.ldlt().solve(-g.head(6));
    double alpha = 1.0;
    while (alpha > 1e-6) {
      Eigen::VectorXd trial = x;
      trial.head(6) += alpha * step;
      if (f(trial) < f(x)) break;
      alpha *= 0.5;
    }
    if (alpha <= 1e-6) break;
    x.head(6) += alpha * step;
    if (step.norm() * alpha < 1e-11) break;
  }
  return x;
}

}  // namespace

TEST_CASE("register: noise-free self-registration at identity") {
  const StatisticalShapeModel& model = cavity_model();
  const auto data = sample_all(model.mean_mesh(), 1000, 1);
  RegistrationConfig cfg;
  cfg.n_modes = 4;
  const RegistrationResult r = register_points(data, model, cfg);
  CHECK(r.converged);
  CHECK(r.iterations <= 2);
  CHECK(rotation_angle(r.transform.rotation) < 1e-6);
  CHECK(r.transform.translation.norm() < 1e-6);
  CHECK(std::abs(r.transform.scale - 1.0) < 1e-6);
  CHECK(r.shape.cwiseAbs().maxCoeff() < 1e-6);
  CHECK(r.tier() == ConfidenceTier::VeryConfident);
}

TEST_CASE("register: noise-free mean shape at a known offset") {
  const StatisticalShapeModel& model = cavity_model();
  const auto pts = sample_all(model.mean_mesh(), 1500, 2);
  SimilarityTransform g;
  g.rotation = so3_exp(8.0 * kDeg * Vec3(1, 2, -1).normalized());
  g.translation = 8.0 * Vec3(-1, 1, 1).normalized();
  g.scale = 1.03;
  RegistrationConfig cfg;
  cfg.n_modes = 3;
  const RegistrationResult r = register_points(moved(pts, g), model, cfg);
  const SimilarityTransform err = r.transform * g;
  CHECK(rotation_angle(err.rotation) < 0.1 * kDeg);
  CHECK(err.translation.norm() < 0.1);
  CHECK(std::abs(err.scale - 1.0) < 0.005);
  CHECK(tre(model.mean_mesh(), g, instantiate(model, r.shape), r.transform) < 0.1);
  CHECK(r.iterations <= 100);
}

TEST_CASE("register: every phase lowers its own objective and bounds hold") {
  const StatisticalShapeModel& model = cavity_model();
  Eigen::VectorXd s_true = Eigen::VectorXd::Zero(model.mode_count());
  s_true[0] = 2.5;
  s_true[1] = -2.0;
  const auto pts = sample_all(instantiate(model, s_true), 1200, 3);
  SimilarityTransform g;
  g.rotation = so3_exp(Vec3(0.05, 0.1, 0.0));
  g.translation = Vec3(2, -3, 1);
  g.scale = 0.97;
  RegistrationConfig cfg;
  cfg.n_modes = model.mode_count();
  cfg.shape_bound = 1.0;
  cfg.scale_lower = 0.99;
  cfg.scale_upper = 1.01;
  const RegistrationResult r = register_points(moved(pts, g), model, cfg);
  for (const IterationRecord& rec : r.trace) {
    CHECK(rec.cost_end <= rec.cost_start + 1e-9 * std::abs(rec.cost_start));
  }
  CHECK(r.shape.cwiseAbs().maxCoeff() <= 1.0);
  CHECK(r.transform.scale >= 0.99);
  CHECK(r.transform.scale <= 1.01);
  CHECK((r.transform.rotation.transpose() * r.transform.rotation - Mat3::Identity()).norm() <
        1e-9);
  CHECK(r.transform.rotation.determinant() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.iterations <= cfg.max_iterations);
  CHECK_FALSE(r.inliers.empty());
}

TEST_CASE("register: rigid path matches an independent implementation") {
  const StatisticalShapeModel& model = cavity_model();
  Eigen::VectorXd s_true = Eigen::VectorXd::Zero(model.mode_count());
  s_true[0] = 1.0;
  auto pts = sample_all(instantiate(model, s_true), 400, 4);
  std::mt19937_64 rng(4);
  for (OrientedPoint& p : pts) {
    p = sample_noise(rng, 0.09 * Mat3::Identity(), kent_from_sd(10.0, 0.5), p);
  }
  SimilarityTransform g;
  g.rotation = so3_exp(Vec3(0.03, -0.05, 0.02));
  g.translation = Vec3(1.5, 0.5, -1.0);
  const auto data = moved(pts, g);

  RegistrationConfig cfg;
  cfg.n_modes = 0;
  cfg.scale_lower = 1.0;
  cfg.scale_upper = 1.0;
  cfg.max_iterations = 3;

  SimilarityTransform t;
  for (int it = 0; it < cfg.max_iterations; ++it) {
    const Mat3 sigma = cfg.position_noise.combined(t.rotation);
    const MatchSurface surface(model.mean_mesh(), sigma);
    std::vector<Correspondence> corrs;
    for (int i = 0; i < static_cast<int>(data.size()); ++i) {
      corrs.push_back(find_most_likely_match_brute_force(i, data[i], surface, cfg.kent, t));
    }
    reject_outliers(corrs, cfg.p_outlier);
    CostConfig c;
    c.data = data;
    for (const Correspondence& m : corrs) {
      if (!m.outlier) c.inliers.push_back(m);
    }
    c.n_modes = 0;
    c.sigma = sigma;
    c.kent = cfg.kent;
    c.base_rotation = t.rotation;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(7);
    x.segment<3>(3) = t.translation;
    x[6] = 1.0;
    x = rigid_newton(c, model, x);
    t.rotation = so3_exp(x.head<3>()) * c.base_rotation;
    t.translation = x.segment<3>(3);
  }

  const RegistrationResult r = register_points(data, model, cfg);
  REQUIRE(r.iterations == 3);
  CHECK(rotation_angle(r.transform.rotation * t.rotation.transpose()) < 1e-6);
  CHECK((r.transform.translation - t.translation).norm() < 1e-5);
  CHECK(r.transform.scale == 1.0);
}

TEST_CASE("register: common rotation of data and model conjugates the result") {
  const StatisticalShapeModel& model = cavity_model();
  Eigen::VectorXd s_true = Eigen::VectorXd::Zero(model.mode_count());
  s_true[0] = -1.5;
  s_true[2] = 1.0;
  auto pts = sample_all(instantiate(model, s_true), 800, 5);
  SimilarityTransform g;
  g.rotation = so3_exp(Vec3(0.04, 0.02, -0.06));
  g.translation = Vec3(-1, 2, 0.5);
  g.scale = 1.02;
  const auto data = moved(pts, g);

  // Rotating the model means rotating its mean and each vertex block of
  // every mode.
  const Mat3 q = so3_exp(Vec3(0.7, -0.4, 1.1));
  std::vector<Vec3> mean = model.mean();
  for (Vec3& v : mean) v = q * v;
  Eigen::MatrixXd modes = model.modes();
  for (Eigen::Index i = 0; i < modes.rows(); i += 3) {
    for (Eigen::Index j = 0; j < modes.cols(); ++j) {
      modes.block<3, 1>(i, j) = q * modes.block<3, 1>(i, j);
    }
  }
  const StatisticalShapeModel rotated(mean, model.triangles(), model.eigenvalues(), modes,
                                      model.spectrum(), model.shape_count());
  SimilarityTransform qt;
  qt.rotation = q;
  const auto data_q = moved(data, qt);

  // The assumed covariance and Kent model must themselves be rotation
  // invariant for the comparison to hold.
  RegistrationConfig cfg;
  cfg.n_modes = 3;
  cfg.position_noise = PositionNoise::from_sd(Vec3::Ones());
  cfg.kent = kent_from_sd(30.0, 0.0);
  const RegistrationResult a = register_points(data, model, cfg);
  const RegistrationResult b = register_points(data_q, rotated, cfg);
  CHECK((b.shape - a.shape).cwiseAbs().maxCoeff() < 1e-6);
  CHECK(rotation_angle(b.transform.rotation.transpose() * q * a.transform.rotation *
                       q.transpose()) < 1e-6);
  CHECK((b.transform.translation - q * a.transform.translation).norm() < 1e-6);
  CHECK(b.transform.scale == doctest::Approx(a.transform.scale).epsilon(1e-8));
}

TEST_CASE("register: repeated runs are bit-identical") {
  const StatisticalShapeModel& model = cavity_model();
  const auto pts = sample_all(model.mean_mesh(), 600, 6);
  SimilarityTransform g;
  g.rotation = so3_exp(Vec3(0.05, 0.05, 0.05));
  g.translation = Vec3(3, 0, 0);
  RegistrationConfig cfg;
  cfg.n_modes = 2;
  const RegistrationResult a = register_points(moved(pts, g), model, cfg);
  const RegistrationResult b = register_points(moved(pts, g), model, cfg);
  CHECK(result_to_json(a, cfg).dump() == result_to_json(b, cfg).dump());
  cfg.execution = Execution::Serial;
  const RegistrationResult c = register_points(moved(pts, g), model, cfg);
  CHECK(a.transform.rotation == c.transform.rotation);
  CHECK(a.transform.translation == c.transform.translation);
  CHECK(a.shape == c.shape);
}

TEST_CASE("register: gross outliers are rejected") {
  const StatisticalShapeModel& model = cavity_model();
  auto data = sample_all(model.mean_mesh(), 900, 7);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-25.0, 25.0);
  const std::size_t clean = data.size();
  for (int i = 0; i < 100; ++i) {
    data.push_back({Vec3(u(rng), u(rng), u(rng)), random_unit(rng)});
  }
  RegistrationConfig cfg;
  cfg.n_modes = 2;
  const RegistrationResult r = register_points(data, model, cfg);
  int flagged = 100;
  for (const Correspondence& c : r.inliers) {
    if (c.data_index >= static_cast<int>(clean)) --flagged;
  }
  CHECK(flagged >= 90);
  CHECK(tre(model.mean_mesh(), {}, instantiate(model, r.shape), r.transform) < 0.5);
}

TEST_CASE("register: invalid configurations and degenerate data") {
  const StatisticalShapeModel& model = cavity_model();
  const auto data = sample_all(model.mean_mesh(), 50, 8);
  RegistrationConfig cfg;
  cfg.n_modes = model.mode_count() + 1;
  CHECK_THROWS_AS(register_points(data, model, cfg), InvalidArgument);
  cfg.n_modes = 0;
  cfg.scale_lower = 1.2;
  CHECK_THROWS_AS(register_points(data, model, cfg), InvalidArgument);
  cfg = {};
  cfg.p_outlier = 1.0;
  CHECK_THROWS_AS(register_points(data, model, cfg), InvalidArgument);
  cfg = {};
  CHECK_THROWS_AS(register_points(std::span(data).first(5), model, cfg), DegenerateRegistration);
}

TEST_CASE("register: config JSON parsing") {
  const nlohmann::json j = {{"n_modes", 5},
                            {"scale_bounds", {0.8, 1.2}},
                            {"p_ladder", {0.9, 0.99}},
                            {"noise", {{"position_sd_mm", {1.0, 2.0, 3.0}}}}};
  const RegistrationConfig c = registration_config_from_json(j);
  CHECK(c.n_modes == 5);
  CHECK(c.scale_lower == 0.8);
  CHECK(c.scale_upper == 1.2);
  CHECK(c.p_ladder == std::vector<double>{0.9, 0.99});
  CHECK(c.position_noise.sigma_x(2, 2) == doctest::Approx(9.0));
  CHECK_THROWS_AS(registration_config_from_json({{"n_modes", "many"}}), ParseError);
  CHECK_THROWS_AS(registration_config_from_json({{"noise", {{"position_sd_mm", {1.0}}}}}),
                  ParseError);
}
