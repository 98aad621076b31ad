// Copyright 2026 The ssmreg Authors
// SPDX-License-Identifier: Apache-2.0

// Random registration-cost configurations and an independent evaluation of
// the phase objective, shared by the unit and acceptance tests.

#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "ssmreg/correspondence.hpp"
#include "ssmreg/cost.hpp"
#include "ssmreg/noise.hpp"
#include "ssmreg/ssm.hpp"
#include "support.hpp"

namespace ssmreg::testing {

inline StatisticalShapeModel bumpy_model(int n_shapes, std::uint64_t seed) {
  ShapeCorpus c;
  for (int j = 0; j < n_shapes; ++j) c.shapes.push_back(bumpy_sphere(seed + j));
  return build_ssm(c);
}

struct CostConfig {
  std::vector<OrientedPoint> data;
  std::vector<Correspondence> inliers;
  int n_modes = 0;
  Mat3 sigma = Mat3::Identity();
  KentParameters kent;
  Mat3 base_rotation = Mat3::Identity();
  Eigen::VectorXd x;  // evaluation point
};

/// Matches at random surface locations, data near the transformed matches,
/// nonzero shape, scale away from 1, anisotropic covariance and beta > 0.
inline CostConfig random_cost_config(const StatisticalShapeModel& ssm, std::mt19937_64& rng,
                                     int n_points = 40) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_int_distribution<int> tri(0, static_cast<int>(ssm.triangles().size()) - 1);
  CostConfig c;
  c.n_modes = 1 + static_cast<int>(u(rng) * ssm.mode_count()) % ssm.mode_count();
  c.sigma = random_spd(rng, 0.3, 4.0);
  const double kappa = 1.0 + 10.0 * u(rng);
  c.kent = {kappa, (0.05 + 0.4 * u(rng)) * kappa};
  c.base_rotation = random_rotation(rng, 1.0);

  Eigen::VectorXd s(c.n_modes);
  for (int j = 0; j < c.n_modes; ++j) s[j] = 2.0 * g(rng);
  const TriangleMesh shape = instantiate(ssm, s);
  SimilarityTransform t;
  t.scale = 0.9 + 0.2 * u(rng);
  t.rotation = random_rotation(rng, 0.2) * c.base_rotation;
  t.translation = Vec3(g(rng), g(rng), g(rng));
  const SimilarityTransform inv = t.inverse();

  for (int i = 0; i < n_points; ++i) {
    double a = u(rng), b = u(rng);
    if (a + b > 1) a = 1 - a, b = 1 - b;
    Correspondence m;
    m.data_index = i;
    m.loc = {tri(rng), Vec3(1 - a - b, a, b)};
    m.y = point_at(shape, m.loc);
    c.inliers.push_back(m);
    OrientedPoint x = inv.apply(m.y);
    x.position += Vec3(g(rng), g(rng), g(rng));
    x.normal = (x.normal + 0.3 * Vec3(g(rng), g(rng), g(rng))).normalized();
    c.data.push_back(x);
  }

  c.x.resize(RegistrationCost::kShape + c.n_modes);
  c.x.segment<3>(RegistrationCost::kRotation) = 0.1 * Vec3(g(rng), g(rng), g(rng));
  c.x.segment<3>(RegistrationCost::kTranslation) = t.translation + 0.5 * Vec3(g(rng), g(rng), g(rng));
  c.x[RegistrationCost::kScale] = 0.9 + 0.2 * u(rng);
  for (int j = 0; j < c.n_modes; ++j) c.x[RegistrationCost::kShape + j] = s[j] + 0.5 * g(rng);
  return c;
}

inline RegistrationCost make_cost(const CostConfig& c, const StatisticalShapeModel& ssm) {
  return RegistrationCost(c.data, c.inliers, ssm, c.n_modes, c.sigma, c.kent, c.base_rotation);
}

/// The phase objective written out term by term.
inline double reference_cost(const CostConfig& c, const StatisticalShapeModel& ssm,
                             const Eigen::VectorXd& x) {
  const Mat3 r = so3_exp(x.segment<3>(RegistrationCost::kRotation)) * c.base_rotation;
  const Vec3 t = x.segment<3>(RegistrationCost::kTranslation);
  const double a = x[RegistrationCost::kScale];
  const Eigen::VectorXd s = x.tail(c.n_modes);
  const Mat3 p = c.sigma.inverse();
  double total = 0.5 * s.squaredNorm();
  for (const Correspondence& m : c.inliers) {
    const OrientedPoint& xi = c.data[m.data_index];
    const Vec3 res = deform_matched_point(ssm, m.loc, s) - a * r * xi.position - t;
    total += 0.5 * res.dot(p * res);
    total += c.kent.kappa * (1.0 - m.y.normal.dot(r * xi.normal));
    const KentFrame f = tangent_frame(xi.normal);
    const Vec3 yn = r.transpose() * m.y.normal;
    total -= c.kent.beta * (std::pow(f.gamma1.dot(yn), 2) - std::pow(f.gamma2.dot(yn), 2));
  }
  return total;
}

/// Central finite differences of the cost.
inline Eigen::VectorXd numeric_gradient(const RegistrationCost& cost, const Eigen::VectorXd& x,
                                        double h = 1e-6) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    Eigen::VectorXd xp = x;
    Eigen::VectorXd xm = x;
    xp[k] += h;
    xm[k] -= h;
    g[k] = (cost.evaluate(xp) - cost.evaluate(xm)) / (2.0 * h);
  }
  return g;
}

/// Norm-wise relative error of an analytic gradient against differences.
inline double gradient_error(const RegistrationCost& cost, const Eigen::VectorXd& x) {
  Eigen::VectorXd analytic;
  cost.evaluate(x, &analytic);
  const Eigen::VectorXd numeric = numeric_gradient(cost, x);
  return (analytic - numeric).norm() / std::max(numeric.norm(), 1e-8);
}

}  // namespace ssmreg::testing
