// Copyright 2026 The ssmreg Authors
// SPDX-License-Identifier: Apache-2.0

#include <random>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "ssmreg/error.hpp"
#include "ssmreg/ssm.hpp"
#include "ssmreg/ssm_io.hpp"
#include "support.hpp"

using namespace ssmreg;

namespace {

ShapeCorpus random_corpus(int n, std::uint64_t seed, int rings = 8, int segments = 12) {
  const TriangleMesh base = ssmreg::testing::uv_sphere(10.0, rings, segments);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 0.4);
  ShapeCorpus c;
  for (int j = 0; j < n; ++j) {
    std::vector<Vec3> v = base.vertices;
    for (Vec3& p : v) p += Vec3(g(rng), g(rng), g(rng));
    c.shapes.push_back(make_mesh(std::move(v), base.triangles));
  }
  return c;
}

double max_vertex_error(const TriangleMesh& a, const TriangleMesh& b) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.vertices.size(); ++i) {
    e = std::max(e, (a.vertices[i] - b.vertices[i]).norm());
  }
  return e;
}

}  // namespace

TEST_CASE("ssm: identical shapes give zero variance and the shape as mean") {
  const TriangleMesh s = ssmreg::testing::bumpy_sphere(1);
  const StatisticalShapeModel m = build_ssm({{s, s}});
  CHECK(m.mode_count() == 0);
  CHECK(m.spectrum().cwiseAbs().maxCoeff() == 0.0);
  CHECK(max_vertex_error(m.mean_mesh(), s) < 1e-12);
}

TEST_CASE("ssm: two-sample corpus has one mode along the displacement") {
  const TriangleMesh base = ssmreg::testing::uv_sphere(5.0, 6, 8);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 0.2);
  std::vector<Vec3> plus = base.vertices;
  std::vector<Vec3> minus = base.vertices;
  Eigen::VectorXd d(3 * base.vertices.size());
  for (std::size_t i = 0; i < base.vertices.size(); ++i) {
    const Vec3 di(g(rng), g(rng), g(rng));
    d.segment<3>(3 * i) = di;
    plus[i] += di;
    minus[i] -= di;
  }
  const StatisticalShapeModel m =
      build_ssm({{make_mesh(plus, base.triangles), make_mesh(minus, base.triangles)}});
  REQUIRE(m.mode_count() == 1);
  // Covariance (1/2)(d d^T + d d^T) = d d^T, so lambda = |d|^2.
  CHECK(m.eigenvalues()[0] == doctest::Approx(d.squaredNorm()).epsilon(1e-10));
  CHECK(std::abs(m.modes().col(0).dot(d.normalized())) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(max_vertex_error(m.mean_mesh(), base) < 1e-12);
}

TEST_CASE("ssm: spectrum matches a direct covariance eigen-decomposition") {
  const ShapeCorpus c = random_corpus(6, 17, 5, 6);
  const StatisticalShapeModel m = build_ssm(c);
  const int n_s = static_cast<int>(c.shapes.size());
  Eigen::MatrixXd x(3 * c.shapes[0].vertices.size(), n_s);
  for (int j = 0; j < n_s; ++j) x.col(j) = stack_vertices(c.shapes[j].vertices);
  const Eigen::VectorXd mean = x.rowwise().mean();
  x.colwise() -= mean;
  const Eigen::MatrixXd cov = x * x.transpose() / n_s;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  const Eigen::VectorXd direct = eig.eigenvalues().reverse();

  REQUIRE(m.mode_count() == n_s - 1);
  for (int j = 0; j < m.mode_count(); ++j) {
    CHECK(m.eigenvalues()[j] == doctest::Approx(direct[j]).epsilon(1e-9));
    const Eigen::VectorXd v = eig.eigenvectors().col(cov.rows() - 1 - j);
    CHECK(std::abs(v.dot(m.modes().col(j))) == doctest::Approx(1.0).epsilon(1e-8));
  }
  CHECK(m.eigenvalues().sum() == doctest::Approx(cov.trace()).epsilon(1e-6));
  for (int j = 1; j < m.mode_count(); ++j) CHECK(m.eigenvalues()[j] <= m.eigenvalues()[j - 1]);
}

TEST_CASE("ssm: modes are orthonormal and weighted by sqrt(lambda)") {
  const StatisticalShapeModel m = build_ssm(random_corpus(10, 5));
  const Eigen::MatrixXd gram = m.modes().transpose() * m.modes();
  CHECK((gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() <
        1e-8);
  for (int j = 0; j < m.mode_count(); ++j) {
    CHECK(m.weighted_modes().col(j).norm() ==
          doctest::Approx(std::sqrt(m.eigenvalues()[j])).epsilon(1e-12));
  }
}

TEST_CASE("ssm: training shapes round-trip through all modes") {
  const ShapeCorpus c = random_corpus(10, 21);
  const StatisticalShapeModel m = build_ssm(c);
  REQUIRE(m.mode_count() == 9);
  for (const TriangleMesh& shape : c.shapes) {
    const Eigen::VectorXd s = project(m, shape, m.mode_count());
    CHECK(max_vertex_error(instantiate(m, s), shape) < 1e-6);
  }
}

TEST_CASE("ssm: instantiate and project are inverse on parameter vectors") {
  const StatisticalShapeModel m = build_ssm(random_corpus(10, 8));
  CHECK(max_vertex_error(instantiate(m, Eigen::VectorXd::Zero(m.mode_count())), m.mean_mesh()) ==
        0.0);
  CHECK(project(m, m.mean_mesh(), m.mode_count()).cwiseAbs().maxCoeff() < 1e-9);

  Eigen::VectorXd unit = Eigen::VectorXd::Zero(m.mode_count());
  unit[0] = 1.0;
  const TriangleMesh one = instantiate(m, unit);
  Eigen::VectorXd disp = stack_vertices(one.vertices) - stack_vertices(m.mean());
  CHECK(disp.norm() == doctest::Approx(std::sqrt(m.eigenvalues()[0])).epsilon(1e-12));

  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int k = 0; k < 50; ++k) {
    Eigen::VectorXd s(m.mode_count());
    for (int j = 0; j < s.size(); ++j) s[j] = u(rng);
    const Eigen::VectorXd back = project(m, instantiate(m, s), m.mode_count());
    CHECK((back - s).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("ssm: deformed matched points follow instantiate and are linear in s") {
  const StatisticalShapeModel m = build_ssm(random_corpus(8, 13));
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_real_distribution<double> sd(-2.0, 2.0);
  std::uniform_int_distribution<int> tri(0, static_cast<int>(m.triangles().size()) - 1);
  for (int k = 0; k < 100; ++k) {
    double a = u(rng), b = u(rng);
    if (a + b > 1) a = 1 - a, b = 1 - b;
    const BarycentricLocation loc{tri(rng), Vec3(1 - a - b, a, b)};
    const int n_m = 1 + k % m.mode_count();
    Eigen::VectorXd s(n_m);
    for (int j = 0; j < n_m; ++j) s[j] = sd(rng);

    const Vec3 direct = point_at(instantiate(m, s), loc).position;
    CHECK((deform_matched_point(m, loc, s) - direct).norm() < 1e-12);
    const Vec3 mean_pt = deform_matched_point(m, loc, Eigen::VectorXd::Zero(n_m));
    CHECK((mean_pt - point_at(m.mean_mesh(), loc).position).norm() < 1e-12);

    const double alpha = sd(rng);
    const Vec3 scaled = deform_matched_point(m, loc, alpha * s) - mean_pt;
    CHECK((scaled - alpha * (deform_matched_point(m, loc, s) - mean_pt)).norm() < 1e-10);
  }
  const BarycentricLocation vertex_loc{3, Vec3(1, 0, 0)};
  Eigen::VectorXd s = Eigen::VectorXd::Constant(m.mode_count(), 0.7);
  const int v0 = m.triangles()[3][0];
  CHECK((deform_matched_point(m, vertex_loc, s) - instantiate(m, s).vertices[v0]).norm() < 1e-12);
}

TEST_CASE("ssm: invalid input is rejected") {
  const ShapeCorpus c = random_corpus(4, 1);
  CHECK_THROWS_AS(build_ssm({{c.shapes[0]}}), InvalidArgument);

  ShapeCorpus mixed = c;
  mixed.shapes.push_back(ssmreg::testing::uv_sphere(10.0, 9, 12));
  CHECK_THROWS_AS(build_ssm(mixed), GeometryError);

  const StatisticalShapeModel m = build_ssm(c);
  CHECK_THROWS_AS(instantiate(m, Eigen::VectorXd::Zero(m.mode_count() + 1)), InvalidArgument);
  CHECK_THROWS_AS(project(m, ssmreg::testing::uv_sphere(10.0, 9, 12), 1), GeometryError);
}

TEST_CASE("ssm: JSON round trip is exact and deterministic") {
  const StatisticalShapeModel m = build_ssm(random_corpus(6, 2));
  const std::string text = ssm_to_json(m);
  const StatisticalShapeModel r = ssm_from_json(text);
  CHECK(ssm_to_json(r) == text);
  CHECK(r.mode_count() == m.mode_count());
  CHECK((r.weighted_modes() - m.weighted_modes()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(ssm_to_json(build_ssm(random_corpus(6, 2))) == text);
  CHECK_THROWS_AS(ssm_from_json("{\"schema\": \"other\"}"), ParseError);
  CHECK_THROWS_AS(ssm_from_json("not json"), ParseError);
}
