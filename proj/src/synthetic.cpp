// Copyright 2026 The ssmreg Authors
// SPDX-License-Identifier: Apache-2.0

#include "ssmreg/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Geometry>

#include "ssmreg/error.hpp"

namespace ssmreg {

namespace {

constexpr double kPi = std::numbers::pi;

struct Ridge {
  double u;
  double phi;
  double height;  // fraction of the local radius
  double width_u;
  double width_phi;
};

constexpr Ridge kRidges[3] = {
    {0.35, 0.0, 0.45, 0.06, 0.45},
    {0.62, 0.6, 0.40, 0.06, 0.40},
    {0.50, kPi, 0.30, 0.08, 0.50},
};

double angle_diff(double a, double b) {
  return std::remainder(a - b, 2.0 * kPi);
}

Vec3 centerline(const SyntheticCorpusSpec& spec, double u) {
  return Vec3(spec.bend_mm * std::sin(kPi * u), -0.375 * spec.bend_mm * std::sin(2.0 * kPi * u),
              -0.5 * spec.length_mm + spec.length_mm * u);
}

// Cross-section offset from the centerline at (u, phi).
Vec3 section(const SyntheticCorpusSpec& spec, double u, double phi, const Vec3& ridge_scale) {
  const double r0 = spec.radius_mm * (0.85 + 0.3 * std::sin(kPi * u));
  double f = 1.0;
  for (int b = 0; b < 3; ++b) {
    const Ridge& r = kRidges[b];
    const double du = (u - r.u) / r.width_u;
    const double dp = angle_diff(phi, r.phi) / r.width_phi;
    f -= ridge_scale[b] * r.height * std::exp(-du * du - dp * dp);
  }
  const double relief = spec.relief_mm *
                        std::sin(2.0 * kPi * u * spec.length_mm / spec.relief_wavelength_mm) *
                        std::cos(spec.relief_lobes * phi);
  const double r = r0 * f - relief;
  return Vec3(r * std::cos(phi), spec.aspect * r * std::sin(phi), 0.0);
}

std::uint64_t splitmix(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

struct Field {
  int axis;
  int fx, fy, fz;
  int frequency_sq;
};

std::vector<Field> displacement_fields(int max_frequency) {
  std::vector<Field> fields;
  for (int axis = 0; axis < 3; ++axis) {
    for (int fx = 0; fx <= max_frequency; ++fx) {
      for (int fy = 0; fy <= max_frequency; ++fy) {
        for (int fz = 0; fz <= max_frequency; ++fz) {
          if (fx == 0 && fy == 0 && fz == 0) continue;
          fields.push_back({axis, fx, fy, fz, fx * fx + fy * fy + fz * fz});
        }
      }
    }
  }
  std::stable_sort(fields.begin(), fields.end(),
                   [](const Field& a, const Field& b) { return a.frequency_sq < b.frequency_sq; });
  return fields;
}

double field_value(const Field& f, const Vec3& q) {
  return std::cos(0.5 * kPi * f.fx * (q.x() + 1.0)) * std::cos(0.5 * kPi * f.fy * (q.y() + 1.0)) *
         std::cos(kPi * f.fz * q.z());
}

// Least-squares similarity alignment onto `target`, so that corpus shapes
// differ by deformation only.
std::vector<Vec3> align_to(const std::vector<Vec3>& points, const std::vector<Vec3>& target) {
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::Matrix3Xd src(3, n);
  Eigen::Matrix3Xd dst(3, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    src.col(i) = points[i];
    dst.col(i) = target[i];
  }
  const Eigen::Matrix4d t = Eigen::umeyama(src, dst, true);
  std::vector<Vec3> out(points.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    out[i] = t.topLeftCorner<3, 3>() * points[i] + t.topRightCorner<3, 1>();
  }
  return out;
}

}  // namespace

void SyntheticCorpusSpec::validate() const {
  if (n_shapes < 1) throw InvalidArgument("corpus needs at least one shape");
  if (!(length_mm > 0 && radius_mm > 0 && cap_depth_mm > 0)) {
    throw InvalidArgument("cavity dimensions must be positive");
  }
  if (rings < 3 || segments < 8 || cap_rings < 1) {
    throw InvalidArgument("cavity resolution too coarse");
  }
  if (!(aspect > 0.0 && aspect <= 1.0) || !(bend_mm >= 0.0)) {
    throw InvalidArgument("invalid cross-section shape");
  }
  if (!(relief_mm >= 0.0 && relief_wavelength_mm > 0.0) || relief_lobes < 0) {
    throw InvalidArgument("invalid wall relief");
  }
  if (!(decay > 0.0 && decay <= 1.0)) throw InvalidArgument("decay must lie in (0, 1]");
  if (!(amplitude_mm >= 0.0) || max_frequency < 1 || basis_size < 0 || !(ridge_jitter >= 0.0)) {
    throw InvalidArgument("invalid deformation settings");
  }
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b,
                          std::uint64_t c) {
  std::uint64_t state = master;
  std::uint64_t h = splitmix(state);
  for (std::uint64_t v : {a, b, c}) {
    state ^= v + 0x632BE59BD9B4E019ULL + (h << 6) + (h >> 2);
    h = splitmix(state);
  }
  return h;
}

TriangleMesh make_cavity(const SyntheticCorpusSpec& spec, const Vec3& ridge_scale) {
  spec.validate();
  const int rings = spec.rings;
  const int seg = spec.segments;
  std::vector<Vec3> vertices;
  vertices.reserve(static_cast<std::size_t>((rings + spec.cap_rings) * seg + 1));
  for (int i = 0; i < rings; ++i) {
    const double u = static_cast<double>(i) / (rings - 1);
    for (int j = 0; j < seg; ++j) {
      const double phi = 2.0 * kPi * j / seg;
      vertices.push_back(centerline(spec, u) + section(spec, u, phi, ridge_scale));
    }
  }
  const Vec3 end = centerline(spec, 1.0);
  for (int k = 1; k <= spec.cap_rings; ++k) {
    const double a = 0.5 * kPi * k / (spec.cap_rings + 1);
    for (int j = 0; j < seg; ++j) {
      const double phi = 2.0 * kPi * j / seg;
      vertices.push_back(end + std::cos(a) * section(spec, 1.0, phi, ridge_scale) +
                         Vec3(0.0, 0.0, spec.cap_depth_mm * std::sin(a)));
    }
  }
  vertices.push_back(end + Vec3(0.0, 0.0, spec.cap_depth_mm));
  const int apex = static_cast<int>(vertices.size()) - 1;

  // Winding gives normals pointing into the cavity.
  std::vector<Triangle> tris;
  const int total_rings = rings + spec.cap_rings;
  for (int i = 0; i + 1 < total_rings; ++i) {
    for (int j = 0; j < seg; ++j) {
      const int jn = (j + 1) % seg;
      const int a = i * seg + j;
      const int b = (i + 1) * seg + j;
      const int c = i * seg + jn;
      const int d = (i + 1) * seg + jn;
      tris.push_back({a, b, c});
      tris.push_back({c, b, d});
    }
  }
  const int last = (total_rings - 1) * seg;
  for (int j = 0; j < seg; ++j) {
    tris.push_back({last + j, apex, last + (j + 1) % seg});
  }
  return make_mesh(std::move(vertices), std::move(tris));
}

ShapeCorpus generate_corpus(const SyntheticCorpusSpec& spec) {
  spec.validate();
  const TriangleMesh base = make_cavity(spec);
  std::vector<Field> fields = displacement_fields(spec.max_frequency);
  if (spec.basis_size > 0 && spec.basis_size < static_cast<int>(fields.size())) {
    fields.resize(spec.basis_size);
  }
  const double xy_scale = 1.2 * spec.radius_mm;
  const double z_span = spec.length_mm + spec.cap_depth_mm;

  // Field values depend only on the base geometry.
  const std::size_t nv = base.vertices.size();
  std::vector<double> values(fields.size() * nv);
  for (std::size_t k = 0; k < fields.size(); ++k) {
    for (std::size_t i = 0; i < nv; ++i) {
      const Vec3& p = base.vertices[i];
      const Vec3 q(p.x() / xy_scale, p.y() / xy_scale, (p.z() + 0.5 * spec.length_mm) / z_span);
      values[k * nv + i] = field_value(fields[k], q);
    }
  }

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  ShapeCorpus corpus;
  corpus.shapes.reserve(spec.n_shapes);
  for (int j = 0; j < spec.n_shapes; ++j) {
    std::vector<double> coeffs(fields.size());
    for (double& c : coeffs) c = gauss(rng);
    Vec3 ridge_scale;
    for (int b = 0; b < 3; ++b) ridge_scale[b] = 1.0 + spec.ridge_jitter * gauss(rng);
    const TriangleMesh ridged =
        spec.ridge_jitter > 0.0 ? make_cavity(spec, ridge_scale) : base;

    double damping = 1.0;
    bool ok = false;
    for (int attempt = 0; attempt < 5 && !ok; ++attempt, damping *= 0.5) {
      std::vector<Vec3> vertices = ridged.vertices;
      for (std::size_t k = 0; k < fields.size(); ++k) {
        const double amp = damping * spec.amplitude_mm * std::pow(spec.decay, static_cast<double>(k)) * coeffs[k];
        for (std::size_t i = 0; i < nv; ++i) {
          vertices[i][fields[k].axis] += amp * values[k * nv + i];
        }
      }
      ok = true;
      for (std::size_t f = 0; f < base.triangles.size() && ok; ++f) {
        const Triangle& t = base.triangles[f];
        const Vec3 n = (vertices[t[1]] - vertices[t[0]]).cross(vertices[t[2]] - vertices[t[0]]);
        ok = n.norm() > 0.0 && n.normalized().dot(face_normal(ridged, static_cast<int>(f))) > 0.2;
      }
      if (ok) corpus.shapes.push_back(make_mesh(align_to(vertices, ridged.vertices), base.triangles));
    }
    if (!ok) {
      throw GeometryError("shape " + std::to_string(j) +
                          " folds over after 5 damped attempts; lower the amplitude");
    }
  }
  return corpus;
}

Vec3 entrance_viewpoint(const TriangleMesh& cavity, const SyntheticCorpusSpec& spec,
                        double depth_mm) {
  const int seg = spec.segments;
  Vec3 c0 = Vec3::Zero();
  Vec3 c1 = Vec3::Zero();
  for (int j = 0; j < seg; ++j) {
    c0 += cavity.vertices[j];
    c1 += cavity.vertices[seg + j];
  }
  c0 /= seg;
  c1 /= seg;
  return c0 + depth_mm * (c1 - c0).normalized();
}

}  // namespace ssmreg
