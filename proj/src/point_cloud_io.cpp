// Copyright 2026 The ssmreg Authors
// SPDX-License-Identifier: Apache-2.0

#include "ssmreg/point_cloud_io.hpp"

#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>

#include "ssmreg/error.hpp"

namespace ssmreg {

std::vector<OrientedPoint> read_point_cloud(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("point cloud CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "x,y,z,nx,ny,nz") {
    throw ParseError("point cloud CSV header must be 'x,y,z,nx,ny,nz'");
  }
  std::vector<OrientedPoint> points;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    std::istringstream ls(line);
    double v[6];
    for (int k = 0; k < 6; ++k) {
      std::string cell;
      if (!std::getline(ls, cell, ',')) {
        throw ParseError("row " + std::to_string(row) + ": expected 6 columns");
      }
      try {
        std::size_t used = 0;
        v[k] = std::stod(cell, &used);
      } catch (const std::exception&) {
        throw ParseError("row " + std::to_string(row) + ": bad number '" + cell + "'");
      }
    }
    OrientedPoint p;
    p.position = Vec3(v[0], v[1], v[2]);
    const Vec3 n(v[3], v[4], v[5]);
    if (!(n.norm() > 0.0) || !p.position.allFinite()) {
      throw ParseError("row " + std::to_string(row) + ": invalid point or zero normal");
    }
    p.normal = n.normalized();
    points.push_back(p);
  }
  return points;
}

std::vector<OrientedPoint> load_point_cloud(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open point cloud " + path.string());
  return read_point_cloud(in);
}

void write_point_cloud(std::ostream& out, const std::vector<OrientedPoint>& points) {
  out << "x,y,z,nx,ny,nz\n" << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const OrientedPoint& p : points) {
    out << p.position.x() << ',' << p.position.y() << ',' << p.position.z() << ','
        << p.normal.x() << ',' << p.normal.y() << ',' << p.normal.z() << '\n';
  }
}

void save_point_cloud(const std::filesystem::path& path,
                      const std::vector<OrientedPoint>& points) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_point_cloud(out, points);
}

}  // namespace ssmreg
