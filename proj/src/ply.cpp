// Copyright 2026 The ssmreg Authors
// SPDX-License-Identifier: Apache-2.0

#include "ssmreg/ply.hpp"

#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "ssmreg/error.hpp"

namespace ssmreg {

namespace {

struct Element {
  std::string name;
  long count = 0;
  std::vector<std::string> properties;  // scalar names; "list:<name>" for lists
};

std::string next_line(std::istream& in, int& line_no) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("unexpected end of PLY file");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

[[noreturn]] void fail(int line_no, const std::string& what) {
  throw ParseError("PLY line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

TriangleMesh read_ply(std::istream& in) {
  int line_no = 0;
  if (next_line(in, line_no) != "ply") fail(line_no, "missing 'ply' magic");

  std::vector<Element> elements;
  bool ascii = false;
  for (;;) {
    std::istringstream ls(next_line(in, line_no));
    std::string key;
    ls >> key;
    if (key == "end_header") break;
    if (key.empty() || key == "comment" || key == "obj_info") continue;
    if (key == "format") {
      std::string fmt;
      ls >> fmt;
      if (fmt != "ascii") fail(line_no, "only ASCII PLY is supported, got '" + fmt + "'");
      ascii = true;
    } else if (key == "element") {
      Element e;
      if (!(ls >> e.name >> e.count) || e.count < 0) fail(line_no, "bad element line");
      elements.push_back(e);
    } else if (key == "property") {
      if (elements.empty()) fail(line_no, "property before any element");
      std::string type;
      ls >> type;
      if (type == "list") {
        std::string count_type, item_type, name;
        ls >> count_type >> item_type >> name;
        elements.back().properties.push_back("list:" + name);
      } else {
        std::string name;
        ls >> name;
        elements.back().properties.push_back(name);
      }
    } else {
      fail(line_no, "unknown header keyword '" + key + "'");
    }
  }
  if (!ascii) fail(line_no, "missing format line");

  std::vector<Vec3> vertices;
  std::vector<Vec3> file_normals;
  std::vector<Triangle> triangles;
  bool have_vertices = false;
  bool have_faces = false;

  for (const Element& e : elements) {
    if (e.name == "vertex") {
      have_vertices = true;
      int ix = -1, iy = -1, iz = -1, inx = -1, iny = -1, inz = -1;
      for (int k = 0; k < static_cast<int>(e.properties.size()); ++k) {
        const std::string& p = e.properties[k];
        if (p.rfind("list:", 0) == 0) fail(line_no, "list property on vertex element");
        if (p == "x") ix = k;
        if (p == "y") iy = k;
        if (p == "z") iz = k;
        if (p == "nx") inx = k;
        if (p == "ny") iny = k;
        if (p == "nz") inz = k;
      }
      if (ix < 0 || iy < 0 || iz < 0) fail(line_no, "vertex element lacks x/y/z");
      const bool normals = inx >= 0 && iny >= 0 && inz >= 0;
      std::vector<double> vals(e.properties.size());
      for (long i = 0; i < e.count; ++i) {
        std::istringstream ls(next_line(in, line_no));
        for (double& v : vals) {
          if (!(ls >> v)) fail(line_no, "too few vertex values");
        }
        vertices.emplace_back(vals[ix], vals[iy], vals[iz]);
        if (normals) file_normals.emplace_back(vals[inx], vals[iny], vals[inz]);
      }
    } else if (e.name == "face") {
      have_faces = true;
      if (e.properties.size() != 1 || e.properties[0].rfind("list:", 0) != 0) {
        fail(line_no, "face element must hold a single vertex index list");
      }
      for (long i = 0; i < e.count; ++i) {
        std::istringstream ls(next_line(in, line_no));
        long n = 0;
        if (!(ls >> n)) fail(line_no, "missing face vertex count");
        if (n != 3) fail(line_no, "only triangular faces are supported (got " + std::to_string(n) + ")");
        Triangle t{};
        for (int& idx : t) {
          long v = 0;
          if (!(ls >> v)) fail(line_no, "too few face indices");
          if (v < 0 || v >= static_cast<long>(vertices.size())) {
            fail(line_no, "face index " + std::to_string(v) + " out of range for " +
                              std::to_string(vertices.size()) + " vertices");
          }
          idx = static_cast<int>(v);
        }
        triangles.push_back(t);
      }
    } else {
      for (long i = 0; i < e.count; ++i) next_line(in, line_no);
    }
  }
  if (!have_vertices || !have_faces) throw ParseError("PLY needs vertex and face elements");

  TriangleMesh mesh = make_mesh(std::move(vertices), std::move(triangles));
  if (!file_normals.empty()) {
    for (std::size_t i = 0; i < file_normals.size(); ++i) {
      const double len = file_normals[i].norm();
      if (len > 1e-12) mesh.normals[i] = file_normals[i] / len;
    }
  }
  return mesh;
}

TriangleMesh load_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open mesh file " + path.string());
  try {
    return read_ply(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_ply(std::ostream& out, const TriangleMesh& mesh) {
  out << "ply\nformat ascii 1.0\n"
      << "element vertex " << mesh.vertices.size() << "\n"
      << "property double x\nproperty double y\nproperty double z\n"
      << "property double nx\nproperty double ny\nproperty double nz\n"
      << "element face " << mesh.triangles.size() << "\n"
      << "property list uchar int vertex_indices\nend_header\n";
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    const Vec3& v = mesh.vertices[i];
    const Vec3& n = mesh.normals[i];
    out << v.x() << ' ' << v.y() << ' ' << v.z() << ' ' << n.x() << ' ' << n.y() << ' '
        << n.z() << '\n';
  }
  for (const Triangle& t : mesh.triangles) {
    out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  }
}

void save_mesh(const std::filesystem::path& path, const TriangleMesh& mesh) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write mesh file " + path.string());
  write_ply(out, mesh);
}

}  // namespace ssmreg
