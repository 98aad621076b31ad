// Copyright 2026 The ssmreg Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iosfwd>

#include "ssmreg/mesh.hpp"

namespace ssmreg {

/// Reads an ASCII PLY with a vertex element (x, y, z and optional nx, ny,
/// nz) and a triangular face element. Normals are computed when absent.
TriangleMesh load_mesh(const std::filesystem::path& path);
TriangleMesh read_ply(std::istream& in);

void save_mesh(const std::filesystem::path& path, const TriangleMesh& mesh);
void write_ply(std::ostream& out, const TriangleMesh& mesh);

}  // namespace ssmreg
