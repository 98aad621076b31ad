// Copyright 2026 The ssmreg Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "ssmreg/types.hpp"

namespace ssmreg {

/// CSV with header "x,y,z,nx,ny,nz", one oriented point per row, mm.
/// Normals are normalised on read.
std::vector<OrientedPoint> read_point_cloud(std::istream& in);
std::vector<OrientedPoint> load_point_cloud(const std::filesystem::path& path);

void write_point_cloud(std::ostream& out, const std::vector<OrientedPoint>& points);
void save_point_cloud(const std::filesystem::path& path,
                      const std::vector<OrientedPoint>& points);

}  // namespace ssmreg
