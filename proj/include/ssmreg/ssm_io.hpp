// Copyright 2026 The ssmreg Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>

#include "ssmreg/ssm.hpp"

namespace ssmreg {

inline constexpr const char* kSsmSchema = "ssmreg.ssm/1";

/// JSON text holding schema tag, mean vertices, triangles, eigenvalues,
/// spectrum and modes. Output is byte-stable for identical models.
std::string ssm_to_json(const StatisticalShapeModel& ssm);
StatisticalShapeModel ssm_from_json(const std::string& text);

void save_ssm(const std::filesystem::path& path, const StatisticalShapeModel& ssm);
StatisticalShapeModel load_ssm(const std::filesystem::path& path);

}  // namespace ssmreg
