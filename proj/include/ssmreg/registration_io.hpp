// Copyright 2026 The ssmreg Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "ssmreg/registration.hpp"

namespace ssmreg {

inline constexpr const char* kResultSchema = "ssmreg.registration/1";

/// Result document: transform (row-major rotation, quaternion w,x,y,z,
/// translation, scale), shape parameters, scores, thresholds and tier.
nlohmann::json result_to_json(const RegistrationResult& result,
                              const RegistrationConfig& config);

/// Per-iteration trace as CSV with a header row.
void write_trace_csv(std::ostream& out, const RegistrationResult& result);

/// Reads the noise, bounds and ladder fields of a registration config
/// block; missing keys keep their defaults.
RegistrationConfig registration_config_from_json(const nlohmann::json& j);

}  // namespace ssmreg
