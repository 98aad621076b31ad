// Copyright 2026 The ssmreg Authors
// SPDX-License-Identifier: Apache-2.0

#include "ssmreg/ssm_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ssmreg/error.hpp"

namespace ssmreg {

using nlohmann::json;

std::string ssm_to_json(const StatisticalShapeModel& ssm) {
  json j;
  j["schema"] = kSsmSchema;
  j["n_shapes"] = ssm.shape_count();
  json mean = json::array();
  for (const Vec3& v : ssm.mean()) mean.push_back({v.x(), v.y(), v.z()});
  j["mean"] = std::move(mean);
  json tris = json::array();
  for (const Triangle& t : ssm.triangles()) tris.push_back({t[0], t[1], t[2]});
  j["triangles"] = std::move(tris);
  j["eigenvalues"] = std::vector<double>(ssm.eigenvalues().begin(), ssm.eigenvalues().end());
  j["spectrum"] = std::vector<double>(ssm.spectrum().begin(), ssm.spectrum().end());
  json modes = json::array();
  for (int k = 0; k < ssm.mode_count(); ++k) {
    const Eigen::VectorXd m = ssm.modes().col(k);
    modes.push_back(std::vector<double>(m.begin(), m.end()));
  }
  j["modes"] = std::move(modes);
  return j.dump();
}

StatisticalShapeModel ssm_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("shape model JSON: ") + e.what());
  }
  if (j.value("schema", std::string()) != kSsmSchema) {
    throw ParseError("shape model JSON has unknown schema tag");
  }
  try {
    std::vector<Vec3> mean;
    for (const auto& v : j.at("mean")) mean.emplace_back(v.at(0), v.at(1), v.at(2));
    std::vector<Triangle> tris;
    for (const auto& t : j.at("triangles")) {
      tris.push_back({t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<int>()});
    }
    const auto ev = j.at("eigenvalues").get<std::vector<double>>();
    const auto sp = j.at("spectrum").get<std::vector<double>>();
    const auto& jm = j.at("modes");
    Eigen::MatrixXd modes(3 * mean.size(), ev.size());
    if (jm.size() != ev.size()) throw ParseError("mode count does not match eigenvalues");
    for (std::size_t k = 0; k < ev.size(); ++k) {
      const auto col = jm[k].get<std::vector<double>>();
      if (col.size() != 3 * mean.size()) throw ParseError("mode length mismatch");
      modes.col(k) = Eigen::Map<const Eigen::VectorXd>(col.data(), col.size());
    }
    return StatisticalShapeModel(
        std::move(mean), std::move(tris),
        Eigen::Map<const Eigen::VectorXd>(ev.data(), ev.size()), std::move(modes),
        Eigen::Map<const Eigen::VectorXd>(sp.data(), sp.size()), j.at("n_shapes").get<int>());
  } catch (const json::exception& e) {
    throw ParseError(std::string("shape model JSON: ") + e.what());
  }
}

void save_ssm(const std::filesystem::path& path, const StatisticalShapeModel& ssm) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << ssm_to_json(ssm) << '\n';
}

StatisticalShapeModel load_ssm(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open shape model " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ssm_from_json(ss.str());
}

}  // namespace ssmreg
