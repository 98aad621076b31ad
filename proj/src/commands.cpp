// Copyright 2026 The ssmreg Authors
// SPDX-License-Identifier: Apache-2.0

#include "ssmreg/commands.hpp"

#include <omp.h>

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "ssmreg/error.hpp"
#include "ssmreg/experiment.hpp"
#include "ssmreg/ply.hpp"
#include "ssmreg/point_cloud_io.hpp"
#include "ssmreg/registration_io.hpp"
#include "ssmreg/report.hpp"
#include "ssmreg/ssm_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace ssmreg {

namespace {

// Stage 1 errors are configuration problems, stage 2 errors runtime ones.
template <typename Configure, typename Run>
int run_command(std::ostream& err, Configure&& configure, Run&& run) {
  try {
    configure();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  try {
    run();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void require_file(const fs::path& path, const char* what) {
  if (!fs::is_regular_file(path)) {
    throw InvalidArgument(std::string(what) + " not found: " + path.string());
  }
}

void prepare_output(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (!fs::is_directory(dir)) throw InvalidArgument("cannot create output directory " + dir.string());
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

void set_workers(int workers) {
  if (workers < 0) throw InvalidArgument("--workers must be nonnegative");
  if (workers > 0) omp_set_num_threads(workers);
}

}  // namespace

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InvalidArgument("not a number in list: '" + item + "'");
    }
  }
  if (values.empty()) throw InvalidArgument("empty list");
  return values;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> values;
  for (double v : parse_double_list(text)) {
    if (v != static_cast<int>(v)) throw InvalidArgument("not an integer in list: " + text);
    values.push_back(static_cast<int>(v));
  }
  return values;
}

int cmd_build_ssm(const BuildSsmOptions& options, std::ostream& out, std::ostream& err) {
  std::vector<fs::path> paths = options.meshes;
  return run_command(
      err,
      [&] {
        if (options.config) {
          const json j = read_json_file(*options.config);
          if (j.contains("meshes")) {
            for (const auto& p : j["meshes"]) paths.emplace_back(p.get<std::string>());
          }
        }
        if (paths.size() < 2) throw InvalidArgument("build-ssm needs at least 2 meshes");
        for (const auto& p : paths) require_file(p, "mesh");
        prepare_output(options.output);
      },
      [&] {
        ShapeCorpus corpus;
        for (const auto& p : paths) {
          TriangleMesh mesh;
          try {
            mesh = load_mesh(p);
          } catch (const Error& e) {
            throw Error(p.string() + ": " + e.what());
          }
          if (!corpus.shapes.empty() && !same_topology(corpus.shapes.front(), mesh)) {
            throw GeometryError(p.string() + ": topology differs from " + paths.front().string());
          }
          corpus.shapes.push_back(std::move(mesh));
        }
        const StatisticalShapeModel ssm = build_ssm(corpus);
        const fs::path target = options.output / "ssm.json";
        save_ssm(target, ssm);

        const Eigen::VectorXd& spectrum = ssm.spectrum();
        const double total = spectrum.sum();
        out << std::setw(6) << "mode" << std::setw(16) << "eigenvalue" << std::setw(12)
            << "variance %" << std::setw(14) << "cumulative %" << '\n';
        double cumulative = 0.0;
        for (Eigen::Index k = 0; k < spectrum.size(); ++k) {
          const double frac = total > 0.0 ? spectrum[k] / total : 0.0;
          cumulative += frac;
          out << std::setw(6) << k + 1 << std::setw(16) << std::setprecision(6)
              << std::scientific << spectrum[k] << std::fixed << std::setprecision(3)
              << std::setw(12) << 100.0 * frac << std::setw(14) << 100.0 * cumulative << '\n';
        }
        out << std::defaultfloat;
        if (ssm.mode_count() == 0) {
          err << "warning: all eigenvalues are zero; the model has no modes of variation\n";
        }
        out << "wrote " << target.string() << " (" << ssm.mode_count() << " modes, "
            << ssm.vertex_count() << " vertices)\n";
      });
}

int cmd_register(const RegisterOptions& options, std::ostream& out, std::ostream& err) {
  fs::path model_path;
  fs::path data_path;
  RegistrationConfig config;
  return run_command(
      err,
      [&] {
        set_workers(options.workers);
        if (options.config) {
          const json j = read_json_file(*options.config);
          if (j.contains("model")) model_path = j["model"].get<std::string>();
          if (j.contains("data")) data_path = j["data"].get<std::string>();
          if (j.contains("registration")) config = registration_config_from_json(j["registration"]);
        }
        if (options.model) model_path = *options.model;
        if (options.data) data_path = *options.data;
        if (model_path.empty() || data_path.empty()) {
          throw InvalidArgument("register needs a model and a data file");
        }
        require_file(model_path, "model");
        require_file(data_path, "data");
        if (options.modes) {
          const std::vector<int> m = parse_int_list(*options.modes);
          if (m.size() != 1) throw InvalidArgument("register takes a single mode count");
          config.n_modes = m.front();
        }
        if (options.p_ladder) config.p_ladder = parse_double_list(*options.p_ladder);
        validate_ladder(config.p_ladder);
        prepare_output(options.output);
      },
      [&] {
        const StatisticalShapeModel ssm = load_ssm(model_path);
        const std::vector<OrientedPoint> data = load_point_cloud(data_path);
        const RegistrationResult result = register_points(data, ssm, config);

        {
          std::ofstream f = open_output(options.output / "result.json");
          f << result_to_json(result, config).dump(2) << '\n';
        }
        {
          std::ofstream f = open_output(options.output / "trace.csv");
          write_trace_csv(f, result);
        }
        const int n = static_cast<int>(result.inliers.size());
        out << "iterations: " << result.iterations
            << (result.converged ? " (converged)" : " (iteration limit)") << '\n';
        out << "inliers: " << n << " / " << result.n_data << '\n';
        out << std::setprecision(6) << "E_p = " << result.position_score
            << "  E_o = " << result.orientation_score << '\n';
        for (const LadderThresholds& t : ladder_thresholds(n, config.p_ladder)) {
          out << "  p = " << t.p << ": E_p < " << t.position << " "
              << (result.position_score < t.position ? "pass" : "fail") << ", E_o < "
              << t.orientation << " " << (result.orientation_score < t.orientation ? "pass" : "fail")
              << '\n';
        }
        out << "tier: " << to_string(result.tier()) << '\n';
      });
}

int cmd_simulate(const SimulateOptions& options, std::ostream& out, std::ostream& err) {
  SyntheticCorpusSpec corpus;
  TrialSpec trial;
  return run_command(
      err,
      [&] {
        if (!options.seed) throw InvalidArgument("simulate requires --seed");
        if (options.workers < 0) throw InvalidArgument("--workers must be nonnegative");
        if (options.config) std::tie(corpus, trial) = experiment_from_json(read_json_file(*options.config));
        if (options.modes) trial.modes = parse_int_list(*options.modes);
        if (options.p_ladder) trial.registration.p_ladder = parse_double_list(*options.p_ladder);
        corpus.validate();
        trial.validate(corpus.n_shapes);
        prepare_output(options.output);
      },
      [&] {
        const ExperimentOptions exp{*options.seed, options.workers, options.timing};
        const std::vector<TrialReport> trials = run_experiment(corpus, trial, exp);
        {
          std::ofstream f = open_output(options.output / "trials.csv");
          write_trials_csv(f, trials);
        }
        const ExperimentSummary summary = summarize(trials, trial.registration.p_ladder);
        {
          std::ofstream f = open_output(options.output / "summary.json");
          f << summary_to_json(summary).dump(2) << '\n';
        }
        {
          std::ofstream f = open_output(options.output / "tiers_long.csv");
          write_tier_long_csv(f, trials);
        }
        print_tier_table(out, summary);
      });
}

int cmd_report(const ReportOptions& options, std::ostream& out, std::ostream& err) {
  std::vector<double> ladder = default_p_ladder();
  return run_command(
      err,
      [&] {
        if (options.inputs.empty()) throw InvalidArgument("report needs at least one trial CSV");
        for (const auto& p : options.inputs) require_file(p, "trial CSV");
        if (options.p_ladder) ladder = parse_double_list(*options.p_ladder);
        validate_ladder(ladder);
        if (options.output) prepare_output(*options.output);
      },
      [&] {
        std::vector<TrialReport> trials;
        for (const auto& p : options.inputs) {
          const std::vector<TrialReport> part = load_trials_csv(p);
          trials.insert(trials.end(), part.begin(), part.end());
        }
        const ExperimentSummary summary = summarize(trials, ladder);
        if (options.output) {
          {
            std::ofstream f = open_output(*options.output / "summary.json");
            f << summary_to_json(summary).dump(2) << '\n';
          }
          std::ofstream f = open_output(*options.output / "tiers_long.csv");
          write_tier_long_csv(f, trials);
        }
        print_tier_table(out, summary);
      });
}

}  // namespace ssmreg
