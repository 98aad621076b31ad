// Copyright 2026 The ssmreg Authors
// SPDX-License-Identifier: Apache-2.0

#include "ssmreg/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "ssmreg/error.hpp"

namespace ssmreg {

namespace {

constexpr std::array<const char*, 11> kColumns = {
    "shape", "offset", "modes", "tRE_mm", "shape_err_mm", "E_p",
    "E_o",   "tier",   "success", "iterations", "seconds"};

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::string trim(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && s[i] == ' ') ++i;
  return s.substr(i);
}

double parse_double(const std::string& s, const char* column, int line) {
  if (s == "nan") return kNaN;
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw ParseError("column '" + std::string(column) + "' line " + std::to_string(line) +
                   ": not a number: '" + s + "'");
}

int parse_int(const std::string& s, const char* column, int line) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw ParseError("column '" + std::string(column) + "' line " + std::to_string(line) +
                   ": not an integer: '" + s + "'");
}

struct Moments {
  int n = 0;
  double sum = 0.0;
  double sum_sq = 0.0;
  void add(double v) {
    ++n;
    sum += v;
    sum_sq += v * v;
  }
};

TierStats stats_of(std::span<const double> values) {
  TierStats s;
  s.count = static_cast<int>(values.size());
  if (values.empty()) {
    s.mean_tre_mm = kNaN;
    s.sd_tre_mm = kNaN;
    return s;
  }
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean_tre_mm = sum / values.size();
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean_tre_mm) * (v - s.mean_tre_mm);
  s.sd_tre_mm = values.size() > 1 ? std::sqrt(ss / (values.size() - 1)) : 0.0;
  return s;
}

nlohmann::json number_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

}  // namespace

std::vector<TrialReport> read_trials_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("trial CSV is empty");
  const std::vector<std::string> header = split(trim(line));
  std::map<std::string, int> index;
  for (int i = 0; i < static_cast<int>(header.size()); ++i) {
    const std::string name = trim(header[i]);
    if (std::find_if(kColumns.begin(), kColumns.end(),
                     [&](const char* c) { return name == c; }) == kColumns.end()) {
      throw ParseError("unexpected column '" + name + "'");
    }
    if (!index.emplace(name, i).second) throw ParseError("duplicate column '" + name + "'");
  }
  for (const char* c : kColumns) {
    if (!index.count(c)) throw ParseError("missing column '" + std::string(c) + "'");
  }

  std::vector<TrialReport> trials;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    if (line.rfind("shape,", 0) == 0) continue;  // header of a concatenated file
    const std::vector<std::string> f = split(line);
    if (f.size() != header.size()) {
      throw ParseError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(header.size()) + " fields, got " +
                       std::to_string(f.size()));
    }
    auto get = [&](const char* c) { return trim(f[index.at(c)]); };
    TrialReport r;
    r.shape = parse_int(get("shape"), "shape", line_no);
    r.offset = parse_int(get("offset"), "offset", line_no);
    r.modes = parse_int(get("modes"), "modes", line_no);
    r.tre_mm = parse_double(get("tRE_mm"), "tRE_mm", line_no);
    r.shape_error_mm = parse_double(get("shape_err_mm"), "shape_err_mm", line_no);
    r.e_p = parse_double(get("E_p"), "E_p", line_no);
    r.e_o = parse_double(get("E_o"), "E_o", line_no);
    try {
      r.tier = tier_from_string(get("tier"));
    } catch (const Error&) {
      throw ParseError("column 'tier' line " + std::to_string(line_no) + ": unknown tier '" +
                       get("tier") + "'");
    }
    const int success = parse_int(get("success"), "success", line_no);
    if (success != 0 && success != 1) {
      throw ParseError("column 'success' line " + std::to_string(line_no) + ": expected 0 or 1");
    }
    r.success = success == 1;
    r.iterations = parse_int(get("iterations"), "iterations", line_no);
    r.seconds = parse_double(get("seconds"), "seconds", line_no);
    r.failed = std::isnan(r.tre_mm);
    trials.push_back(r);
  }
  return trials;
}

std::vector<TrialReport> load_trials_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return read_trials_csv(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

double Confusion::precision() const {
  const int predicted = true_positive + false_positive;
  return predicted > 0 ? static_cast<double>(true_positive) / predicted : kNaN;
}

ExperimentSummary summarize(std::span<const TrialReport> trials,
                            std::span<const double> ladder) {
  std::vector<double> levels(ladder.begin(), ladder.end());
  if (levels.empty()) levels = default_p_ladder();
  validate_ladder(levels);

  ExperimentSummary s;
  s.trials = static_cast<int>(trials.size());
  std::array<std::vector<double>, kTierCount> tre_by_tier;
  Moments shape_error;
  Moments success_tre;
  std::vector<int> iterations;
  for (const TrialReport& r : trials) {
    if (r.failed) ++s.failed;
    if (r.success) ++s.successes;
    if (!std::isnan(r.tre_mm)) tre_by_tier[static_cast<int>(r.tier)].push_back(r.tre_mm);
    if (!std::isnan(r.shape_error_mm)) shape_error.add(r.shape_error_mm);
    if (r.success) success_tre.add(r.tre_mm);
    if (!r.failed) iterations.push_back(r.iterations);
  }
  for (int k = 0; k < kTierCount; ++k) s.tiers[k] = stats_of(tre_by_tier[k]);
  s.mean_shape_error_mm = shape_error.n ? shape_error.sum / shape_error.n : kNaN;
  s.mean_tre_success_mm = success_tre.n ? success_tre.sum / success_tre.n : kNaN;
  if (iterations.empty()) {
    s.median_iterations = kNaN;
  } else {
    std::sort(iterations.begin(), iterations.end());
    const std::size_t m = iterations.size() / 2;
    s.median_iterations = iterations.size() % 2
                              ? iterations[m]
                              : 0.5 * (iterations[m - 1] + iterations[m]);
  }

  for (int k = 0; k < static_cast<int>(levels.size()); ++k) {
    Confusion c;
    c.p = levels[k];
    for (const TrialReport& r : trials) {
      const bool predicted = static_cast<int>(r.tier) <= k;
      if (predicted && r.success) ++c.true_positive;
      if (predicted && !r.success) ++c.false_positive;
      if (!predicted && r.success) ++c.false_negative;
      if (!predicted && !r.success) ++c.true_negative;
    }
    s.confusion.push_back(c);
  }
  return s;
}

nlohmann::json summary_to_json(const ExperimentSummary& s) {
  nlohmann::json j;
  j["trials"] = s.trials;
  j["failed"] = s.failed;
  j["successes"] = s.successes;
  j["mean_shape_error_mm"] = number_or_null(s.mean_shape_error_mm);
  j["mean_tre_success_mm"] = number_or_null(s.mean_tre_success_mm);
  j["median_iterations"] = number_or_null(s.median_iterations);
  nlohmann::json tiers = nlohmann::json::array();
  for (int k = 0; k < kTierCount; ++k) {
    tiers.push_back({{"tier", to_string(static_cast<ConfidenceTier>(k))},
                     {"count", s.tiers[k].count},
                     {"mean_tre_mm", number_or_null(s.tiers[k].mean_tre_mm)},
                     {"sd_tre_mm", number_or_null(s.tiers[k].sd_tre_mm)}});
  }
  j["tiers"] = tiers;
  nlohmann::json conf = nlohmann::json::array();
  for (const Confusion& c : s.confusion) {
    conf.push_back({{"p", c.p},
                    {"true_positive", c.true_positive},
                    {"false_positive", c.false_positive},
                    {"false_negative", c.false_negative},
                    {"true_negative", c.true_negative},
                    {"precision", number_or_null(c.precision())}});
  }
  j["confusion"] = conf;
  return j;
}

void write_tier_long_csv(std::ostream& out, std::span<const TrialReport> trials) {
  std::map<int, std::array<std::vector<double>, kTierCount>> groups;
  std::array<std::vector<double>, kTierCount> pooled;
  for (const TrialReport& r : trials) {
    if (std::isnan(r.tre_mm)) continue;
    groups[r.modes][static_cast<int>(r.tier)].push_back(r.tre_mm);
    pooled[static_cast<int>(r.tier)].push_back(r.tre_mm);
  }
  auto emit = [&](const std::string& modes, const std::array<std::vector<double>, kTierCount>& g) {
    for (int k = 0; k < kTierCount; ++k) {
      const TierStats t = stats_of(g[k]);
      out << modes << ',' << to_string(static_cast<ConfidenceTier>(k)) << ',' << t.count << ',';
      if (t.count) {
        out << std::setprecision(9) << t.mean_tre_mm << ',' << t.sd_tre_mm << '\n';
      } else {
        out << ",\n";
      }
    }
  };
  out << "modes,tier,count,mean_tRE_mm,sd_tRE_mm\n";
  for (const auto& [modes, g] : groups) emit(std::to_string(modes), g);
  emit("all", pooled);
}

void print_tier_table(std::ostream& out, const ExperimentSummary& s) {
  out << std::left << std::setw(20) << "tier" << std::right << std::setw(8) << "trials"
      << std::setw(14) << "mean tRE mm" << std::setw(12) << "SD mm" << '\n';
  out << std::fixed << std::setprecision(3);
  for (int k = 0; k < kTierCount; ++k) {
    const TierStats& t = s.tiers[k];
    out << std::left << std::setw(20) << to_string(static_cast<ConfidenceTier>(k)) << std::right
        << std::setw(8) << t.count;
    if (t.count) {
      out << std::setw(14) << t.mean_tre_mm << std::setw(12) << t.sd_tre_mm << '\n';
    } else {
      out << std::setw(14) << "-" << std::setw(12) << "-" << '\n';
    }
  }
  out << "successful (tRE < threshold): " << s.successes << " / " << s.trials;
  if (s.failed) out << " (" << s.failed << " registrations failed)";
  out << '\n';
  out << "mean shape estimation error: " << s.mean_shape_error_mm << " mm\n";
  for (const Confusion& c : s.confusion) {
    out << "p = " << std::setprecision(6) << std::defaultfloat << c.p << std::fixed
        << std::setprecision(3) << ": TP " << c.true_positive << "  FP " << c.false_positive
        << "  FN " << c.false_negative << "  TN " << c.true_negative << "  precision ";
    const double prec = c.precision();
    if (std::isnan(prec)) {
      out << "n/a\n";
    } else {
      out << prec << '\n';
    }
  }
  out << std::defaultfloat;
}

}  // namespace ssmreg
