// Copyright 2026 The qarb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "core/bounds.hpp"
#include "core/classifier.hpp"

namespace qarb {

inline constexpr std::string_view kVersion = "0.1.0";

/// Commands understood by run_experiment.
inline constexpr std::string_view kCommands[] = {
    "encode", "bounds", "table1", "attack", "defend", "risk", "concentration",
    "audit-all"};

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct RunReport {
  std::string command;
  std::uint64_t seed = 0;
  nlohmann::json config;
  std::vector<Check> checks;
  std::vector<std::string> artifacts;  // relative to the output directory
  std::vector<std::string> variant_flags;
  std::vector<BoundReport> bounds;
  double wall_clock_seconds = 0.0;
  std::string version{kVersion};

  bool all_passed() const;
};

enum class ReportFormat { kJson, kCsv, kText };

/// Applies `key=value` overrides. Keys may be dotted paths into nested
/// objects; values are parsed as JSON and fall back to plain strings.
void apply_override(nlohmann::json& config, std::string_view assignment);

/// Validates the config, runs the command and writes its CSV artifacts into
/// `out_dir`. Invalid configs raise kConfig naming the offending field.
RunReport run_experiment(const nlohmann::json& config,
                         const std::filesystem::path& out_dir);

nlohmann::json report_to_json(const RunReport& report);
nlohmann::json bound_report_to_json(const BoundReport& b);

/// Renders a report; the text form lists the bound-formula variants used.
std::string render_report(const RunReport& report, ReportFormat format);

/// Writes report.json, report.csv or report.txt into `out_dir` and returns
/// the path. IO errors raise kIo.
std::filesystem::path emit_report(const RunReport& report, ReportFormat format,
                                  const std::filesystem::path& out_dir);

// ---------------------------------------------------------------------------
// Table 1 reproduction

struct Table1Row {
  std::string row;  // "1-trace", "1-l1", "2-trace", "2-l1"
  std::size_t n = 0;
  std::size_t d = 0;
  double value = 0.0;
  std::optional<double> log_slope;  // empty for the first n of a series
};

/// Row 1: 4 lambda1 / d^n and its l1 translation, slope in log2 per unit n.
/// Row 2: omega(lambda2) through the stated propagation with
/// omega1 = min(n, L lambda2), and omega1 itself; slope d ln / d ln n.
std::vector<Table1Row> table1_rows(std::span<const std::size_t> row1_n,
                                   std::span<const std::size_t> row2_n,
                                   std::span<const std::size_t> d_list,
                                   double eta, double gamma, double lipschitz);

/// Least-squares slope of y against x over (x, y) pairs, e.g. (ln n, ln v).
double loglog_fit_slope(std::span<const std::pair<double, double>> points);

/// Discrete log2 slope of the l1 column predicted by its small-angle form
/// (2/pi) sqrt(4 n lambda1 d^-n (d-1)^-1): -log2(d)/2 + log2((n+1)/n)/2.
double table1_l1_predicted_slope(std::size_t n, std::size_t d);

}  // namespace qarb
