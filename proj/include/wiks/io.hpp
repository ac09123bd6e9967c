// Copyright 2026 The wiks authors.
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

#ifndef WIKS_IO_HPP
#define WIKS_IO_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "wiks/calibration.hpp"
#include "wiks/distributions.hpp"
#include "wiks/wiks.hpp"

namespace wiks {

// Sample data parsed from CSV: one observation per row, one column for
// univariate data, two for bivariate. Exactly one of the two vectors is
// populated, indicated by dimension.
struct ParsedSamples {
  int dimension = 1;
  std::vector<double> univariate;
  std::vector<Point2> bivariate;
  bool had_header = false;
};

// Parses CSV text. origin names the source in error messages. Throws
// parse_error naming the offending line for non-numeric cells, ragged rows,
// dimension changes, and empty inputs. A non-numeric first line is treated
// as a header.
ParsedSamples parse_samples_text(std::string_view text, const std::string& origin);
ParsedSamples parse_samples(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

// Everything cmd_test reports for one pairwise comparison. Serialization
// round-trips exactly: parse(emit(r)) == r.
struct PairTestReport {
  std::size_t n = 0;
  std::size_t m = 0;
  int dimension = 1;
  WiksEstimate estimate;
  double threshold = 0;
  std::string threshold_source;  // "supplied" or "calibrated"
  bool reject_null = false;
  std::optional<TestReport> ks;
  std::optional<TestReport> wilcoxon;
  double concentration = 1;
  std::vector<std::string> base_models;  // one entry, or two for a product base
  std::string weight;
  std::size_t s_draws = 0;
  SeedSpec seed;
  friend bool operator==(const PairTestReport&, const PairTestReport&) = default;
};

nlohmann::json to_json(const PairTestReport& report);
PairTestReport pair_test_report_from_json(const nlohmann::json& j);

nlohmann::json to_json(const CalibrationResult& result);
CalibrationResult calibration_result_from_json(const nlohmann::json& j);

// CSV schema: scenario,theta,method,power,reps,mc_se. Doubles use shortest
// round-trip formatting, so emit/parse is the identity.
std::string power_table_to_csv(const PowerTable& table);
PowerTable power_table_from_csv(std::string_view text);

}  // namespace wiks

#endif  // WIKS_IO_HPP
