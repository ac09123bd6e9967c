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

#include "wiks/io.hpp"

#include <fstream>
#include <sstream>
#include <utility>

#include "wiks/detail/numfmt.hpp"
#include "wiks/errors.hpp"

namespace wiks {

namespace {

using detail::format_double;
using detail::parse_double;
using nlohmann::json;

std::vector<std::string_view> split_csv_row(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(line.substr(start));
      return cells;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

[[noreturn]] void fail_line(const std::string& origin, std::size_t line_no,
                            const std::string& what) {
  throw parse_error(origin + ", line " + std::to_string(line_no) + ": " + what);
}

json test_report_to_json(const TestReport& r) {
  json j;
  j["method"] = r.method;
  j["statistic"] = r.statistic;
  j["p_value"] = r.p_value;
  j["exact_p"] = r.exact_p;
  j["n"] = r.n;
  j["m"] = r.m;
  return j;
}

TestReport test_report_from_json(const json& j) {
  TestReport r;
  r.method = j.at("method").get<std::string>();
  r.statistic = j.at("statistic").get<double>();
  r.p_value = j.at("p_value").get<double>();
  r.exact_p = j.at("exact_p").get<bool>();
  r.n = j.at("n").get<std::size_t>();
  r.m = j.at("m").get<std::size_t>();
  return r;
}

json seed_to_json(const SeedSpec& s) {
  return json{{"master", s.master}, {"stream", s.stream}};
}

SeedSpec seed_from_json(const json& j) {
  return SeedSpec{j.at("master").get<std::uint64_t>(), j.at("stream").get<std::uint64_t>()};
}

}  // namespace

ParsedSamples parse_samples_text(std::string_view text, const std::string& origin) {
  ParsedSamples out;
  out.dimension = 0;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;  // blank

    const auto cells = split_csv_row(line);
    if (cells.size() > 2) fail_line(origin, line_no, "expected 1 or 2 columns");

    std::vector<double> values(cells.size());
    bool numeric = true;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (!parse_double(cells[c], values[c])) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      // A non-numeric first data line is a header; elsewhere it is an error.
      if (out.dimension == 0 && !out.had_header) {
        out.had_header = true;
        continue;
      }
      fail_line(origin, line_no, "non-numeric cell");
    }

    const int dim = static_cast<int>(cells.size());
    if (out.dimension == 0) {
      out.dimension = dim;
    } else if (out.dimension != dim) {
      fail_line(origin, line_no,
                "dimension changed from " + std::to_string(out.dimension) + " to " +
                    std::to_string(dim) + " columns");
    }
    if (dim == 1) {
      out.univariate.push_back(values[0]);
    } else {
      out.bivariate.push_back({values[0], values[1]});
    }
  }

  if (out.dimension == 0) throw parse_error(origin + ": no data rows");
  return out;
}

ParsedSamples parse_samples(const std::filesystem::path& path) {
  return parse_samples_text(read_text_file(path), path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error("cannot open '" + path.string() + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw parse_error("read failure on '" + path.string() + "'");
  return std::move(buffer).str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw parse_error("cannot open '" + path.string() + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw parse_error("write failure on '" + path.string() + "'");
}

nlohmann::json to_json(const PairTestReport& r) {
  json j;
  j["n"] = r.n;
  j["m"] = r.m;
  j["dimension"] = r.dimension;
  j["wiks"] = {{"value", r.estimate.value},
               {"mc_std_error", r.estimate.mc_std_error},
               {"draws_used", r.estimate.draws_used},
               {"truncation_flag_count", r.estimate.truncation_flag_count}};
  j["threshold"] = r.threshold;
  j["threshold_source"] = r.threshold_source;
  j["decision"] = r.reject_null ? "reject_H0" : "accept_H0";
  if (r.ks) j["ks"] = test_report_to_json(*r.ks);
  if (r.wilcoxon) j["wilcoxon"] = test_report_to_json(*r.wilcoxon);
  j["concentration"] = r.concentration;
  j["base_models"] = r.base_models;
  j["weight"] = r.weight;
  j["s_draws"] = r.s_draws;
  j["seed"] = seed_to_json(r.seed);
  return j;
}

PairTestReport pair_test_report_from_json(const nlohmann::json& j) {
  PairTestReport r;
  r.n = j.at("n").get<std::size_t>();
  r.m = j.at("m").get<std::size_t>();
  r.dimension = j.at("dimension").get<int>();
  const auto& w = j.at("wiks");
  r.estimate.value = w.at("value").get<double>();
  r.estimate.mc_std_error = w.at("mc_std_error").get<double>();
  r.estimate.draws_used = w.at("draws_used").get<std::size_t>();
  r.estimate.truncation_flag_count = w.at("truncation_flag_count").get<std::size_t>();
  r.threshold = j.at("threshold").get<double>();
  r.threshold_source = j.at("threshold_source").get<std::string>();
  r.reject_null = j.at("decision").get<std::string>() == "reject_H0";
  if (j.contains("ks")) r.ks = test_report_from_json(j.at("ks"));
  if (j.contains("wilcoxon")) r.wilcoxon = test_report_from_json(j.at("wilcoxon"));
  r.concentration = j.at("concentration").get<double>();
  r.base_models = j.at("base_models").get<std::vector<std::string>>();
  r.weight = j.at("weight").get<std::string>();
  r.s_draws = j.at("s_draws").get<std::size_t>();
  r.seed = seed_from_json(j.at("seed"));
  return r;
}

nlohmann::json to_json(const CalibrationResult& r) {
  json j;
  j["mode"] = to_string(r.mode);
  j["threshold"] = r.threshold;
  j["config"] = {{"n", r.config.n},
                 {"m", r.config.m},
                 {"replicates", r.config.replicates},
                 {"alpha", r.config.alpha}};
  if (const auto* uni = std::get_if<UnivariateModel>(&r.config.null_model)) {
    j["config"]["null_model"] = model_to_string(*uni);
    j["config"]["null_dimension"] = 1;
  } else {
    j["config"]["null_model"] = model_to_string(std::get<BivariateModel>(r.config.null_model));
    j["config"]["null_dimension"] = 2;
  }
  j["seed"] = seed_to_json(r.seed);
  j["replicate_values"] = r.replicate_values;
  return j;
}

CalibrationResult calibration_result_from_json(const nlohmann::json& j) {
  CalibrationResult r;
  r.mode = calibration_mode_from_string(j.at("mode").get<std::string>());
  r.threshold = j.at("threshold").get<double>();
  const auto& c = j.at("config");
  r.config.mode = r.mode;
  r.config.n = c.at("n").get<std::size_t>();
  r.config.m = c.at("m").get<std::size_t>();
  r.config.replicates = c.at("replicates").get<std::size_t>();
  r.config.alpha = c.at("alpha").get<double>();
  if (c.at("null_dimension").get<int>() == 1) {
    r.config.null_model = parse_model(c.at("null_model").get<std::string>());
  } else {
    r.config.null_model = parse_bivariate_model(c.at("null_model").get<std::string>());
  }
  r.seed = seed_from_json(j.at("seed"));
  r.replicate_values = j.at("replicate_values").get<std::vector<double>>();
  return r;
}

std::string power_table_to_csv(const PowerTable& table) {
  std::string out = "scenario,theta,method,power,reps,mc_se\n";
  for (const auto& row : table.rows) {
    out += std::to_string(row.scenario_id);
    out += ',';
    out += format_double(row.theta);
    out += ',';
    out += to_string(row.method);
    out += ',';
    out += format_double(row.power);
    out += ',';
    out += std::to_string(row.replicates);
    out += ',';
    out += format_double(row.mc_std_error);
    out += '\n';
  }
  return out;
}

PowerTable power_table_from_csv(std::string_view text) {
  PowerTable table;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  const std::string origin = "power table";
  while (pos < text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() : eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != "scenario,theta,method,power,reps,mc_se") {
        throw parse_error(origin + ": unexpected header '" + std::string(line) + "'");
      }
      continue;
    }
    const auto cells = split_csv_row(line);
    if (cells.size() != 6) fail_line(origin, line_no, "expected 6 columns");
    PowerCell cell;
    double scenario_id = 0;
    double reps = 0;
    if (!parse_double(cells[0], scenario_id) || !parse_double(cells[1], cell.theta) ||
        !parse_double(cells[3], cell.power) || !parse_double(cells[4], reps) ||
        !parse_double(cells[5], cell.mc_std_error)) {
      fail_line(origin, line_no, "non-numeric cell");
    }
    cell.scenario_id = static_cast<int>(scenario_id);
    cell.replicates = static_cast<std::size_t>(reps);
    try {
      cell.method = method_from_string(std::string(cells[2]));
    } catch (const std::invalid_argument& e) {
      fail_line(origin, line_no, e.what());
    }
    table.rows.push_back(cell);
  }
  if (table.rows.empty() && line_no == 0) throw parse_error(origin + ": empty input");
  return table;
}

}  // namespace wiks
