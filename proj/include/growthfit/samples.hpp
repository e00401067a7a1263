#pragma once

// Ingestion of paired-population panels or raw growth-rate vectors, and
// descriptive statistics of the resulting log-growth samples.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "growthfit/errors.hpp"

namespace growthfit {

struct PopulationPair {
  std::string unit_id;
  double pop_start = 0.0;  // persons, must be > 0 to be accepted
  double pop_end = 0.0;
};

struct GrowthSample {
  std::vector<double> values;  // log-growth rates, input order preserved
  std::string label;
  std::string source_meta;

  std::size_t size() const { return values.size(); }
};

struct DescriptiveStats {
  std::size_t n_obs = 0;
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation, n-1 denominator
  double min = 0.0;
  double max = 0.0;
};

struct RejectedRow {
  std::size_t row;  // 1-based position in the input (header excluded)
  std::string reason;
};

struct IngestReport {
  std::size_t n_input = 0;
  std::size_t n_valid = 0;
  std::vector<RejectedRow> rejected;
};

struct IngestResult {
  GrowthSample sample;
  IngestReport report;
};

// g_i = ln(pop_end_i) - ln(pop_start_i). Rows with nonpositive or non-finite
// populations are dropped into the report; order of surviving rows is kept.
inline IngestResult compute_log_growth(const std::vector<PopulationPair>& pairs,
                                       std::string label = {}) {
  IngestResult out;
  out.sample.label = std::move(label);
  out.report.n_input = pairs.size();
  out.sample.values.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& p = pairs[i];
    if (!(p.pop_start > 0.0) || !std::isfinite(p.pop_start) ||
        !(p.pop_end > 0.0) || !std::isfinite(p.pop_end)) {
      out.report.rejected.push_back({i + 1, "nonpositive population"});
      continue;
    }
    out.sample.values.push_back(std::log(p.pop_end) - std::log(p.pop_start));
  }
  out.report.n_valid = out.sample.values.size();
  if (out.report.n_valid == 0)
    throw Error(errc::ingestion, "no valid rows after ingestion");
  return out;
}

inline DescriptiveStats describe(const GrowthSample& sample) {
  if (sample.values.empty())
    throw Error(errc::insufficient_data, "describe requires a nonempty sample");
  DescriptiveStats s;
  s.n_obs = sample.values.size();
  s.min = sample.values.front();
  s.max = sample.values.front();
  double sum = 0.0;
  for (double v : sample.values) {
    sum += v;
    s.min = std::min(s.min, v);
    s.max = std::max(s.max, v);
  }
  s.mean = sum / static_cast<double>(s.n_obs);
  if (s.n_obs > 1) {
    double ss = 0.0;
    for (double v : sample.values) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(s.n_obs - 1));
  }
  return s;
}

namespace csv {

inline std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  fields.push_back(cur);
  return fields;
}

inline std::string trim(std::string s) {
  const auto notspace = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), notspace));
  s.erase(std::find_if(s.rbegin(), s.rend(), notspace).base(), s.end());
  return s;
}

inline std::optional<double> parse_double(std::string_view text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return value;
}

inline int column_index(const std::vector<std::string>& header,
                        const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (trim(header[i]) == name) return static_cast<int>(i);
  return -1;
}

}  // namespace csv

// Panel CSV: header with columns id,pop_start,pop_end (any order).
inline IngestResult load_panel_csv(const std::string& path, std::string label = {}) {
  std::ifstream in(path);
  if (!in) throw Error(errc::io, "cannot open input file: " + path);
  std::string line;
  if (!std::getline(in, line))
    throw Error(errc::ingestion, "missing CSV header: " + path);
  const auto header = csv::split_line(line);
  const int c_id = csv::column_index(header, "id");
  const int c_start = csv::column_index(header, "pop_start");
  const int c_end = csv::column_index(header, "pop_end");
  if (c_id < 0 || c_start < 0 || c_end < 0)
    throw Error(errc::ingestion,
                "panel CSV requires header columns id,pop_start,pop_end");

  std::vector<PopulationPair> pairs;
  IngestReport parse_report;
  std::vector<std::size_t> source_rows;  // row number per accepted pair
  std::size_t row = 0;
  const std::size_t need = static_cast<std::size_t>(
      std::max({c_id, c_start, c_end}) + 1);
  while (std::getline(in, line)) {
    ++row;
    if (csv::trim(line).empty()) continue;
    ++parse_report.n_input;
    const auto fields = csv::split_line(line);
    if (fields.size() < need) {
      parse_report.rejected.push_back({row, "missing fields"});
      continue;
    }
    const auto start = csv::parse_double(csv::trim(fields[c_start]));
    const auto end = csv::parse_double(csv::trim(fields[c_end]));
    if (!start || !end) {
      parse_report.rejected.push_back({row, "unparseable field"});
      continue;
    }
    pairs.push_back({csv::trim(fields[c_id]), *start, *end});
    source_rows.push_back(row);
  }
  if (pairs.empty())
    throw Error(errc::ingestion, "no valid rows after ingestion");

  // compute_log_growth rejects by pair index; remap to file rows.
  IngestResult out = compute_log_growth(pairs, std::move(label));
  for (auto& rej : out.report.rejected) rej.row = source_rows[rej.row - 1];
  out.report.n_input = parse_report.n_input;
  out.report.rejected.insert(out.report.rejected.begin(),
                             parse_report.rejected.begin(),
                             parse_report.rejected.end());
  out.sample.source_meta = path;
  return out;
}

// Rates CSV: header with a column named g holding precomputed rates.
inline IngestResult load_rates_csv(const std::string& path, std::string label = {}) {
  std::ifstream in(path);
  if (!in) throw Error(errc::io, "cannot open input file: " + path);
  std::string line;
  if (!std::getline(in, line))
    throw Error(errc::ingestion, "missing CSV header: " + path);
  const auto header = csv::split_line(line);
  const int c_g = csv::column_index(header, "g");
  if (c_g < 0)
    throw Error(errc::ingestion, "rates CSV requires a header column g");

  IngestResult out;
  out.sample.label = std::move(label);
  out.sample.source_meta = path;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (csv::trim(line).empty()) continue;
    ++out.report.n_input;
    const auto fields = csv::split_line(line);
    if (fields.size() <= static_cast<std::size_t>(c_g)) {
      out.report.rejected.push_back({row, "missing fields"});
      continue;
    }
    const auto g = csv::parse_double(csv::trim(fields[c_g]));
    if (!g || !std::isfinite(*g)) {
      out.report.rejected.push_back({row, "unparseable field"});
      continue;
    }
    out.sample.values.push_back(*g);
  }
  out.report.n_valid = out.sample.values.size();
  if (out.report.n_valid == 0)
    throw Error(errc::ingestion, "no valid rows after ingestion");
  return out;
}

}  // namespace growthfit
