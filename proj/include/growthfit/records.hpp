#pragma once

// Line-delimited key=value records and numeric formatting. Machine outputs
// use shortest round-trip formatting so consumers can recompute derived
// quantities exactly; human tables use 6 significant digits.

#include <charconv>
#include <cstddef>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include "growthfit/errors.hpp"

namespace growthfit {

inline std::string format_full(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  if (res.ec != std::errc()) throw Error(errc::numeric, "to_chars failed");
  return std::string(buf, res.ptr);
}

inline std::string format_sig6(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return std::string(buf);
}

struct Record {
  std::vector<std::pair<std::string, std::string>> fields;

  void add(std::string key, std::string value) {
    fields.emplace_back(std::move(key), std::move(value));
  }
  void add(std::string key, const char* value) {
    fields.emplace_back(std::move(key), std::string(value));
  }
  void add(std::string key, double value) {
    fields.emplace_back(std::move(key), format_full(value));
  }
  void add(std::string key, std::size_t value) {
    fields.emplace_back(std::move(key), std::to_string(value));
  }
  void add(std::string key, bool value) {
    fields.emplace_back(std::move(key), value ? "true" : "false");
  }
};

inline void write_records(std::ostream& os, const std::vector<Record>& records) {
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (i > 0) os << "\n";
    for (const auto& [key, value] : records[i].fields)
      os << key << "=" << value << "\n";
  }
}

inline std::vector<std::map<std::string, std::string>> parse_records(
    std::istream& is) {
  std::vector<std::map<std::string, std::string>> records;
  std::map<std::string, std::string> current;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) {
      if (!current.empty()) records.push_back(std::move(current));
      current.clear();
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(errc::io, "malformed record line: " + line);
    current[line.substr(0, eq)] = line.substr(eq + 1);
  }
  if (!current.empty()) records.push_back(std::move(current));
  return records;
}

}  // namespace growthfit
