#pragma once

// Rectangular numeric result tables with a '#'-prefixed metadata header.
//
// Values are serialized with %.17g so that every double round-trips exactly
// and regression diffs are byte-stable. The header always carries the tool
// version and a per-column certified/uncertified flag; callers add further
// key–value pairs (config hash, tolerances, …). Output is a deterministic
// function of the table contents.

#include <cstdio>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "specbound/core.hpp"

namespace specbound::io {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class ResultTable {
 public:
  void add_column(std::string name, bool certified) {
    if (!rows_.empty()) throw ConfigError("ResultTable: add columns before rows");
    columns_.push_back(std::move(name));
    certified_.push_back(certified);
  }

  void add_metadata(std::string key, std::string value) {
    metadata_.emplace_back(std::move(key), std::move(value));
  }

  void add_row(std::vector<double> row) {
    if (row.size() != columns_.size())
      throw ConfigError("ResultTable: row width does not match the column count");
    rows_.push_back(std::move(row));
  }

  [[nodiscard]] const std::vector<std::string>& columns() const { return columns_; }
  [[nodiscard]] const std::vector<bool>& certified() const { return certified_; }
  [[nodiscard]] const std::vector<std::vector<double>>& rows() const { return rows_; }
  [[nodiscard]] std::size_t column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns_.size(); ++i)
      if (columns_[i] == name) return i;
    throw ConfigError("ResultTable: no column named \"" + name + '"');
  }

  [[nodiscard]] std::string to_csv() const {
    if (columns_.empty()) throw ConfigError("ResultTable: no columns");
    std::string out;
    out += "# specbound ";
    out += version_string;
    out += '\n';
    for (const auto& [k, v] : metadata_) {
      out += "# ";
      out += k;
      out += ": ";
      out += v;
      out += '\n';
    }
    out += "# certified:";
    for (std::size_t i = 0; i < columns_.size(); ++i) {
      out += ' ';
      out += columns_[i];
      out += '=';
      out += certified_[i] ? "yes" : "no";
    }
    out += '\n';
    for (std::size_t i = 0; i < columns_.size(); ++i) {
      if (i != 0) out += ',';
      out += columns_[i];
    }
    out += '\n';
    for (const auto& row : rows_) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i != 0) out += ',';
        out += format_double(row[i]);
      }
      out += '\n';
    }
    return out;
  }

  void write_file(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("ResultTable: cannot open \"" + path + "\" for writing");
    f << to_csv();
    if (!f) throw ConfigError("ResultTable: write to \"" + path + "\" failed");
  }

 private:
  std::vector<std::string> columns_;
  std::vector<bool> certified_;
  std::vector<std::vector<double>> rows_;
  std::vector<std::pair<std::string, std::string>> metadata_;
};

}  // namespace specbound::io
