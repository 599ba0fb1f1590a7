#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "attribmkt/types.hpp"

namespace attribmkt {

/// Full-precision decimal formatting (17 significant digits, '.' separator,
/// locale-independent). Round-trips any double.
std::string format_full(double value);

/// Minimal RFC-4180-style table writer: one header row, comma separation,
/// UTF-8, fields quoted only when needed.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(std::vector<std::string> cells);
  std::string to_string() const;
  void write(const std::filesystem::path& path) const;

  size_t n_rows() const { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace attribmkt
