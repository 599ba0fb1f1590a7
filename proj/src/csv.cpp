#include "attribmkt/csv.hpp"

#include <cstdio>
#include <fstream>

namespace attribmkt {

std::string format_full(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

namespace {

bool needs_quoting(const std::string& cell) {
  return cell.find_first_of(",\"\n\r") != std::string::npos;
}

std::string escape(const std::string& cell) {
  if (!needs_quoting(cell)) return cell;
  std::string out = "\"";
  for (const char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void append_line(std::string& out, const std::vector<std::string>& cells) {
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += escape(cells[i]);
  }
  out += '\n';
}

}  // namespace

void CsvTable::add_row(std::vector<std::string> cells) {
  require(cells.size() == header_.size(), "CsvTable: row width != header width");
  rows_.push_back(std::move(cells));
}

std::string CsvTable::to_string() const {
  std::string out;
  append_line(out, header_);
  for (const auto& row : rows_) append_line(out, row);
  return out;
}

void CsvTable::write(const std::filesystem::path& path) const {
  std::ofstream stream(path, std::ios::binary);
  if (!stream) throw numerical_error("CsvTable: cannot open " + path.string() + " for writing");
  const std::string text = to_string();
  stream.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!stream) throw numerical_error("CsvTable: write failed for " + path.string());
}

}  // namespace attribmkt
