#include "attribmkt/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace attribmkt {

namespace {

std::string trim(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = text.find_last_not_of(" \t\r");
  return text.substr(begin, end - begin + 1);
}

double parse_double(const std::string& text, const std::string& where) {
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0')
    throw validation_error("config: '" + text + "' is not a number (" + where + ")");
  return value;
}

}  // namespace

IniConfig IniConfig::parse(const std::string& text) {
  IniConfig config;
  std::istringstream stream(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    const std::string body = trim(line);
    if (body.empty() || body[0] == '#' || body[0] == ';') continue;
    if (body.front() == '[') {
      if (body.back() != ']')
        throw validation_error("config: malformed section header at line " +
                               std::to_string(line_no));
      section = trim(body.substr(1, body.size() - 2));
      if (section.empty())
        throw validation_error("config: empty section name at line " + std::to_string(line_no));
      config.sections_[section];
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw validation_error("config: expected key = value at line " + std::to_string(line_no));
    const std::string key = trim(body.substr(0, eq));
    if (key.empty())
      throw validation_error("config: empty key at line " + std::to_string(line_no));
    if (section.empty())
      throw validation_error("config: key outside any section at line " + std::to_string(line_no));
    config.sections_[section][key] = trim(body.substr(eq + 1));
  }
  return config;
}

IniConfig IniConfig::load(const std::filesystem::path& path) {
  std::ifstream stream(path, std::ios::binary);
  if (!stream) throw validation_error("config: cannot open " + path.string());
  std::ostringstream buffer;
  buffer << stream.rdbuf();
  return parse(buffer.str());
}

std::string IniConfig::serialize() const {
  std::string out;
  for (const auto& [section, pairs] : sections_) {
    out += "[" + section + "]\n";
    for (const auto& [key, value] : pairs) out += key + " = " + value + "\n";
    out += "\n";
  }
  return out;
}

const std::string* IniConfig::find(const std::string& section, const std::string& key) const {
  const auto sec = sections_.find(section);
  if (sec == sections_.end()) return nullptr;
  const auto entry = sec->second.find(key);
  if (entry == sec->second.end()) return nullptr;
  consumed_.insert(section + "." + key);
  return &entry->second;
}

const std::string& IniConfig::require_value(const std::string& section,
                                            const std::string& key) const {
  const std::string* value = find(section, key);
  if (!value) throw validation_error("config: missing required key [" + section + "] " + key);
  return *value;
}

bool IniConfig::has(const std::string& section, const std::string& key) const {
  return find(section, key) != nullptr;
}

std::string IniConfig::get_string(const std::string& section, const std::string& key) const {
  return require_value(section, key);
}

std::string IniConfig::get_string(const std::string& section, const std::string& key,
                                  const std::string& fallback) const {
  const std::string* value = find(section, key);
  return value ? *value : fallback;
}

double IniConfig::get_double(const std::string& section, const std::string& key) const {
  return parse_double(require_value(section, key), section + "." + key);
}

double IniConfig::get_double(const std::string& section, const std::string& key,
                             double fallback) const {
  const std::string* value = find(section, key);
  return value ? parse_double(*value, section + "." + key) : fallback;
}

long long IniConfig::get_int(const std::string& section, const std::string& key) const {
  const double value = get_double(section, key);
  const long long rounded = static_cast<long long>(value);
  if (static_cast<double>(rounded) != value)
    throw validation_error("config: [" + section + "] " + key + " must be an integer");
  return rounded;
}

long long IniConfig::get_int(const std::string& section, const std::string& key,
                             long long fallback) const {
  return has(section, key) ? get_int(section, key) : fallback;
}

bool IniConfig::get_bool(const std::string& section, const std::string& key, bool fallback) const {
  const std::string* value = find(section, key);
  if (!value) return fallback;
  if (*value == "true" || *value == "1" || *value == "yes") return true;
  if (*value == "false" || *value == "0" || *value == "no") return false;
  throw validation_error("config: [" + section + "] " + key + " must be a boolean");
}

std::vector<double> IniConfig::get_doubles(const std::string& section,
                                           const std::string& key) const {
  const std::string& text = require_value(section, key);
  std::vector<double> out;
  std::string token;
  std::istringstream stream(text);
  while (std::getline(stream, token, ',')) {
    const std::string body = trim(token);
    if (body.empty())
      throw validation_error("config: empty list entry in [" + section + "] " + key);
    out.push_back(parse_double(body, section + "." + key));
  }
  if (out.empty()) throw validation_error("config: empty list in [" + section + "] " + key);
  return out;
}

std::vector<double> IniConfig::get_doubles(const std::string& section, const std::string& key,
                                           std::vector<double> fallback) const {
  return has(section, key) ? get_doubles(section, key) : std::move(fallback);
}

std::vector<std::uint64_t> IniConfig::get_u64s(const std::string& section, const std::string& key,
                                               std::vector<std::uint64_t> fallback) const {
  if (!has(section, key)) return fallback;
  std::vector<std::uint64_t> out;
  for (const double value : get_doubles(section, key)) {
    if (value < 0 || value != std::floor(value))
      throw validation_error("config: [" + section + "] " + key +
                             " must hold nonnegative integers");
    out.push_back(static_cast<std::uint64_t>(value));
  }
  return out;
}

void IniConfig::set(const std::string& section, const std::string& key, const std::string& value) {
  sections_[section][key] = value;
}

void IniConfig::reject_unknown_keys() const {
  std::string unknown;
  for (const auto& [section, pairs] : sections_) {
    for (const auto& [key, value] : pairs) {
      if (!consumed_.count(section + "." + key)) {
        if (!unknown.empty()) unknown += ", ";
        unknown += "[" + section + "] " + key;
      }
    }
  }
  if (!unknown.empty()) throw validation_error("config: unknown keys: " + unknown);
}

}  // namespace attribmkt
