#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "attribmkt/types.hpp"

namespace attribmkt {

/// Flat sectioned key-value configuration (INI-style subset): [section]
/// headers, key = value lines, '#' or ';' comments, blank lines ignored.
/// Keys are tracked on read so experiments can reject unknown entries.
class IniConfig {
 public:
  IniConfig() = default;

  static IniConfig parse(const std::string& text);
  static IniConfig load(const std::filesystem::path& path);

  /// Canonical serialization: sections and keys in sorted order.
  /// parse(serialize(x)) reproduces x exactly.
  std::string serialize() const;

  bool has(const std::string& section, const std::string& key) const;

  std::string get_string(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key) const;
  double get_double(const std::string& section, const std::string& key, double fallback) const;
  long long get_int(const std::string& section, const std::string& key) const;
  long long get_int(const std::string& section, const std::string& key, long long fallback) const;
  bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
  std::vector<double> get_doubles(const std::string& section, const std::string& key) const;
  std::vector<double> get_doubles(const std::string& section, const std::string& key,
                                  std::vector<double> fallback) const;
  std::vector<std::uint64_t> get_u64s(const std::string& section, const std::string& key,
                                      std::vector<std::uint64_t> fallback) const;

  void set(const std::string& section, const std::string& key, const std::string& value);

  /// Fails with a validation_error naming every key that was never read.
  void reject_unknown_keys() const;

 private:
  const std::string* find(const std::string& section, const std::string& key) const;
  const std::string& require_value(const std::string& section, const std::string& key) const;

  std::map<std::string, std::map<std::string, std::string>> sections_;
  mutable std::set<std::string> consumed_;
};

}  // namespace attribmkt
