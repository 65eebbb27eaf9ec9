#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hgr {

/// `key = value` text config. `#` starts a comment; blank lines are ignored;
/// later keys override earlier ones.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::istream& in);
  static KeyValueConfig load(const std::filesystem::path& path);

  bool contains(const std::string& key) const { return values_.count(key) != 0; }
  std::optional<std::string> get(const std::string& key) const;

  /// Typed accessors; throw InvalidConfig when the value does not parse.
  std::optional<int> get_int(const std::string& key) const;
  std::optional<double> get_double(const std::string& key) const;
  std::optional<bool> get_bool(const std::string& key) const;
  /// Comma- or whitespace-separated integer list.
  std::optional<std::vector<int>> get_int_list(const std::string& key) const;

  const std::map<std::string, std::string>& values() const { return values_; }
  void set(const std::string& key, const std::string& value) { values_[key] = value; }

 private:
  std::map<std::string, std::string> values_;
};

std::string trim(const std::string& s);

}  // namespace hgr
