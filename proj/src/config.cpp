#include "hgr/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "hgr/error.hpp"

namespace hgr {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

KeyValueConfig KeyValueConfig::parse(std::istream& in) {
  KeyValueConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(Errc::InvalidConfig, "line " + std::to_string(line_no) + ": expected key = value",
                  line_no);
    }
    std::string key = trim(line.substr(0, eq));
    if (key.empty()) {
      throw Error(Errc::InvalidConfig, "line " + std::to_string(line_no) + ": empty key", line_no);
    }
    cfg.values_[key] = trim(line.substr(eq + 1));
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(Errc::IoError, "cannot open config " + path.string());
  }
  return parse(in);
}

std::optional<std::string> KeyValueConfig::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) {
    return std::nullopt;
  }
  return it->second;
}

std::optional<int> KeyValueConfig::get_int(const std::string& key) const {
  auto v = get(key);
  if (!v) {
    return std::nullopt;
  }
  char* end = nullptr;
  const long parsed = std::strtol(v->c_str(), &end, 10);
  if (v->empty() || *end != '\0') {
    throw Error(Errc::InvalidConfig, key + ": not an integer: " + *v);
  }
  return static_cast<int>(parsed);
}

std::optional<double> KeyValueConfig::get_double(const std::string& key) const {
  auto v = get(key);
  if (!v) {
    return std::nullopt;
  }
  char* end = nullptr;
  const double parsed = std::strtod(v->c_str(), &end);
  if (v->empty() || *end != '\0') {
    throw Error(Errc::InvalidConfig, key + ": not a number: " + *v);
  }
  return parsed;
}

std::optional<bool> KeyValueConfig::get_bool(const std::string& key) const {
  auto v = get(key);
  if (!v) {
    return std::nullopt;
  }
  if (*v == "1" || *v == "true" || *v == "yes" || *v == "on") {
    return true;
  }
  if (*v == "0" || *v == "false" || *v == "no" || *v == "off") {
    return false;
  }
  throw Error(Errc::InvalidConfig, key + ": not a boolean: " + *v);
}

std::optional<std::vector<int>> KeyValueConfig::get_int_list(const std::string& key) const {
  auto v = get(key);
  if (!v) {
    return std::nullopt;
  }
  std::string text = *v;
  for (char& c : text) {
    if (c == ',') {
      c = ' ';
    }
  }
  std::istringstream in(text);
  std::vector<int> out;
  std::string token;
  while (in >> token) {
    char* end = nullptr;
    const long parsed = std::strtol(token.c_str(), &end, 10);
    if (*end != '\0') {
      throw Error(Errc::InvalidConfig, key + ": not an integer list: " + *v);
    }
    out.push_back(static_cast<int>(parsed));
  }
  return out;
}

}  // namespace hgr
