#pragma once

// Flat "section.key = value" configuration files with '#' comments.

#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace nematic {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems)
      : std::runtime_error(join(problems)), problems_(std::move(problems)) {}
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  static std::string join(const std::vector<std::string>& p) {
    std::string s = "invalid configuration:";
    for (const auto& e : p) s += "\n  " + e;
    return s;
  }
  std::vector<std::string> problems_;
};

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

/// Ordered key -> raw string map.
class Config {
 public:
  static Config parse(const std::string& text) {
    Config c;
    std::vector<std::string> problems;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        problems.push_back("line " + std::to_string(lineno) + ": expected 'key = value'");
        continue;
      }
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (key.empty()) {
        problems.push_back("line " + std::to_string(lineno) + ": empty key");
        continue;
      }
      if (c.entries_.count(key)) problems.push_back(key + ": duplicate key (line " + std::to_string(lineno) + ")");
      c.entries_[key] = value;
    }
    if (!problems.empty()) throw ConfigError(problems);
    return c;
  }

  static Config load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError({"cannot read config file " + path});
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
  }

  std::string serialize() const {
    std::string out;
    for (const auto& [k, v] : entries_) out += k + " = " + v + "\n";
    return out;
  }

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  void set(const std::string& key, const std::string& value) { entries_[key] = value; }
  const std::map<std::string, std::string>& entries() const { return entries_; }
  bool operator==(const Config& o) const { return entries_ == o.entries_; }

  std::optional<std::string> raw(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::map<std::string, std::string> entries_;
};

/// Typed reads that collect every problem instead of stopping at the first.
class ConfigReader {
 public:
  explicit ConfigReader(const Config& c) : c_(c) {}

  std::string text(const std::string& key, const std::string& fallback) const {
    return c_.raw(key).value_or(fallback);
  }

  std::string required_text(const std::string& key) {
    if (auto v = c_.raw(key)) return *v;
    problems_.push_back(key + ": required key missing");
    return {};
  }

  double real(const std::string& key, std::optional<double> fallback) {
    const auto v = c_.raw(key);
    if (!v) {
      if (!fallback) problems_.push_back(key + ": required key missing");
      return fallback.value_or(0.0);
    }
    try {
      std::size_t pos = 0;
      const double d = std::stod(*v, &pos);
      if (pos != v->size()) throw std::invalid_argument("trailing");
      return d;
    } catch (const std::exception&) {
      problems_.push_back(key + ": expected a number, got '" + *v + "'");
      return fallback.value_or(0.0);
    }
  }

  long long integer(const std::string& key, std::optional<long long> fallback) {
    const auto v = c_.raw(key);
    if (!v) {
      if (!fallback) problems_.push_back(key + ": required key missing");
      return fallback.value_or(0);
    }
    long long out = 0;
    const auto res = std::from_chars(v->data(), v->data() + v->size(), out);
    if (res.ec != std::errc() || res.ptr != v->data() + v->size()) {
      problems_.push_back(key + ": expected an integer, got '" + *v + "'");
      return fallback.value_or(0);
    }
    return out;
  }

  bool boolean(const std::string& key, bool fallback) {
    const auto v = c_.raw(key);
    if (!v) return fallback;
    if (*v == "true" || *v == "1" || *v == "yes") return true;
    if (*v == "false" || *v == "0" || *v == "no") return false;
    problems_.push_back(key + ": expected true/false, got '" + *v + "'");
    return fallback;
  }

  std::string choice(const std::string& key, const std::vector<std::string>& allowed, std::optional<std::string> fallback) {
    const auto v = c_.raw(key);
    if (!v) {
      if (!fallback) problems_.push_back(key + ": required key missing");
      return fallback.value_or(allowed.front());
    }
    for (const auto& a : allowed)
      if (a == *v) return *v;
    std::string list;
    for (const auto& a : allowed) list += (list.empty() ? "" : "|") + a;
    problems_.push_back(key + ": '" + *v + "' is not one of " + list);
    return fallback.value_or(allowed.front());
  }

  void require(bool ok, const std::string& message) {
    if (!ok) problems_.push_back(message);
  }

  const std::vector<std::string>& problems() const { return problems_; }
  void throw_if_invalid() const {
    if (!problems_.empty()) throw ConfigError(problems_);
  }

 private:
  const Config& c_;
  std::vector<std::string> problems_;
};

}  // namespace nematic
