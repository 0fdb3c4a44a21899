#include "config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace lpl::cli {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const std::string t = trim(text);
  const char* first = t.data();
  if (!t.empty() && t[0] == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
    throw ConfigError("config key '" + key + "': expected a number, got '" + text + "'");
  }
  return v;
}

}  // namespace

Config Config::parse(const std::string& text, const Schema& schema) {
  Config cfg;
  cfg.schema_ = schema;
  std::map<std::string, bool> known;
  for (const auto& [k, v] : schema) {
    known[k] = true;
    cfg.values_[k] = v;
  }
  std::istringstream is(text);
  std::string line, section;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    const std::string t = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ConfigError("line " + std::to_string(lineno) + ": unterminated section header");
      section = trim(t.substr(1, t.size() - 2));
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string name = trim(t.substr(0, eq));
    const std::string key = section.empty() ? name : section + "." + name;
    if (!known.count(key)) throw ConfigError("line " + std::to_string(lineno) + ": unknown config key '" + key + "'");
    cfg.values_[key] = trim(t.substr(eq + 1));
  }
  return cfg;
}

Config Config::load(const std::filesystem::path& path, const Schema& schema) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), schema);
}

const std::string& Config::raw(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("config key '" + key + "' is not defined for this command");
  return it->second;
}

bool Config::has(const std::string& key) const {
  const auto it = values_.find(key);
  return it != values_.end() && !it->second.empty();
}

std::string Config::str(const std::string& key) const { return raw(key); }

double Config::num(const std::string& key) const {
  const std::string& v = raw(key);
  if (v.empty()) throw ConfigError("config key '" + key + "' is required");
  return to_double(key, v);
}

std::int64_t Config::integer(const std::string& key) const {
  const double v = num(key);
  if (v != std::floor(v) || std::abs(v) > 9.0e15) {
    throw ConfigError("config key '" + key + "': expected an integer, got '" + raw(key) + "'");
  }
  return static_cast<std::int64_t>(v);
}

std::size_t Config::count(const std::string& key) const {
  const std::int64_t v = integer(key);
  if (v < 0) throw ConfigError("config key '" + key + "': expected a non-negative integer");
  return static_cast<std::size_t>(v);
}

bool Config::flag(const std::string& key) const {
  const std::string& v = raw(key);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off" || v.empty()) return false;
  throw ConfigError("config key '" + key + "': expected true or false, got '" + v + "'");
}

std::vector<double> Config::nums(const std::string& key) const {
  std::vector<double> out;
  std::istringstream is(raw(key));
  std::string cell;
  while (std::getline(is, cell, ',')) {
    if (!trim(cell).empty()) out.push_back(to_double(key, cell));
  }
  return out;
}

void Config::set(const std::string& key, std::string value) {
  raw(key);
  values_[key] = std::move(value);
}

std::string Config::resolved() const {
  std::map<std::string, std::vector<std::pair<std::string, std::string>>> sections;
  for (const auto& [key, def] : schema_) {
    (void)def;
    const auto dot = key.find('.');
    sections[key.substr(0, dot)].emplace_back(key.substr(dot + 1), values_.at(key));
  }
  std::string out;
  for (const auto& [section, entries] : sections) {
    if (!out.empty()) out += '\n';
    out += "[" + section + "]\n";
    for (const auto& [k, v] : entries) out += k + " = " + v + "\n";
  }
  return out;
}

}  // namespace lpl::cli
