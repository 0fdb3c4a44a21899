#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lpl::cli {

/// Bad config file or option. Maps to exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Keys a command accepts, each with its default ("" = no default).
using Schema = std::vector<std::pair<std::string, std::string>>;

/// Flat `key = value` document with `[section]` headers. Keys are stored as
/// `section.key`. Keys outside the schema are rejected by name.
class Config {
 public:
  static Config parse(const std::string& text, const Schema& schema);
  static Config load(const std::filesystem::path& path, const Schema& schema);

  bool has(const std::string& key) const;
  std::string str(const std::string& key) const;
  double num(const std::string& key) const;
  std::int64_t integer(const std::string& key) const;
  std::size_t count(const std::string& key) const;
  bool flag(const std::string& key) const;
  std::vector<double> nums(const std::string& key) const;

  void set(const std::string& key, std::string value);

  /// Every schema key with its effective value, grouped by section.
  std::string resolved() const;

 private:
  const std::string& raw(const std::string& key) const;

  Schema schema_;
  std::map<std::string, std::string> values_;
};

}  // namespace lpl::cli
