#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace qli {

/// Flat `key = value` file with '#' comments. Keys are namespaced with dots
/// (fiber.length_km). Later assignments override earlier ones.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::istream& in, const std::string& source = "<stream>");
  static KeyValueConfig load(const std::filesystem::path& path);

  void set(const std::string& key, const std::string& value) { entries_[key] = value; }
  bool contains(const std::string& key) const { return entries_.count(key) != 0; }

  std::optional<std::string> get_string(const std::string& key) const;
  /// Error{InvalidConfig} when the value does not parse completely.
  std::optional<double> get_double(const std::string& key) const;
  std::optional<long long> get_int(const std::string& key) const;
  std::optional<bool> get_bool(const std::string& key) const;

  double get_double(const std::string& key, double fallback) const {
    return get_double(key).value_or(fallback);
  }

  /// Keys not in `known`, in sorted order.
  std::vector<std::string> unknown_keys(const std::set<std::string>& known) const;

  const std::map<std::string, std::string>& entries() const { return entries_; }
  const std::string& source() const { return source_; }

 private:
  std::map<std::string, std::string> entries_;
  std::string source_;
};

}  // namespace qli
