#include "qli/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>

#include "qli/errors.hpp"

namespace qli {
namespace {

std::string trim(std::string_view s) {
  auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return {};
  auto end = s.find_last_not_of(" \t\r");
  return std::string(s.substr(begin, end - begin + 1));
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::istream& in, const std::string& source) {
  KeyValueConfig cfg;
  cfg.source_ = source;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::InvalidConfig,
                  source + ":" + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) {
      throw Error(ErrorCode::InvalidConfig, source + ":" + std::to_string(line_no) + ": empty key");
    }
    cfg.entries_[key] = value;
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidConfig, "cannot open config " + path.string());
  return parse(in, path.string());
}

std::optional<std::string> KeyValueConfig::get_string(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::optional<double> KeyValueConfig::get_double(const std::string& key) const {
  auto raw = get_string(key);
  if (!raw) return std::nullopt;
  double value = 0.0;
  const char* first = raw->data();
  const char* last = first + raw->size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw Error(ErrorCode::InvalidConfig, key + ": '" + *raw + "' is not a number");
  }
  return value;
}

std::optional<long long> KeyValueConfig::get_int(const std::string& key) const {
  auto raw = get_string(key);
  if (!raw) return std::nullopt;
  long long value = 0;
  const char* first = raw->data();
  const char* last = first + raw->size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    // Accept integral values written in floating notation, e.g. 1e6.
    double d = 0.0;
    auto [p2, ec2] = std::from_chars(first, last, d);
    if (ec2 == std::errc() && p2 == last && d == static_cast<double>(static_cast<long long>(d))) {
      return static_cast<long long>(d);
    }
    throw Error(ErrorCode::InvalidConfig, key + ": '" + *raw + "' is not an integer");
  }
  return value;
}

std::optional<bool> KeyValueConfig::get_bool(const std::string& key) const {
  auto raw = get_string(key);
  if (!raw) return std::nullopt;
  std::string v = *raw;
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
  if (v == "on" || v == "true" || v == "yes" || v == "1") return true;
  if (v == "off" || v == "false" || v == "no" || v == "0") return false;
  throw Error(ErrorCode::InvalidConfig, key + ": '" + *raw + "' is not a boolean");
}

std::vector<std::string> KeyValueConfig::unknown_keys(const std::set<std::string>& known) const {
  std::vector<std::string> out;
  for (const auto& [key, value] : entries_) {
    if (!known.count(key)) out.push_back(key);
  }
  return out;
}

}  // namespace qli
