#ifndef LMDPP_CONFIG_HPP
#define LMDPP_CONFIG_HPP

#include "lmdpp/common.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace lmdpp {

/// Flat `key = value` configuration. `#` starts a comment, lists are comma
/// separated, later assignments override earlier ones. Getters record which
/// keys were read so unknown keys can be reported.
class ConfigMap {
public:
  ConfigMap() = default;

  static ConfigMap parse(const std::string& text, const std::string& origin = "<string>");
  /// Throws DataError naming the path if it cannot be read.
  static ConfigMap load(const std::filesystem::path& path);

  /// `key=value` override, as given on the command line.
  void set(const std::string& assignment);
  void set(const std::string& key, const std::string& value);

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  std::uint64_t get_uint64(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_doubles(const std::string& key, const std::vector<double>& fallback) const;
  std::vector<int> get_ints(const std::string& key, const std::vector<int>& fallback) const;

  /// Throws DataError listing keys no getter has read.
  void check_all_used() const;

  const std::map<std::string, std::string>& values() const { return values_; }

private:
  const std::string* find(const std::string& key) const;

  std::map<std::string, std::string> values_;
  std::string origin_ = "<string>";
  mutable std::set<std::string> used_;
};

/// Shortest round-trip text for a double.
std::string format_double(double value);
std::string format_list(const std::vector<double>& values);
std::string format_list(const std::vector<int>& values);

}  // namespace lmdpp

#endif  // LMDPP_CONFIG_HPP
