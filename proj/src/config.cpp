#include "lmdpp/config.hpp"

#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <sstream>

namespace lmdpp {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> items;
  std::string body = trim(s);
  if (body.size() >= 2 && body.front() == '[' && body.back() == ']')
    body = body.substr(1, body.size() - 2);
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const std::string t = trim(text);
  const auto* begin = t.data();
  const auto* end = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end)
    throw DataError("config key '" + key + "': cannot parse '" + text + "' as a number");
  return value;
}

}  // namespace

ConfigMap ConfigMap::parse(const std::string& text, const std::string& origin) {
  ConfigMap config;
  config.origin_ = origin;
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw DataError(origin + ":" + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw DataError(origin + ":" + std::to_string(line_no) + ": empty key");
    config.values_[key] = trim(line.substr(eq + 1));
  }
  return config;
}

ConfigMap ConfigMap::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read config file '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), path.string());
}

void ConfigMap::set(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw DataError("override '" + assignment + "' must have the form key=value");
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void ConfigMap::set(const std::string& key, const std::string& value) { values_[key] = value; }

const std::string* ConfigMap::find(const std::string& key) const {
  used_.insert(key);
  const auto it = values_.find(key);
  return it == values_.end() ? nullptr : &it->second;
}

std::string ConfigMap::get_string(const std::string& key, const std::string& fallback) const {
  const auto* v = find(key);
  return v ? *v : fallback;
}

double ConfigMap::get_double(const std::string& key, double fallback) const {
  const auto* v = find(key);
  return v ? parse_number<double>(key, *v) : fallback;
}

int ConfigMap::get_int(const std::string& key, int fallback) const {
  const auto* v = find(key);
  return v ? parse_number<int>(key, *v) : fallback;
}

std::uint64_t ConfigMap::get_uint64(const std::string& key, std::uint64_t fallback) const {
  const auto* v = find(key);
  return v ? parse_number<std::uint64_t>(key, *v) : fallback;
}

bool ConfigMap::get_bool(const std::string& key, bool fallback) const {
  const auto* v = find(key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1" || *v == "yes") return true;
  if (*v == "false" || *v == "0" || *v == "no") return false;
  throw DataError("config key '" + key + "': expected a boolean, got '" + *v + "'");
}

std::vector<double> ConfigMap::get_doubles(const std::string& key,
                                           const std::vector<double>& fallback) const {
  const auto* v = find(key);
  if (!v) return fallback;
  std::vector<double> out;
  for (const auto& item : split_list(*v)) out.push_back(parse_number<double>(key, item));
  return out;
}

std::vector<int> ConfigMap::get_ints(const std::string& key, const std::vector<int>& fallback) const {
  const auto* v = find(key);
  if (!v) return fallback;
  std::vector<int> out;
  for (const auto& item : split_list(*v)) out.push_back(parse_number<int>(key, item));
  return out;
}

void ConfigMap::check_all_used() const {
  std::string unknown;
  for (const auto& [key, value] : values_)
    if (!used_.count(key)) unknown += (unknown.empty() ? "" : ", ") + key;
  if (!unknown.empty()) throw DataError(origin_ + ": unknown config keys: " + unknown);
}

std::string format_double(double value) { return fmt::format("{}", value); }

std::string format_list(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) out += (i ? "," : "") + format_double(values[i]);
  return out;
}

std::string format_list(const std::vector<int>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) out += (i ? "," : "") + std::to_string(values[i]);
  return out;
}

}  // namespace lmdpp
