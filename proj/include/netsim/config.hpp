#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace netsim {

// Minimal line-oriented "key = value" configuration grammar with '#'
// comments. Keys are dotted, values are locale-independent numbers or
// plain strings. Unknown keys are rejected against the documented set.
class RunConfig {
 public:
  static RunConfig parse_text(std::string_view text);
  static RunConfig parse_file(const std::string& path);

  bool has(const std::string& key) const { return values_.contains(key); }
  // All getters throw std::invalid_argument on missing key or bad value.
  std::string get_string(const std::string& key) const;
  double get_double(const std::string& key) const;
  std::uint64_t get_u64(const std::string& key) const;
  std::vector<double> get_double_list(const std::string& key) const;  // comma-separated

  std::string get_string_or(const std::string& key, std::string fallback) const;
  double get_double_or(const std::string& key, double fallback) const;
  std::uint64_t get_u64_or(const std::string& key, std::uint64_t fallback) const;

  // Flag overrides take precedence over file values.
  void set(const std::string& key, std::string value);

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

double parse_double(std::string_view text);
std::uint64_t parse_u64(std::string_view text);

}  // namespace netsim
