#include "netsim/config.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace netsim {

namespace {

constexpr std::array kKnownKeys = {
    "graph.kind",      "graph.width",   "graph.height", "graph.target_degree",
    "graph.seed",      "process.kind",  "process.beta", "process.mu",
    "init.prevalence", "run.t_end",     "run.h",        "run.replications",
    "run.mode",        "run.step_policy", "run.workers", "output.dir",
    "seed",
};

bool known_key(std::string_view key) {
  for (std::string_view k : kKnownKeys)
    if (k == key) return true;
  return false;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

}  // namespace

double parse_double(std::string_view text) {
  double value = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end)
    throw std::invalid_argument("config: bad number '" + std::string(text) + "'");
  return value;
}

std::uint64_t parse_u64(std::string_view text) {
  std::uint64_t value = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end)
    throw std::invalid_argument("config: bad integer '" + std::string(text) + "'");
  return value;
}

RunConfig RunConfig::parse_text(std::string_view text) {
  RunConfig cfg;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos
                                                 ? std::string_view::npos
                                                 : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw std::invalid_argument("config: line " + std::to_string(line_no) +
                                  ": expected 'key = value'");
    const std::string key{trim(line.substr(0, eq))};
    const std::string value{trim(line.substr(eq + 1))};
    if (!known_key(key))
      throw std::invalid_argument("config: unknown key '" + key + "'");
    if (value.empty())
      throw std::invalid_argument("config: empty value for '" + key + "'");
    cfg.values_[key] = value;
  }
  return cfg;
}

RunConfig RunConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str());
}

std::string RunConfig::get_string(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end())
    throw std::invalid_argument("config: missing required key '" + key + "'");
  return it->second;
}

double RunConfig::get_double(const std::string& key) const {
  return parse_double(get_string(key));
}

std::uint64_t RunConfig::get_u64(const std::string& key) const {
  return parse_u64(get_string(key));
}

std::vector<double> RunConfig::get_double_list(const std::string& key) const {
  const std::string text = get_string(key);
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string_view item = trim(std::string_view(text).substr(pos, comma - pos));
    if (!item.empty()) out.push_back(parse_double(item));
    pos = comma + 1;
  }
  if (out.empty())
    throw std::invalid_argument("config: empty list for '" + key + "'");
  return out;
}

std::string RunConfig::get_string_or(const std::string& key,
                                     std::string fallback) const {
  return has(key) ? get_string(key) : std::move(fallback);
}

double RunConfig::get_double_or(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

std::uint64_t RunConfig::get_u64_or(const std::string& key,
                                    std::uint64_t fallback) const {
  return has(key) ? get_u64(key) : fallback;
}

void RunConfig::set(const std::string& key, std::string value) {
  if (!known_key(key))
    throw std::invalid_argument("config: unknown key '" + key + "'");
  values_[key] = std::move(value);
}

}  // namespace netsim
