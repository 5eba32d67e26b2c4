#include <charconv>
#include <fstream>
#include <sstream>

#include "gmcwalk/harness.hpp"

namespace gmcwalk::harness {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

Config Config::parse(const std::string& text) {
  Config c;
  std::istringstream in(text);
  std::string line;
  std::string current;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw ConfigError("config line " + std::to_string(number) + ": malformed section header");
      }
      current = trim(line.substr(1, line.size() - 2));
      c.sections_[current];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(number) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("config line " + std::to_string(number) + ": empty key");
    c.sections_[current][key] = trim(line.substr(eq + 1));
  }
  return c;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

bool Config::has_section(const std::string& section) const { return sections_.count(section) > 0; }

const std::map<std::string, std::string>& Config::section(const std::string& name) const {
  auto it = sections_.find(name);
  if (it == sections_.end()) throw ConfigError("missing config section [" + name + "]");
  return it->second;
}

void Config::set(const std::string& section, const std::string& key, const std::string& value) {
  sections_[section][key] = value;
}

std::string Config::canonical() const {
  std::string out;
  for (const auto& [name, keys] : sections_) {
    out += "[" + name + "]\n";
    for (const auto& [k, v] : keys) out += k + "=" + v + "\n";
  }
  return out;
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

ExperimentConfig::ExperimentConfig(std::string name, std::uint64_t seed,
                                   std::map<std::string, std::string> values, int threads)
    : name_(std::move(name)), seed_(seed), values_(std::move(values)), threads_(threads) {
  if (threads_ < 1) throw ConfigError("threads must be >= 1");
}

const std::string& ExperimentConfig::raw(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing config key '" + key + "' in [" + name_ + "]");
  return it->second;
}

double ExperimentConfig::number(const std::string& key) const {
  const std::string& s = raw(key);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError("config key '" + key + "' in [" + name_ + "] is not a number: " + s);
  }
  return v;
}

std::int64_t ExperimentConfig::integer(const std::string& key) const {
  const std::string& s = raw(key);
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError("config key '" + key + "' in [" + name_ + "] is not an integer: " + s);
  }
  return v;
}

std::vector<double> ExperimentConfig::numbers(const std::string& key) const {
  std::vector<double> out;
  for (const auto& item : split_list(raw(key))) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc() || ptr != item.data() + item.size()) {
      throw ConfigError("config key '" + key + "' in [" + name_ + "] has a non-numeric entry: " + item);
    }
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("config key '" + key + "' in [" + name_ + "] is empty");
  return out;
}

std::vector<std::int64_t> ExperimentConfig::integers(const std::string& key) const {
  std::vector<std::int64_t> out;
  for (double v : numbers(key)) {
    if (v != std::floor(v)) {
      throw ConfigError("config key '" + key + "' in [" + name_ + "] must hold integers");
    }
    out.push_back(static_cast<std::int64_t>(v));
  }
  return out;
}

std::string ExperimentConfig::text(const std::string& key) const { return raw(key); }

double ExperimentConfig::number_or(const std::string& key, double fallback) const {
  return values_.count(key) ? number(key) : fallback;
}

}  // namespace gmcwalk::harness
