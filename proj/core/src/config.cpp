#include "richardson/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace richardson {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str());
}

Config Config::parse_text(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::string stripped = trim(line);
    if (stripped.empty()) continue;
    auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw InvalidInputError("config line " + std::to_string(line_no) +
                              ": expected \"key = value\", got \"" + stripped + "\"");
    }
    std::string key = trim(stripped.substr(0, eq));
    std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) {
      throw InvalidInputError("config line " + std::to_string(line_no) + ": empty key");
    }
    cfg.entries_[key] = value;
  }
  return cfg;
}

void Config::set(const std::string& key, const std::string& value) {
  if (key.empty()) throw InvalidInputError("config key must be non-empty");
  entries_[key] = value;
}

bool Config::has(const std::string& key) const { return entries_.count(key) != 0; }

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second;
}

std::string Config::require_string(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw InvalidInputError("missing required config key: " + key);
  return it->second;
}

std::int64_t Config::get_int(const std::string& key, std::int64_t fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  try {
    std::size_t pos = 0;
    auto v = std::stoll(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw InvalidInputError("config key " + key + ": expected integer, got \"" +
                            it->second + "\"");
  }
}

double Config::get_double(const std::string& key, double fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  try {
    std::size_t pos = 0;
    double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw InvalidInputError("config key " + key + ": expected number, got \"" +
                            it->second + "\"");
  }
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  const std::string& v = it->second;
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw InvalidInputError("config key " + key + ": expected boolean, got \"" + v + "\"");
}

std::uint64_t Config::get_seed(const std::string& key, std::uint64_t fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  try {
    std::size_t pos = 0;
    auto v = std::stoull(it->second, &pos, 0);  // base 0: accepts 0x... too
    if (pos != it->second.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw InvalidInputError("config key " + key + ": expected unsigned seed, got \"" +
                            it->second + "\"");
  }
}

std::vector<double> Config::get_double_list(const std::string& key,
                                            const std::vector<double>& fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  std::vector<double> out;
  std::istringstream in(it->second);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t pos = 0;
      std::string t = trim(item);
      out.push_back(std::stod(t, &pos));
      if (pos != t.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw InvalidInputError("config key " + key + ": expected comma-separated numbers");
    }
  }
  if (out.empty()) {
    throw InvalidInputError("config key " + key + ": empty list");
  }
  return out;
}

std::vector<int> Config::get_int_list(const std::string& key,
                                      const std::vector<int>& fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  std::vector<int> out;
  std::istringstream in(it->second);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t pos = 0;
      std::string t = trim(item);
      out.push_back(static_cast<int>(std::stol(t, &pos)));
      if (pos != t.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw InvalidInputError("config key " + key + ": expected comma-separated integers");
    }
  }
  if (out.empty()) {
    throw InvalidInputError("config key " + key + ": empty list");
  }
  return out;
}

void Config::validate_keys(const std::set<std::string>& allowed) const {
  for (const auto& [key, value] : entries_) {
    (void)value;
    if (allowed.count(key) == 0) {
      throw InvalidInputError("unknown config key: " + key);
    }
  }
}

}  // namespace richardson
