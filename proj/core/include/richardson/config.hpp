#ifndef RICHARDSON_CONFIG_HPP
#define RICHARDSON_CONFIG_HPP

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "richardson/errors.hpp"

namespace richardson {

// Flat key = value configuration. Lines are "key = value" (or "key value"
// split at the first '='); '#' starts a comment. Keys are free-form strings;
// every experiment validates its inputs against an explicit key list so a
// misspelled key fails loudly instead of silently using a default.
class Config {
 public:
  Config() = default;

  static Config parse_file(const std::string& path);
  static Config parse_text(const std::string& text);

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;

  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::string require_string(const std::string& key) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  double get_double(const std::string& key, double fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::uint64_t get_seed(const std::string& key, std::uint64_t fallback) const;

  // Comma-separated lists.
  std::vector<double> get_double_list(const std::string& key,
                                      const std::vector<double>& fallback) const;
  std::vector<int> get_int_list(const std::string& key,
                                const std::vector<int>& fallback) const;

  // Throws InvalidInputError naming the first key not in `allowed`.
  void validate_keys(const std::set<std::string>& allowed) const;

  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

}  // namespace richardson

#endif
