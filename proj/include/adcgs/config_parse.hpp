#pragma once

#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace adcgs {

/// "name:key=value,key=value" (the ":..." part optional). Used for the set,
/// objective and synthetic-instance strings of the benchmark CLI.
struct KeyedSpec {
  std::string name;
  std::map<std::string, std::string> params;

  bool has(const std::string& key) const { return params.count(key) != 0; }
  std::optional<std::string> get(const std::string& key) const;
  double get_double(const std::string& key, std::optional<double> fallback = {}) const;
  long get_int(const std::string& key, std::optional<long> fallback = {}) const;
  /// Throws ConfigError if a key outside `allowed` is present.
  void require_only(std::initializer_list<const char*> allowed) const;
};

/// Throws ConfigError on malformed input.
KeyedSpec parse_keyed_spec(std::string_view text);

/// Parses a bare "key=value,key=value" list.
std::map<std::string, std::string> parse_key_values(std::string_view text);

}  // namespace adcgs
