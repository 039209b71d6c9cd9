#include "adcgs/config_parse.hpp"

#include <charconv>
#include <cstdlib>

#include "adcgs/errors.hpp"

namespace adcgs {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

std::map<std::string, std::string> parse_key_values(std::string_view text) {
  std::map<std::string, std::string> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    const std::string item = trim(text.substr(pos, comma - pos));
    if (!item.empty()) {
      const auto eq = item.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw ConfigError("expected key=value, got '" + item + "'");
      }
      const std::string key = trim(item.substr(0, eq));
      if (out.count(key)) throw ConfigError("duplicate key '" + key + "'");
      out[key] = trim(item.substr(eq + 1));
    }
    pos = comma + 1;
  }
  return out;
}

KeyedSpec parse_keyed_spec(std::string_view text) {
  KeyedSpec spec;
  const auto colon = text.find(':');
  spec.name = trim(text.substr(0, colon));
  if (spec.name.empty()) throw ConfigError("empty specification");
  if (colon != std::string_view::npos) {
    spec.params = parse_key_values(text.substr(colon + 1));
  }
  return spec;
}

std::optional<std::string> KeyedSpec::get(const std::string& key) const {
  auto it = params.find(key);
  if (it == params.end()) return std::nullopt;
  return it->second;
}

double KeyedSpec::get_double(const std::string& key,
                             std::optional<double> fallback) const {
  auto v = get(key);
  if (!v) {
    if (fallback) return *fallback;
    throw ConfigError(name + ": missing parameter '" + key + "'");
  }
  char* end = nullptr;
  const double d = std::strtod(v->c_str(), &end);
  if (v->empty() || end != v->c_str() + v->size()) {
    throw ConfigError(name + ": parameter '" + key + "' is not a number: '" + *v + "'");
  }
  return d;
}

long KeyedSpec::get_int(const std::string& key, std::optional<long> fallback) const {
  auto v = get(key);
  if (!v) {
    if (fallback) return *fallback;
    throw ConfigError(name + ": missing parameter '" + key + "'");
  }
  long out = 0;
  auto res = std::from_chars(v->data(), v->data() + v->size(), out);
  if (res.ec != std::errc() || res.ptr != v->data() + v->size()) {
    throw ConfigError(name + ": parameter '" + key + "' is not an integer: '" + *v + "'");
  }
  return out;
}

void KeyedSpec::require_only(std::initializer_list<const char*> allowed) const {
  for (const auto& [k, v] : params) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || k == a;
    if (!ok) throw ConfigError(name + ": unknown parameter '" + k + "'");
  }
}

}  // namespace adcgs
