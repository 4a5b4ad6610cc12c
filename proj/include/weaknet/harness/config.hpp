#pragma once

// Key-value campaign configs:
//
//   # comment
//   seed  = 7
//   count = 1000
//   radii = 1/2, 1/4, 1/8
//
// Every key must be declared by the suite's schema; values are range-checked.

#include "weaknet/rational.hpp"

#include <boost/algorithm/string/trim.hpp>

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace weaknet::harness {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct KeySpec {
  enum class Type { Int, Rational, RationalList, Text };
  Type type = Type::Int;
  std::string fallback;
  std::optional<std::int64_t> min, max;  ///< Int only
};

using Schema = std::map<std::string, KeySpec>;

class Config {
 public:
  /// Parses `text` against the schema; keys absent from the text take their defaults.
  static Config parse(const std::string& text, const Schema& schema) {
    Config cfg;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    std::map<std::string, std::string> raw;
    while (std::getline(in, line)) {
      ++lineno;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      boost::algorithm::trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
      std::string key = boost::algorithm::trim_copy(line.substr(0, eq));
      std::string value = boost::algorithm::trim_copy(line.substr(eq + 1));
      if (key.empty() || value.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
      if (!schema.count(key)) throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
      if (!raw.emplace(key, value).second) throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
    for (const auto& [key, spec] : schema) {
      auto it = raw.find(key);
      cfg.values_[key] = it == raw.end() ? spec.fallback : it->second;
      cfg.check(key, spec);
    }
    cfg.schema_ = schema;
    return cfg;
  }

  static Config load(const std::string& path, const Schema& schema) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), schema);
  }

  std::int64_t integer(const std::string& key) const { return parse_int(key, value(key)); }
  std::uint64_t seed() const { return parse_u64("seed", value("seed")); }
  Rational rational(const std::string& key) const { return parse_q(key, value(key)); }
  std::vector<Rational> rationals(const std::string& key) const {
    std::vector<Rational> out;
    std::istringstream in(value(key));
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(parse_q(key, boost::algorithm::trim_copy(item)));
    return out;
  }
  const std::string& text(const std::string& key) const { return value(key); }

  /// Canonical "key = value" lines in key order, for echoing into reports.
  std::map<std::string, std::string> values() const { return values_; }

 private:
  const std::string& value(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("config key '" + key + "' is not in the schema");
    return it->second;
  }

  static std::int64_t parse_int(const std::string& key, const std::string& v) {
    try {
      std::size_t used = 0;
      const auto out = std::stoll(v, &used);
      if (used != v.size()) throw std::invalid_argument(v);
      return out;
    } catch (const std::exception&) {
      throw ConfigError("key '" + key + "': expected an integer, got '" + v + "'");
    }
  }

  static std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    try {
      std::size_t used = 0;
      if (!v.empty() && v[0] == '-') throw std::invalid_argument(v);
      const auto out = std::stoull(v, &used);
      if (used != v.size()) throw std::invalid_argument(v);
      return out;
    } catch (const std::exception&) {
      throw ConfigError("key '" + key + "': expected a 64-bit unsigned integer, got '" + v + "'");
    }
  }

  static Rational parse_q(const std::string& key, const std::string& v) {
    try {
      return parse_rational(v);
    } catch (const std::exception&) {
      throw ConfigError("key '" + key + "': expected a rational, got '" + v + "'");
    }
  }

  void check(const std::string& key, const KeySpec& spec) const {
    const std::string& v = value(key);
    switch (spec.type) {
      case KeySpec::Type::Int: {
        if (key == "seed") {
          parse_u64(key, v);
          break;
        }
        const auto n = parse_int(key, v);
        if ((spec.min && n < *spec.min) || (spec.max && n > *spec.max))
          throw ConfigError("key '" + key + "': " + v + " is outside [" + (spec.min ? std::to_string(*spec.min) : "") + ", " +
                            (spec.max ? std::to_string(*spec.max) : "") + "]");
        break;
      }
      case KeySpec::Type::Rational:
        if (parse_q(key, v) <= 0) throw ConfigError("key '" + key + "': must be positive");
        break;
      case KeySpec::Type::RationalList:
        if (rationals(key).empty()) throw ConfigError("key '" + key + "': empty list");
        for (const auto& q : rationals(key))
          if (q <= 0) throw ConfigError("key '" + key + "': entries must be positive");
        break;
      case KeySpec::Type::Text: break;
    }
  }

  std::map<std::string, std::string> values_;
  Schema schema_;
};

}  // namespace weaknet::harness
