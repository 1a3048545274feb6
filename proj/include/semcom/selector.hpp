// Copyright 2026 The semcom Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <charconv>
#include <cstdlib>
#include <map>
#include <string>
#include <string_view>

#include "semcom/errors.hpp"

namespace semcom {

// Shortest round-trippable decimal form of a double.
inline std::string format_number(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// Quotes a CSV field when it holds a comma, quote or newline.
inline std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// "name:key=value,key=value" as used for extractor and metric selectors on the
// command line and in experiment configs.
struct Selector {
  std::string name;
  std::map<std::string, std::string> options;

  static Selector parse(std::string_view text) {
    Selector sel;
    const auto colon = text.find(':');
    sel.name = std::string(text.substr(0, colon));
    if (colon == std::string_view::npos) return sel;
    std::string_view rest = text.substr(colon + 1);
    // The external template may itself contain ','; it is always the last
    // option and swallows the remainder.
    while (!rest.empty()) {
      const auto eq = rest.find('=');
      if (eq == std::string_view::npos) {
        throw ConfigError("selector option without '=': " + std::string(text));
      }
      const std::string key(rest.substr(0, eq));
      rest = rest.substr(eq + 1);
      std::size_t comma = key == "template" ? std::string_view::npos : rest.find(',');
      sel.options[key] = std::string(rest.substr(0, comma));
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    }
    return sel;
  }

  double number(const std::string& key, double fallback) const {
    const auto it = options.find(key);
    if (it == options.end()) return fallback;
    char* end = nullptr;
    const double v = std::strtod(it->second.c_str(), &end);
    if (end == it->second.c_str() || *end != '\0') {
      throw ConfigError("option " + key + " is not a number: " + it->second);
    }
    return v;
  }

  int integer(const std::string& key, int fallback) const {
    const double v = number(key, fallback);
    if (v != static_cast<int>(v)) throw ConfigError("option " + key + " must be an integer");
    return static_cast<int>(v);
  }

  void allow_only(std::initializer_list<std::string_view> keys) const {
    for (const auto& [k, _] : options) {
      bool ok = false;
      for (auto allowed : keys) ok = ok || k == allowed;
      if (!ok) throw ConfigError("unknown option '" + k + "' for " + name);
    }
  }
};

}  // namespace semcom
