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

// Experiment configuration (an INI-like key = value file) and the run
// manifest written next to every command's outputs.
//
//   [services]                 one block of "<id>.<field> = value" per service
//   edge.extractor = canny     canny[:sigma=,low=,high=] | sobel | quantize[:k=] | external:template=
//   edge.metric = mse          mse | psnr[:cap=] | ssim[:window=] | vi[:k=]
//   edge.threshold = 0.8       tau in [0,1]            (default 0)
//   edge.weight = 1            > 0                     (default 1)
//   edge.sigma_gen = 0         generation noise        (default 0)
//   edge.image = img/a.pgm     source image, or
//   edge.template = maps/{id}_pose.pgm   precomputed map (implies extractor external)
//   edge.image_id = a          id used for templates and external pairs (default: file stem)
//   edge.factor = 4            requested factor for `pipeline` (default max D)
//   [channel]   budget_bytes, bit_flip_prob, seed
//   [factors]   values = 1,2,4,8,10
//   [dqn]       episodes, gamma, lr, momentum, epsilon_min, buffer, batch, sync, warmup, hidden
//   [output]    directory
//   [backend]   external_pairs = dir     (optional; default surrogate)
//   [sweep]     mode = pairs | free      (optional; default pairs)
//
// Relative paths resolve against the directory holding the config file.

#pragma once

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "semcom/allocator.hpp"
#include "semcom/errors.hpp"
#include "semcom/extractors.hpp"
#include "semcom/generation.hpp"
#include "semcom/metrics.hpp"
#include "semcom/rng.hpp"
#include "semcom/selector.hpp"

namespace semcom {

inline constexpr const char kVersion[] = "semcom 1.0.0";

struct ServiceConfig {
  ServiceSpec spec;
  SourceImage source;
  std::optional<int> factor;
};

struct ExperimentConfig {
  std::filesystem::path base_dir;
  std::string text;  // raw file contents, hashed into the manifest
  std::vector<ServiceConfig> services;
  ChannelConfig channel;
  std::vector<int> factors{1, 2, 4, 8, 10};
  DqnConfig dqn;
  std::size_t episodes = 500;
  std::filesystem::path output_dir = "out";
  GenerationBackend backend = SurrogateBackend{};
  std::string sweep_mode = "pairs";

  AllocationInstance instance() const {
    AllocationInstance inst;
    for (const auto& s : services) inst.services.push_back({s.spec, s.source});
    inst.factors = factors;
    inst.channel = channel;
    return inst;
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline double parse_double(const std::string& v, const std::string& key) {
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (v.empty() || *end != '\0') throw ConfigError(key + ": not a number: '" + v + "'");
  return d;
}

inline long long parse_integer(const std::string& v, const std::string& key) {
  char* end = nullptr;
  const long long i = std::strtoll(v.c_str(), &end, 10);
  if (v.empty() || *end != '\0') throw ConfigError(key + ": not an integer: '" + v + "'");
  return i;
}

inline std::size_t parse_count(const std::string& v, const std::string& key) {
  const long long i = parse_integer(v, key);
  if (i < 0) throw ConfigError(key + " must be >= 0");
  return static_cast<std::size_t>(i);
}

inline std::vector<int> parse_int_list(const std::string& v, const std::string& key) {
  std::vector<int> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const long long i = parse_integer(trim(item), key);
    if (i < 1 || i > 100000) throw ConfigError(key + ": values must be in [1, 100000]");
    out.push_back(static_cast<int>(i));
  }
  if (out.empty()) throw ConfigError(key + ": empty list");
  return out;
}

struct RawService {
  std::map<std::string, std::string> fields;
};

}  // namespace detail

inline ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  using namespace detail;
  ExperimentConfig cfg;
  cfg.base_dir = base_dir;
  cfg.text = std::string(text);
  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  };

  std::vector<std::string> service_order;
  std::map<std::string, RawService> raw_services;
  bool seed_set = false;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    const std::string where = "line " + std::to_string(lineno) + ": ";
    if (t.front() == '[') {
      if (t.back() != ']') throw ConfigError(where + "malformed section header");
      section = trim(std::string_view(t).substr(1, t.size() - 2));
      static const char* kSections[] = {"services", "channel", "factors", "dqn", "output", "backend", "sweep"};
      if (std::find_if(std::begin(kSections), std::end(kSections),
                       [&](const char* s) { return section == s; }) == std::end(kSections)) {
        throw ConfigError(where + "unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = t.find('=');
    if (section == "factors" && eq == std::string::npos) {
      cfg.factors = parse_int_list(t, "factors");
      continue;
    }
    if (eq == std::string::npos) throw ConfigError(where + "expected key = value");
    const std::string key = trim(std::string_view(t).substr(0, eq));
    const std::string value = trim(std::string_view(t).substr(eq + 1));
    const std::string qualified = "[" + section + "] " + key;

    if (section == "services") {
      const auto dot = key.find('.');
      if (dot == std::string::npos || dot == 0) {
        throw ConfigError(where + "service keys look like <id>.<field>");
      }
      const std::string id = key.substr(0, dot);
      const std::string field = key.substr(dot + 1);
      if (!raw_services.count(id)) service_order.push_back(id);
      raw_services[id].fields[field] = value;
    } else if (section == "channel") {
      if (key == "budget_bytes") {
        cfg.channel.budget_bytes = parse_count(value, qualified);
      } else if (key == "bit_flip_prob") {
        cfg.channel.bit_flip_prob = parse_double(value, qualified);
      } else if (key == "seed") {
        cfg.channel.seed = static_cast<std::uint64_t>(parse_integer(value, qualified));
        seed_set = true;
      } else {
        throw ConfigError(where + "unknown key " + qualified);
      }
    } else if (section == "factors") {
      if (key != "values") throw ConfigError(where + "unknown key " + qualified);
      cfg.factors = parse_int_list(value, qualified);
    } else if (section == "dqn") {
      auto& d = cfg.dqn;
      if (key == "episodes") cfg.episodes = parse_count(value, qualified);
      else if (key == "gamma") d.gamma = parse_double(value, qualified);
      else if (key == "lr") d.learning_rate = parse_double(value, qualified);
      else if (key == "momentum") d.momentum = parse_double(value, qualified);
      else if (key == "epsilon_min") d.epsilon_min = parse_double(value, qualified);
      else if (key == "buffer") d.buffer_capacity = parse_count(value, qualified);
      else if (key == "batch") d.batch = parse_count(value, qualified);
      else if (key == "sync") d.target_sync = parse_count(value, qualified);
      else if (key == "warmup") d.warmup = parse_count(value, qualified);
      else if (key == "hidden") d.hidden = parse_int_list(value, qualified);
      else throw ConfigError(where + "unknown key " + qualified);
    } else if (section == "output") {
      if (key != "directory") throw ConfigError(where + "unknown key " + qualified);
      cfg.output_dir = resolve(value);
    } else if (section == "backend") {
      if (key != "external_pairs") throw ConfigError(where + "unknown key " + qualified);
      const auto dir = resolve(value);
      if (!std::filesystem::is_directory(dir)) {
        throw ConfigError(qualified + ": not a directory: " + dir.string());
      }
      cfg.backend = ExternalPairsBackend{dir};
    } else if (section == "sweep") {
      if (key != "mode") throw ConfigError(where + "unknown key " + qualified);
      if (value != "pairs" && value != "free") throw ConfigError(qualified + " must be pairs or free");
      cfg.sweep_mode = value;
    } else {
      throw ConfigError(where + "key outside any section");
    }
  }
  if (!cfg.output_dir.is_absolute()) cfg.output_dir = base_dir / cfg.output_dir;
  if (!seed_set) cfg.channel.seed = 0;
  cfg.dqn.seed = cfg.channel.seed;

  for (const auto& id : service_order) {
    auto fields = raw_services[id].fields;
    auto take = [&](const std::string& f) -> std::optional<std::string> {
      auto it = fields.find(f);
      if (it == fields.end()) return std::nullopt;
      std::string v = it->second;
      fields.erase(it);
      return v;
    };
    const std::string prefix = "service " + id + ": ";
    ServiceConfig sc;
    sc.spec.id = id;
    const auto extractor = take("extractor");
    const auto tmpl = take("template");
    const auto image = take("image");
    const auto image_id = take("image_id");
    if (auto m = take("metric")) sc.spec.metric = parse_metric(*m);
    if (auto v = take("threshold")) sc.spec.threshold = parse_double(*v, prefix + "threshold");
    if (auto v = take("weight")) sc.spec.weight = parse_double(*v, prefix + "weight");
    if (auto v = take("sigma_gen")) sc.spec.generation_noise = parse_double(*v, prefix + "sigma_gen");
    if (auto v = take("factor")) {
      const long long f = parse_integer(*v, prefix + "factor");
      if (f < 1) throw ConfigError(prefix + "factor must be >= 1");
      sc.factor = static_cast<int>(f);
    }
    if (!fields.empty()) throw ConfigError(prefix + "unknown field '" + fields.begin()->first + "'");

    if (image && tmpl) throw ConfigError(prefix + "give either image or template, not both");
    if (!image && !tmpl) throw ConfigError(prefix + "needs image or template");
    if (image) {
      const auto path = resolve(*image);
      if (!std::filesystem::is_regular_file(path)) {
        throw ConfigError(prefix + "image not found: " + path.string());
      }
      sc.source = {image_id ? *image_id : path.stem().string(), read_pgm(path)};
      sc.spec.extractor = extractor ? parse_extractor(*extractor) : ExtractorKind{CannyParams{}};
    } else {
      if (!image_id) throw ConfigError(prefix + "template services need image_id");
      const std::string resolved_template = resolve(*tmpl).string();
      if (extractor) throw ConfigError(prefix + "template implies the external extractor");
      sc.spec.extractor = ExternalExtractor{resolved_template};
      // The external map doubles as the source raster; it is never re-extracted.
      SemanticMap map = [&] {
        try {
          return external_map(resolved_template, *image_id);
        } catch (const MissingMapError& e) {
          throw ConfigError(prefix + e.what());
        }
      }();
      sc.source = {*image_id, std::move(map)};
    }
    try {
      sc.spec.validate();
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
    cfg.services.push_back(std::move(sc));
  }
  if (cfg.services.empty()) throw ConfigError("config defines no services");
  try {
    detail::require_sorted_factors(cfg.factors);
    cfg.channel.validate();
    cfg.dqn.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  for (const auto& s : cfg.services) {
    if (s.factor && std::find(cfg.factors.begin(), cfg.factors.end(), *s.factor) == cfg.factors.end()) {
      throw ConfigError("service " + s.spec.id + ": factor " + std::to_string(*s.factor) +
                        " is not in [factors]");
    }
  }
  return cfg;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
}

// ---------------------------------------------------------------------------
// Run manifest

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct RunManifest {
  std::string command;
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
  std::string version = kVersion;
  std::string started;
  std::string finished;
  std::vector<std::string> files;

  std::string render() const {
    char hash[17];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(config_hash));
    std::ostringstream out;
    out << "command=" << command << '\n'
        << "config_hash=" << hash << '\n'
        << "seed=" << seed << '\n'
        << "version=" << version << '\n'
        << "started=" << started << '\n'
        << "finished=" << finished << '\n';
    for (const auto& f : files) out << "file=" << f << '\n';
    return out.str();
  }

  // Written to a temporary name and renamed into place.
  void write(const std::filesystem::path& dir) const {
    const auto final_path = dir / "manifest.txt";
    const auto tmp = dir / "manifest.txt.tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw IoError("cannot write " + tmp.string());
      out << render();
      if (!out) throw IoError("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, final_path);
  }
};

}  // namespace semcom
