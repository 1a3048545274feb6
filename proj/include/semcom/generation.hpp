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

// Stand-in for the generation level. The receiver's generator is replaced by
// the codec round trip: quality is measured between the semantic map a
// service extracts and its reconstruction after downscaling, with optional
// additive generation noise. An external backend swaps in offline generated
// images named "{image-id}_d{factor}.pgm".

#pragma once

#include <algorithm>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "semcom/codec.hpp"
#include "semcom/errors.hpp"
#include "semcom/extractors.hpp"
#include "semcom/image.hpp"
#include "semcom/metrics.hpp"
#include "semcom/rng.hpp"

namespace semcom {

struct SourceImage {
  std::string id;
  SemanticMap pixels;
};

struct ServiceSpec {
  std::string id;
  ExtractorKind extractor = CannyParams{};
  MetricKind metric = MseQuality{};
  double threshold = 0.0;         // tau in [0,1]
  double weight = 1.0;            // > 0
  double generation_noise = 0.0;  // intensity std-dev >= 0

  void validate() const {
    if (!(threshold >= 0.0 && threshold <= 1.0)) {
      throw DomainError("service " + id + ": threshold must be in [0,1]");
    }
    if (!(weight > 0.0)) throw DomainError("service " + id + ": weight must be > 0");
    if (!(generation_noise >= 0.0)) {
      throw DomainError("service " + id + ": generation noise must be >= 0");
    }
  }
};

struct SurrogateBackend {};

struct ExternalPairsBackend {
  std::filesystem::path dir;

  std::filesystem::path path_for(const std::string& image_id, int d) const {
    return dir / (image_id + "_d" + std::to_string(d) + ".pgm");
  }
};

using GenerationBackend = std::variant<SurrogateBackend, ExternalPairsBackend>;

// Adds N(0, sigma^2) to every pixel, clamps to [0,1] and re-imposes `kind`.
inline SemanticMap add_generation_noise(const SemanticMap& map, double sigma, Rng& rng) {
  std::vector<double> noisy(map.data());
  for (double& v : noisy) v = std::clamp(v + sigma * rng.normal(), 0.0, 1.0);
  return restore_kind(std::move(noisy), map.width(), map.height(), map.kind());
}

// Scores one service at several factors without re-extracting. Holds lazily
// computed maps, so a probe must not be shared between threads.
class ServiceProbe {
 public:
  ServiceProbe(const ServiceSpec& svc, const SourceImage& source, GenerationBackend backend)
      : svc_(svc), source_(source), backend_(std::move(backend)) {
    svc_.validate();
  }

  const ServiceSpec& service() const { return svc_; }
  const SourceImage& source() const { return source_; }

  const SemanticMap& semantic() const {
    if (!semantic_) semantic_ = extract(svc_.extractor, source_.pixels, source_.id);
    return *semantic_;
  }

  // Whether quality(d) ignores the random stream.
  bool deterministic() const {
    return std::holds_alternative<ExternalPairsBackend>(backend_) || svc_.generation_noise == 0.0;
  }

  std::size_t cost(int d) const { return cost_bytes(semantic().resolution(), d); }

  // What the receiver regenerates from the full-resolution semantic: the d = 1
  // round trip, so 8-bit payload quantization is not counted as loss.
  const SemanticMap& reference() const {
    if (!reference_) reference_ = decode(encode(semantic(), 1));
    return *reference_;
  }

  QualityScore quality(int d, Rng& rng) const {
    if (d < 1) throw DomainError("factor must be >= 1, got " + std::to_string(d));
    if (const auto* ext = std::get_if<ExternalPairsBackend>(&backend_)) {
      return score(svc_.metric, load(*ext, 1), load(*ext, d));
    }
    SemanticMap r = d == 1 ? reference() : decode(encode(semantic(), d));
    if (svc_.generation_noise > 0.0) r = add_generation_noise(r, svc_.generation_noise, rng);
    return score(svc_.metric, reference(), r);
  }

 private:
  SemanticMap load(const ExternalPairsBackend& ext, int d) const {
    const auto path = ext.path_for(source_.id, d);
    if (!std::filesystem::is_regular_file(path)) throw MissingMapError(path.string());
    return read_pgm(path);
  }

  ServiceSpec svc_;
  SourceImage source_;
  GenerationBackend backend_;
  mutable std::optional<SemanticMap> semantic_;
  mutable std::optional<SemanticMap> reference_;
};

inline QualityScore reconstruct_and_score(const ServiceSpec& svc, const SourceImage& source, int d,
                                          const GenerationBackend& backend, Rng& rng) {
  return ServiceProbe(svc, source, backend).quality(d, rng);
}

struct Validation {
  int accepted_factor = 1;
  QualityScore quality;
};

namespace detail {

inline void require_sorted_factors(std::span<const int> factors) {
  if (factors.empty()) throw DomainError("factor set is empty");
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (factors[i] < 1) throw DomainError("factors must be >= 1");
    if (i > 0 && factors[i] <= factors[i - 1]) {
      throw DomainError("factor set must be strictly increasing");
    }
  }
}

}  // namespace detail

// Evaluates the requested factor and steps down through `factors` (sorted
// ascending) until the service threshold is met.
inline Validation validate_and_adjust(const ServiceProbe& probe, int requested,
                                      std::span<const int> factors, Rng& rng) {
  detail::require_sorted_factors(factors);
  auto it = std::find(factors.begin(), factors.end(), requested);
  if (it == factors.end()) {
    throw DomainError("requested factor " + std::to_string(requested) + " not in factor set");
  }
  const double tau = probe.service().threshold;
  QualityScore q;
  for (auto idx = it - factors.begin(); idx >= 0; --idx) {
    q = probe.quality(factors[idx], rng);
    if (q.value() >= tau) return {factors[idx], q};
  }
  throw ValidationFailedError("service " + probe.service().id + ": quality " +
                                  format_number(q.value()) + " at factor " +
                                  std::to_string(factors.front()) + " is below threshold " +
                                  format_number(tau),
                              q.value());
}

inline Validation validate_and_adjust(const ServiceSpec& svc, const SourceImage& source,
                                      int requested, std::span<const int> factors,
                                      const GenerationBackend& backend, Rng& rng) {
  return validate_and_adjust(ServiceProbe(svc, source, backend), requested, factors, rng);
}

// Largest factor whose quality meets the threshold ("generation entropy": the
// smallest representation that still regenerates acceptable content). Scans
// downward from max(D); quality need not be monotone in d.
inline int min_representation_search(const ServiceProbe& probe, std::span<const int> factors,
                                     Rng& rng) {
  detail::require_sorted_factors(factors);
  const double tau = probe.service().threshold;
  double best = 0.0;
  for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
    const double q = probe.quality(*it, rng).value();
    if (q >= tau) return *it;
    best = std::max(best, q);
  }
  throw ValidationFailedError("service " + probe.service().id +
                                  ": no factor meets threshold " + format_number(tau),
                              best);
}

inline int min_representation_search(const ServiceSpec& svc, const SourceImage& source,
                                     std::span<const int> factors,
                                     const GenerationBackend& backend, Rng& rng) {
  return min_representation_search(ServiceProbe(svc, source, backend), factors, rng);
}

}  // namespace semcom
