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

// Semantic extractors: turn a source image into the map a service transmits.
// Canny, a soft Sobel edge map and intensity quantization are computed here;
// learned extractors (pose, depth, HED) plug in as precomputed PGM files.

#pragma once

#include <array>
#include <cmath>
#include <deque>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "semcom/errors.hpp"
#include "semcom/image.hpp"
#include "semcom/selector.hpp"

namespace semcom {

struct CannyParams {
  double sigma = 1.4;  // Gaussian std-dev, pixels
  double low = 0.1;    // fraction of max gradient magnitude
  double high = 0.2;   // fraction of max gradient magnitude

  void validate() const {
    if (!(sigma > 0.0)) throw DomainError("canny sigma must be > 0");
    if (!(low > 0.0 && low < high && high <= 1.0)) {
      throw DomainError("canny thresholds need 0 < low < high <= 1");
    }
  }
  friend bool operator==(const CannyParams&, const CannyParams&) = default;
};

struct SobelMagnitude {
  friend bool operator==(const SobelMagnitude&, const SobelMagnitude&) = default;
};

struct QuantizeSegmentation {
  int levels = 4;
  friend bool operator==(const QuantizeSegmentation&, const QuantizeSegmentation&) = default;
};

// Loads a precomputed map from `path_template` with "{id}" replaced by the
// image id.
struct ExternalExtractor {
  std::string path_template;
  friend bool operator==(const ExternalExtractor&, const ExternalExtractor&) = default;
};

using ExtractorKind =
    std::variant<CannyParams, SobelMagnitude, QuantizeSegmentation, ExternalExtractor>;

namespace detail {

// Separable Gaussian blur, radius ceil(3 sigma), normalized weights, clamped
// coordinates.
inline std::vector<double> gaussian_blur(const SemanticMap& image, double sigma) {
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(2 * radius + 1);
  double total = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    kernel[i + radius] = std::exp(-(i * i) / (2.0 * sigma * sigma));
    total += kernel[i + radius];
  }
  for (double& k : kernel) k /= total;

  const int w = image.width();
  const int h = image.height();
  std::vector<double> tmp(image.size()), out(image.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double s = 0.0;
      for (int i = -radius; i <= radius; ++i) s += kernel[i + radius] * image.clamped(x + i, y);
      tmp[static_cast<std::size_t>(y) * w + x] = s;
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double s = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        const int yy = std::clamp(y + i, 0, h - 1);
        s += kernel[i + radius] * tmp[static_cast<std::size_t>(yy) * w + x];
      }
      out[static_cast<std::size_t>(y) * w + x] = s;
    }
  }
  return out;
}

struct Gradients {
  std::vector<double> gx, gy, magnitude;
};

// 3x3 Sobel over a row-major field with clamped coordinates.
inline Gradients sobel(const std::vector<double>& field, int w, int h) {
  auto at = [&](int x, int y) {
    return field[static_cast<std::size_t>(std::clamp(y, 0, h - 1)) * w + std::clamp(x, 0, w - 1)];
  };
  Gradients g;
  g.gx.resize(field.size());
  g.gy.resize(field.size());
  g.magnitude.resize(field.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double gx = (at(x + 1, y - 1) + 2.0 * at(x + 1, y) + at(x + 1, y + 1)) -
                        (at(x - 1, y - 1) + 2.0 * at(x - 1, y) + at(x - 1, y + 1));
      const double gy = (at(x - 1, y + 1) + 2.0 * at(x, y + 1) + at(x + 1, y + 1)) -
                        (at(x - 1, y - 1) + 2.0 * at(x, y - 1) + at(x + 1, y - 1));
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      g.gx[i] = gx;
      g.gy[i] = gy;
      g.magnitude[i] = std::sqrt(gx * gx + gy * gy);
    }
  }
  return g;
}

// Unit step along the gradient direction quantized to 0/45/90/135 degrees
// (image y axis points down).
inline std::array<int, 2> quantized_direction(double gx, double gy) {
  double angle = std::atan2(gy, gx) * 180.0 / 3.14159265358979323846;
  if (angle < 0.0) angle += 180.0;
  if (angle < 22.5 || angle >= 157.5) return {1, 0};
  if (angle < 67.5) return {1, 1};
  if (angle < 112.5) return {0, 1};
  return {-1, 1};
}

}  // namespace detail

// Multi-stage Canny detector: blur, Sobel, non-maximum suppression along the
// quantized gradient direction, double threshold relative to the maximum
// magnitude, then 8-connected hysteresis. Output is Binary.
inline SemanticMap canny(const SemanticMap& image, const CannyParams& params = {}) {
  params.validate();
  if (std::min(image.width(), image.height()) < 5) {
    throw DomainError("canny needs both dimensions >= 5");
  }
  const int w = image.width();
  const int h = image.height();
  const auto blurred = detail::gaussian_blur(image, params.sigma);
  const auto grad = detail::sobel(blurred, w, h);

  double max_mag = 0.0;
  for (double m : grad.magnitude) max_mag = std::max(max_mag, m);
  std::vector<double> out(image.size(), 0.0);
  if (max_mag <= 0.0) return SemanticMap(w, h, std::move(out), MapKind::binary());

  // Non-maximum suppression. Ties along the normal keep the far-side pixel, so
  // a symmetric plateau of width two yields a one-pixel edge. A neighbour that
  // clamps onto the pixel itself is ignored.
  std::vector<double> thin(image.size(), 0.0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      const double m = grad.magnitude[i];
      if (m <= 0.0) continue;
      const auto [dx, dy] = detail::quantized_direction(grad.gx[i], grad.gy[i]);
      const int px = std::clamp(x - dx, 0, w - 1), py = std::clamp(y - dy, 0, h - 1);
      const int nx = std::clamp(x + dx, 0, w - 1), ny = std::clamp(y + dy, 0, h - 1);
      const bool prev_self = px == x && py == y;
      const bool next_self = nx == x && ny == y;
      const double prev = grad.magnitude[static_cast<std::size_t>(py) * w + px];
      const double next = grad.magnitude[static_cast<std::size_t>(ny) * w + nx];
      if ((prev_self || m >= prev) && (next_self || m > next)) thin[i] = m;
    }
  }

  const double low = params.low * max_mag;
  const double high = params.high * max_mag;
  std::deque<std::size_t> frontier;
  for (std::size_t i = 0; i < thin.size(); ++i) {
    if (thin[i] >= high) {
      out[i] = 1.0;
      frontier.push_back(i);
    }
  }
  while (!frontier.empty()) {
    const std::size_t i = frontier.front();
    frontier.pop_front();
    const int x = static_cast<int>(i % w);
    const int y = static_cast<int>(i / w);
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const int xx = x + dx, yy = y + dy;
        if (xx < 0 || yy < 0 || xx >= w || yy >= h) continue;
        const std::size_t j = static_cast<std::size_t>(yy) * w + xx;
        if (out[j] == 0.0 && thin[j] >= low) {
          out[j] = 1.0;
          frontier.push_back(j);
        }
      }
    }
  }
  return SemanticMap(w, h, std::move(out), MapKind::binary());
}

// Sobel gradient magnitude rescaled by its maximum; a soft edge map.
inline SemanticMap sobel_magnitude(const SemanticMap& image) {
  if (std::min(image.width(), image.height()) < 3) {
    throw DomainError("sobel needs both dimensions >= 3");
  }
  auto grad = detail::sobel(image.data(), image.width(), image.height());
  double max_mag = 0.0;
  for (double m : grad.magnitude) max_mag = std::max(max_mag, m);
  if (max_mag > 0.0) {
    for (double& m : grad.magnitude) m = std::min(1.0, m / max_mag);
  }
  return SemanticMap(image.width(), image.height(), std::move(grad.magnitude));
}

// p -> floor(min(p, 1 - eps) * K) / (K - 1). Idempotent on Labels(K) maps.
inline SemanticMap quantize_segmentation(const SemanticMap& image, int levels) {
  if (levels < 2) throw DomainError("quantization needs K >= 2");
  constexpr double kTopGuard = 1e-12;
  std::vector<double> out(image.size());
  const double k = static_cast<double>(levels);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double p = std::min(image.pixels()[i], 1.0 - kTopGuard);
    out[i] = std::floor(p * k) / (k - 1.0);
  }
  return SemanticMap(image.width(), image.height(), std::move(out), MapKind::labels(levels));
}

inline std::string resolve_template(const std::string& path_template, const std::string& image_id) {
  static const std::string kPlaceholder = "{id}";
  if (path_template.find(kPlaceholder) == std::string::npos) {
    throw DomainError("path template lacks {id}: " + path_template);
  }
  std::string out = path_template;
  for (std::size_t pos = out.find(kPlaceholder); pos != std::string::npos;
       pos = out.find(kPlaceholder, pos + image_id.size())) {
    out.replace(pos, kPlaceholder.size(), image_id);
  }
  return out;
}

inline SemanticMap external_map(const std::string& path_template, const std::string& image_id) {
  const std::string path = resolve_template(path_template, image_id);
  if (!std::filesystem::is_regular_file(path)) throw MissingMapError(path);
  return read_pgm(path);
}

// Dispatches on the extractor kind. `image_id` is only used by external maps.
inline SemanticMap extract(const ExtractorKind& kind, const SemanticMap& image,
                           const std::string& image_id = {}) {
  if (!image.kind().is_soft()) throw DomainError("extract expects a Soft source image");
  return std::visit(
      [&](const auto& k) -> SemanticMap {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, CannyParams>) {
          return canny(image, k);
        } else if constexpr (std::is_same_v<K, SobelMagnitude>) {
          return sobel_magnitude(image);
        } else if constexpr (std::is_same_v<K, QuantizeSegmentation>) {
          return quantize_segmentation(image, k.levels);
        } else {
          return external_map(k.path_template, image_id);
        }
      },
      kind);
}

// Canonical text form, also accepted by parse_extractor:
//   canny[:sigma=S,low=L,high=H] | sobel | quantize[:k=K] | external:template=T
inline std::string to_string(const ExtractorKind& kind) {
  return std::visit(
      [](const auto& k) -> std::string {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, CannyParams>) {
          if (k == CannyParams{}) return "canny";
          return "canny:sigma=" + format_number(k.sigma) +
                 ",low=" + format_number(k.low) +
                 ",high=" + format_number(k.high);
        } else if constexpr (std::is_same_v<K, SobelMagnitude>) {
          return "sobel";
        } else if constexpr (std::is_same_v<K, QuantizeSegmentation>) {
          return "quantize:k=" + std::to_string(k.levels);
        } else {
          return "external:template=" + k.path_template;
        }
      },
      kind);
}

inline constexpr const char kExtractorNames[] = "canny, sobel, quantize, external";

inline ExtractorKind parse_extractor(std::string_view text) {
  const Selector sel = Selector::parse(text);
  if (sel.name == "canny") {
    sel.allow_only({"sigma", "low", "high"});
    CannyParams p;
    p.sigma = sel.number("sigma", p.sigma);
    p.low = sel.number("low", p.low);
    p.high = sel.number("high", p.high);
    p.validate();
    return p;
  }
  if (sel.name == "sobel") {
    sel.allow_only({});
    return SobelMagnitude{};
  }
  if (sel.name == "quantize") {
    sel.allow_only({"k"});
    const int k = sel.integer("k", 4);
    if (k < 2) throw DomainError("quantize needs k >= 2");
    return QuantizeSegmentation{k};
  }
  if (sel.name == "external") {
    sel.allow_only({"template"});
    const auto it = sel.options.find("template");
    if (it == sel.options.end()) throw ConfigError("external extractor needs template=...");
    if (it->second.find("{id}") == std::string::npos) {
      throw DomainError("external template lacks {id}: " + it->second);
    }
    return ExternalExtractor{it->second};
  }
  throw ConfigError("unknown extractor '" + sel.name + "' (valid: " + kExtractorNames + ")");
}

}  // namespace semcom
