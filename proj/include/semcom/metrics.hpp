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

// Quality metrics between a reference semantic map and its reconstruction.
// Every score is normalized to [0,1] with 1 meaning an exact match:
//   mse   q = 1 - MSE
//   psnr  q = min(PSNR, cap) / cap, q = 1 when MSE = 0
//   ssim  q = clamp(mean windowed SSIM, 0, 1)
//   vi    q = clamp(1 - VI / (2 ln K), 0, 1)

#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "semcom/errors.hpp"
#include "semcom/image.hpp"
#include "semcom/selector.hpp"

namespace semcom {

struct MseQuality {
  friend bool operator==(const MseQuality&, const MseQuality&) = default;
};

struct PsnrQuality {
  double cap_db = 50.0;
  friend bool operator==(const PsnrQuality&, const PsnrQuality&) = default;
};

struct SsimQuality {
  int window = 8;
  double k1 = 0.01;
  double k2 = 0.03;
  double dynamic_range = 1.0;

  double c1() const { return (k1 * dynamic_range) * (k1 * dynamic_range); }
  double c2() const { return (k2 * dynamic_range) * (k2 * dynamic_range); }
  friend bool operator==(const SsimQuality&, const SsimQuality&) = default;
};

struct ViQuality {
  int levels = 8;
  friend bool operator==(const ViQuality&, const ViQuality&) = default;
};

using MetricKind = std::variant<MseQuality, PsnrQuality, SsimQuality, ViQuality>;

// A normalized quality in [0,1].
class QualityScore {
 public:
  constexpr QualityScore() = default;
  explicit QualityScore(double value) : value_(std::clamp(value, 0.0, 1.0)) {}
  double value() const { return value_; }
  friend auto operator<=>(const QualityScore&, const QualityScore&) = default;

 private:
  double value_ = 0.0;
};

namespace detail {

inline void require_same_shape(const SemanticMap& a, const SemanticMap& b) {
  if (!(a.resolution() == b.resolution())) {
    throw ShapeError("metric inputs differ in resolution: " + std::to_string(a.width()) + "x" +
                     std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                     std::to_string(b.height()));
  }
}

inline double mean_squared_error(const SemanticMap& a, const SemanticMap& b) {
  require_same_shape(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a.pixels()[i] - b.pixels()[i];
    s += d * d;
  }
  return s / static_cast<double>(a.size());
}

// Label index of every pixel for a K-level comparison. Label maps with a
// matching K are read directly; anything else is quantized into K bins.
inline std::vector<int> label_indices(const SemanticMap& map, int levels) {
  std::vector<int> out(map.size());
  const bool direct = map.kind().is_labels() && map.kind().levels == levels;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double v = map.pixels()[i];
    out[i] = direct ? static_cast<int>(std::lround(v * (levels - 1)))
                    : static_cast<int>(std::floor(std::min(v, 1.0 - 1e-12) * levels));
  }
  return out;
}

inline double entropy_term(double p) { return p > 0.0 ? -p * std::log(p) : 0.0; }

// 2D prefix sums with a zero border row/column.
class SummedArea {
 public:
  SummedArea(int w, int h) : w_(w), table_(static_cast<std::size_t>(w + 1) * (h + 1), 0.0) {}

  template <typename F>
  static SummedArea build(int w, int h, F value) {
    SummedArea s(w, h);
    for (int y = 0; y < h; ++y) {
      double row = 0.0;
      for (int x = 0; x < w; ++x) {
        row += value(x, y);
        s.cell(x + 1, y + 1) = s.cell(x + 1, y) + row;
      }
    }
    return s;
  }

  double box(int x, int y, int n) const {
    return cell(x + n, y + n) - cell(x, y + n) - cell(x + n, y) + cell(x, y);
  }

 private:
  double& cell(int x, int y) { return table_[static_cast<std::size_t>(y) * (w_ + 1) + x]; }
  double cell(int x, int y) const { return table_[static_cast<std::size_t>(y) * (w_ + 1) + x]; }

  int w_;
  std::vector<double> table_;
};

}  // namespace detail

inline QualityScore mse_quality(const SemanticMap& a, const SemanticMap& b) {
  return QualityScore(1.0 - detail::mean_squared_error(a, b));
}

inline double psnr_db(const SemanticMap& a, const SemanticMap& b) {
  const double mse = detail::mean_squared_error(a, b);
  if (mse == 0.0) return INFINITY;
  return 10.0 * std::log10(1.0 / mse);
}

inline QualityScore psnr_quality(const SemanticMap& a, const SemanticMap& b, double cap_db = 50.0) {
  if (!(cap_db > 0.0)) throw DomainError("PSNR cap must be > 0");
  const double psnr = psnr_db(a, b);
  if (std::isinf(psnr)) return QualityScore(1.0);
  return QualityScore(std::min(psnr, cap_db) / cap_db);
}

// Mean SSIM over every window x window position (stride 1, uniform weights,
// population moments).
inline double mean_ssim(const SemanticMap& a, const SemanticMap& b, const SsimQuality& p = {}) {
  detail::require_same_shape(a, b);
  if (p.window < 2) throw DomainError("SSIM window must be >= 2");
  if (a.width() < p.window || a.height() < p.window) {
    throw TooSmallError("SSIM needs both dimensions >= window (" + std::to_string(p.window) + ")");
  }
  const int w = a.width(), h = a.height(), n = p.window;
  using detail::SummedArea;
  const auto sa = SummedArea::build(w, h, [&](int x, int y) { return a.at(x, y); });
  const auto sb = SummedArea::build(w, h, [&](int x, int y) { return b.at(x, y); });
  const auto saa = SummedArea::build(w, h, [&](int x, int y) { return a.at(x, y) * a.at(x, y); });
  const auto sbb = SummedArea::build(w, h, [&](int x, int y) { return b.at(x, y) * b.at(x, y); });
  const auto sab = SummedArea::build(w, h, [&](int x, int y) { return a.at(x, y) * b.at(x, y); });
  const double count = static_cast<double>(n) * n;
  const double c1 = p.c1(), c2 = p.c2();
  double total = 0.0;
  for (int y = 0; y + n <= h; ++y) {
    for (int x = 0; x + n <= w; ++x) {
      const double mx = sa.box(x, y, n) / count;
      const double my = sb.box(x, y, n) / count;
      // Unclamped so that a == b gives vx == vy == cxy and a window SSIM of 1.
      const double vx = saa.box(x, y, n) / count - mx * mx;
      const double vy = sbb.box(x, y, n) / count - my * my;
      const double cxy = sab.box(x, y, n) / count - mx * my;
      total += ((2.0 * mx * my + c1) * (2.0 * cxy + c2)) /
               ((mx * mx + my * my + c1) * (vx + vy + c2));
    }
  }
  return total / (static_cast<double>(w - n + 1) * (h - n + 1));
}

inline QualityScore ssim_quality(const SemanticMap& a, const SemanticMap& b,
                                 const SsimQuality& p = {}) {
  return QualityScore(mean_ssim(a, b, p));
}

// Variation of information in nats between the K-level labelings of a and b,
// computed as 2 H(X,Y) - H(X) - H(Y).
inline double variation_of_information(const SemanticMap& a, const SemanticMap& b, int levels) {
  detail::require_same_shape(a, b);
  if (levels < 2) throw DomainError("VI needs K >= 2");
  const auto la = detail::label_indices(a, levels);
  const auto lb = detail::label_indices(b, levels);
  const std::size_t k = static_cast<std::size_t>(levels);
  std::vector<double> joint(k * k, 0.0), pa(k, 0.0), pb(k, 0.0);
  for (std::size_t i = 0; i < la.size(); ++i) {
    joint[la[i] * k + lb[i]] += 1.0;
    pa[la[i]] += 1.0;
    pb[lb[i]] += 1.0;
  }
  const double n = static_cast<double>(la.size());
  double hxy = 0.0, hx = 0.0, hy = 0.0;
  for (double c : joint) hxy += detail::entropy_term(c / n);
  for (double c : pa) hx += detail::entropy_term(c / n);
  for (double c : pb) hy += detail::entropy_term(c / n);
  return std::max(0.0, 2.0 * hxy - hx - hy);
}

inline QualityScore vi_quality(const SemanticMap& a, const SemanticMap& b, int levels = 8) {
  const double vi = variation_of_information(a, b, levels);
  return QualityScore(1.0 - vi / (2.0 * std::log(static_cast<double>(levels))));
}

inline QualityScore score(const MetricKind& kind, const SemanticMap& a, const SemanticMap& b) {
  return std::visit(
      [&](const auto& m) -> QualityScore {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, MseQuality>) {
          return mse_quality(a, b);
        } else if constexpr (std::is_same_v<M, PsnrQuality>) {
          return psnr_quality(a, b, m.cap_db);
        } else if constexpr (std::is_same_v<M, SsimQuality>) {
          return ssim_quality(a, b, m);
        } else {
          return vi_quality(a, b, m.levels);
        }
      },
      kind);
}

// Canonical text form: mse | psnr[:cap=C] | ssim[:window=N] | vi[:k=K]
inline std::string to_string(const MetricKind& kind) {
  return std::visit(
      [](const auto& m) -> std::string {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, MseQuality>) {
          return "mse";
        } else if constexpr (std::is_same_v<M, PsnrQuality>) {
          return m == PsnrQuality{} ? "psnr" : "psnr:cap=" + format_number(m.cap_db);
        } else if constexpr (std::is_same_v<M, SsimQuality>) {
          return m == SsimQuality{} ? "ssim" : "ssim:window=" + std::to_string(m.window);
        } else {
          return m == ViQuality{} ? "vi" : "vi:k=" + std::to_string(m.levels);
        }
      },
      kind);
}

inline constexpr const char kMetricNames[] = "mse, psnr, ssim, vi";

inline MetricKind parse_metric(std::string_view text) {
  const Selector sel = Selector::parse(text);
  if (sel.name == "mse") {
    sel.allow_only({});
    return MseQuality{};
  }
  if (sel.name == "psnr") {
    sel.allow_only({"cap"});
    const double cap = sel.number("cap", 50.0);
    if (!(cap > 0.0)) throw DomainError("psnr cap must be > 0");
    return PsnrQuality{cap};
  }
  if (sel.name == "ssim") {
    sel.allow_only({"window"});
    SsimQuality s;
    s.window = sel.integer("window", s.window);
    if (s.window < 2) throw DomainError("ssim window must be >= 2");
    return s;
  }
  if (sel.name == "vi") {
    sel.allow_only({"k"});
    const int k = sel.integer("k", 8);
    if (k < 2) throw DomainError("vi k must be >= 2");
    return ViQuality{k};
  }
  throw ConfigError("unknown metric '" + sel.name + "' (valid: " + kMetricNames + ")");
}

}  // namespace semcom
