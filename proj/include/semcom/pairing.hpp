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

// Extractor/metric pairing: sweep quality against the downscaling factor and
// pick the pair whose response is most nearly linear (max OLS R^2, ties broken
// by |Spearman| and then by name).

#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "semcom/errors.hpp"
#include "semcom/extractors.hpp"
#include "semcom/generation.hpp"
#include "semcom/metrics.hpp"
#include "semcom/rng.hpp"

namespace semcom {

struct ResponseCurve {
  std::vector<int> factors;
  std::vector<double> qualities;

  void validate() const {
    if (factors.size() != qualities.size()) throw ShapeError("curve factor/quality length mismatch");
    if (factors.size() < 3) throw DomainError("a response curve needs at least 3 points");
    for (std::size_t i = 1; i < factors.size(); ++i) {
      if (factors[i] <= factors[i - 1]) throw DomainError("curve factors must be strictly increasing");
    }
  }
};

struct ExtractorMetricPair {
  ExtractorKind extractor;
  MetricKind metric;

  std::string name() const { return to_string(extractor) + "+" + to_string(metric); }
};

struct PredictabilityReport {
  double r_squared = 0.0;
  double slope = 0.0;
  double intercept = 0.0;
  double spearman = 0.0;
  std::string pair;  // "extractor+metric"
};

namespace detail {

// Ranks starting at 1; tied values share the average of their ranks.
inline std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

inline double pearson(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace detail

inline double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ShapeError("spearman inputs differ in length");
  const auto rx = detail::average_ranks(x);
  const auto ry = detail::average_ranks(y);
  return detail::pearson(rx, ry);
}

// OLS of y on x plus Spearman rank correlation. Order of points is irrelevant.
// R^2 is defined as 0 when y has no variance.
inline PredictabilityReport fit_points(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ShapeError("fit inputs differ in length");
  if (x.size() < 2) throw DomainError("fit needs at least 2 points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  PredictabilityReport r;
  r.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  r.intercept = my - r.slope * mx;
  if (syy > 0.0) {
    double ss_res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double e = y[i] - (r.intercept + r.slope * x[i]);
      ss_res += e * e;
    }
    r.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  }
  r.spearman = spearman(x, y);
  return r;
}

inline PredictabilityReport fit_predictability(const ResponseCurve& curve) {
  curve.validate();
  std::vector<double> x(curve.factors.begin(), curve.factors.end());
  return fit_points(x, curve.qualities);
}

// q(d) averaged over the corpus. The probe service has threshold 0, weight 1
// and the given generation noise.
inline ResponseCurve sweep_curve(const ExtractorMetricPair& pair, std::span<const SourceImage> corpus,
                                 std::span<const int> factors, const GenerationBackend& backend,
                                 Rng& rng, double generation_noise = 0.0) {
  if (corpus.empty()) throw DomainError("sweep corpus is empty");
  detail::require_sorted_factors(factors);
  if (factors.size() < 3) throw DomainError("sweep needs at least 3 factors");
  ServiceSpec svc;
  svc.id = pair.name();
  svc.extractor = pair.extractor;
  svc.metric = pair.metric;
  svc.generation_noise = generation_noise;

  ResponseCurve curve;
  curve.factors.assign(factors.begin(), factors.end());
  curve.qualities.assign(factors.size(), 0.0);
  for (const SourceImage& image : corpus) {
    const ServiceProbe probe(svc, image, backend);
    for (std::size_t i = 0; i < factors.size(); ++i) {
      curve.qualities[i] += probe.quality(factors[i], rng).value();
    }
  }
  for (double& q : curve.qualities) q /= static_cast<double>(corpus.size());
  return curve;
}

// Fig.-4 style selection modes: the provider fixes the metric (search
// extractors), fixes the extractor (search metrics), fixes both, or neither.
struct MetricFixed {
  MetricKind metric;
};
struct ExtractorFixed {
  ExtractorKind extractor;
};
struct BothFixed {
  ExtractorMetricPair pair;
};
struct FreeSearch {};

using SelectionMode = std::variant<MetricFixed, ExtractorFixed, BothFixed, FreeSearch>;

struct PairCandidates {
  std::vector<ExtractorKind> extractors;
  std::vector<MetricKind> metrics;
};

struct PairEvaluation {
  ExtractorMetricPair pair;
  ResponseCurve curve;
  PredictabilityReport report;
};

struct PairSelection {
  PairEvaluation winner;
  std::vector<PairEvaluation> evaluated;  // in evaluation order
};

inline std::vector<ExtractorMetricPair> admissible_pairs(const SelectionMode& mode,
                                                         const PairCandidates& candidates) {
  std::vector<ExtractorMetricPair> pairs;
  std::visit(
      [&](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, BothFixed>) {
          pairs.push_back(m.pair);
        } else if constexpr (std::is_same_v<M, MetricFixed>) {
          if (candidates.extractors.empty()) throw DomainError("no extractor candidates");
          for (const auto& e : candidates.extractors) pairs.push_back({e, m.metric});
        } else if constexpr (std::is_same_v<M, ExtractorFixed>) {
          if (candidates.metrics.empty()) throw DomainError("no metric candidates");
          for (const auto& q : candidates.metrics) pairs.push_back({m.extractor, q});
        } else {
          if (candidates.extractors.empty() || candidates.metrics.empty()) {
            throw DomainError("free selection needs extractor and metric candidates");
          }
          for (const auto& e : candidates.extractors) {
            for (const auto& q : candidates.metrics) pairs.push_back({e, q});
          }
        }
      },
      mode);
  return pairs;
}

// True when `a` ranks strictly ahead of `b`.
inline bool more_predictable(const PredictabilityReport& a, const PredictabilityReport& b) {
  if (a.r_squared != b.r_squared) return a.r_squared > b.r_squared;
  if (std::abs(a.spearman) != std::abs(b.spearman)) return std::abs(a.spearman) > std::abs(b.spearman);
  return a.pair < b.pair;
}

// Evaluates every pair with `curve_of(pair)` -> ResponseCurve and keeps the
// most predictable one.
template <typename CurveSource>
PairSelection select_from_pairs(std::span<const ExtractorMetricPair> pairs, CurveSource&& curve_of) {
  if (pairs.empty()) throw DomainError("no candidate pairs");
  PairSelection out;
  for (const auto& pair : pairs) {
    PairEvaluation ev{pair, curve_of(pair), {}};
    ev.report = fit_predictability(ev.curve);
    ev.report.pair = pair.name();
    out.evaluated.push_back(std::move(ev));
  }
  const auto best = std::min_element(
      out.evaluated.begin(), out.evaluated.end(),
      [](const PairEvaluation& a, const PairEvaluation& b) { return more_predictable(a.report, b.report); });
  out.winner = *best;
  return out;
}

template <typename CurveSource>
PairSelection select_pair_with(const SelectionMode& mode, const PairCandidates& candidates,
                               CurveSource&& curve_of) {
  const auto pairs = admissible_pairs(mode, candidates);
  return select_from_pairs(pairs, std::forward<CurveSource>(curve_of));
}

inline PairSelection select_pair(const SelectionMode& mode, const PairCandidates& candidates,
                                 std::span<const SourceImage> corpus, std::span<const int> factors,
                                 const GenerationBackend& backend, Rng& rng,
                                 double generation_noise = 0.0) {
  return select_pair_with(mode, candidates, [&](const ExtractorMetricPair& pair) {
    return sweep_curve(pair, corpus, factors, backend, rng, generation_noise);
  });
}

// CSV: pair,r_squared,slope,spearman
inline void write_pairing_csv(std::ostream& out, std::span<const PairEvaluation> evaluated) {
  out << "pair,r_squared,slope,spearman\n";
  for (const auto& ev : evaluated) {
    out << csv_field(ev.report.pair) << ',' << format_number(ev.report.r_squared) << ','
        << format_number(ev.report.slope) << ',' << format_number(ev.report.spearman) << '\n';
  }
}

// CSV: pair,d,q
inline void write_curves_csv(std::ostream& out, std::span<const PairEvaluation> evaluated) {
  out << "pair,d,q\n";
  for (const auto& ev : evaluated) {
    for (std::size_t i = 0; i < ev.curve.factors.size(); ++i) {
      out << csv_field(ev.report.pair) << ',' << ev.curve.factors[i] << ','
          << format_number(ev.curve.qualities[i]) << '\n';
    }
  }
}

}  // namespace semcom
