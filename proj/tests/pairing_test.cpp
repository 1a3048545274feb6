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

#include "semcom/pairing.hpp"

#include <gtest/gtest.h>

#include <map>
#include <sstream>

#include "semcom/synthetic.hpp"

namespace semcom {
namespace {

const std::vector<int> kFactors{1, 2, 4, 8, 10};

ResponseCurve curve_of(std::vector<int> d, std::vector<double> q) { return {std::move(d), std::move(q)}; }

TEST(FitTest, PerfectLine) {
  std::vector<int> d{1, 2, 4, 8, 10};
  std::vector<double> q;
  for (int x : d) q.push_back(1.0 - 0.05 * x);
  const auto r = fit_predictability(curve_of(d, q));
  EXPECT_NEAR(r.r_squared, 1.0, 1e-12);
  EXPECT_NEAR(r.slope, -0.05, 1e-12);
  EXPECT_NEAR(r.intercept, 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(r.spearman, -1.0);
}

TEST(FitTest, ConstantCurveConventions) {
  const auto r = fit_predictability(curve_of({1, 2, 4}, {1.0, 1.0, 1.0}));
  EXPECT_EQ(r.r_squared, 0.0);
  EXPECT_EQ(r.spearman, 0.0);
  EXPECT_EQ(r.slope, 0.0);
}

TEST(FitTest, MatchesSumFormulaOls) {
  const std::vector<int> d{1, 2, 4, 8};
  const std::vector<double> q{1.0, 0.8, 0.5, 0.1};
  // Closed form from raw sums: slope = (n Sxy - Sx Sy) / (n Sxx - Sx^2).
  const double n = 4, sx = 15, sy = 2.4, sxy = 1 + 1.6 + 2.0 + 0.8, sxx = 1 + 4 + 16 + 64;
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / n;
  double ss_res = 0, ss_tot = 0;
  for (int i = 0; i < 4; ++i) {
    const double e = q[i] - (intercept + slope * d[i]);
    ss_res += e * e;
    ss_tot += (q[i] - sy / n) * (q[i] - sy / n);
  }
  const auto r = fit_predictability(curve_of(d, q));
  EXPECT_NEAR(r.slope, slope, 1e-9);
  EXPECT_NEAR(r.slope, -14.4 / 115.0, 1e-9);
  EXPECT_NEAR(r.r_squared, 1.0 - ss_res / ss_tot, 1e-9);
  EXPECT_DOUBLE_EQ(r.spearman, -1.0);
}

TEST(FitTest, SpearmanAveragesTies) {
  const std::vector<double> x{1, 2, 3, 4};
  const std::vector<double> y{1, 1, 2, 2};
  // Ranks of y are 1.5, 1.5, 3.5, 3.5; Pearson against 1..4 is 2/sqrt(5).
  EXPECT_NEAR(spearman(x, y), 2.0 / std::sqrt(5.0), 1e-12);
}

TEST(FitTest, InvariantUnderPointReordering) {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> x, y;
    for (int i = 0; i < 6; ++i) {
      x.push_back(1 + i * 2);
      y.push_back(rng.uniform());
    }
    const auto a = fit_points(x, y);
    std::vector<std::size_t> perm{0, 1, 2, 3, 4, 5};
    for (int i = 5; i > 0; --i) std::swap(perm[i], perm[rng.index(i + 1)]);
    std::vector<double> px, py;
    for (auto p : perm) {
      px.push_back(x[p]);
      py.push_back(y[p]);
    }
    const auto b = fit_points(px, py);
    EXPECT_NEAR(a.r_squared, b.r_squared, 1e-12);
    EXPECT_NEAR(a.slope, b.slope, 1e-12);
    EXPECT_NEAR(a.spearman, b.spearman, 1e-12);
    EXPECT_GE(a.r_squared, 0.0);
    EXPECT_LE(a.r_squared, 1.0);
  }
}

TEST(FitTest, RejectsInvalidCurves) {
  EXPECT_THROW(fit_predictability(curve_of({1, 2}, {1.0, 0.5})), DomainError);
  EXPECT_THROW(fit_predictability(curve_of({1, 2, 2}, {1.0, 0.5, 0.2})), DomainError);
  EXPECT_THROW(fit_predictability(curve_of({1, 2, 3}, {1.0, 0.5})), ShapeError);
}

TEST(SweepTest, StartsAtOneWithoutNoise) {
  const std::vector<SourceImage> corpus{{"step", synthetic::vertical_step(24, 24, 12)}};
  Rng rng(1);
  const auto curve = sweep_curve({CannyParams{}, MseQuality{}}, corpus, kFactors, SurrogateBackend{}, rng);
  EXPECT_EQ(curve.qualities.front(), 1.0);
  EXPECT_EQ(curve.factors, kFactors);
}

TEST(SweepTest, ConstantImageWithCannyIsAllOne) {
  const std::vector<SourceImage> corpus{{"flat", SemanticMap::filled(24, 24, 0.6)}};
  Rng rng(1);
  const auto curve = sweep_curve({CannyParams{}, SsimQuality{}}, corpus, kFactors, SurrogateBackend{}, rng);
  for (double q : curve.qualities) EXPECT_EQ(q, 1.0);
}

TEST(SweepTest, CorpusCurveIsMeanOfSingleCurves) {
  const SourceImage a{"a", synthetic::disk(24, 24, 11.0, 12.0, 7.0)};
  const SourceImage b{"b", synthetic::filled_square(24, 24, 5, 6, 9)};
  const ExtractorMetricPair pair{SobelMagnitude{}, PsnrQuality{}};
  Rng rng(1);
  const std::vector<SourceImage> both{a, b}, only_a{a}, only_b{b};
  const auto ca = sweep_curve(pair, only_a, kFactors, SurrogateBackend{}, rng);
  const auto cb = sweep_curve(pair, only_b, kFactors, SurrogateBackend{}, rng);
  const auto cab = sweep_curve(pair, both, kFactors, SurrogateBackend{}, rng);
  for (std::size_t i = 0; i < kFactors.size(); ++i) {
    EXPECT_NEAR(cab.qualities[i], 0.5 * (ca.qualities[i] + cb.qualities[i]), 1e-12);
  }
}

TEST(SweepTest, RejectsBadInputs) {
  Rng rng(1);
  const std::vector<SourceImage> corpus{{"x", SemanticMap::filled(8, 8, 0.0)}};
  const ExtractorMetricPair pair{SobelMagnitude{}, MseQuality{}};
  EXPECT_THROW(sweep_curve(pair, {}, kFactors, SurrogateBackend{}, rng), DomainError);
  EXPECT_THROW(sweep_curve(pair, corpus, std::vector<int>{1, 2}, SurrogateBackend{}, rng), DomainError);
}

// Fixed curves keyed by pair name; "sobel+mse" is exactly linear.
std::map<std::string, ResponseCurve> constructed_curves() {
  const std::vector<int> d{1, 2, 4, 8};
  return {
      {"sobel+mse", curve_of(d, {0.95, 0.9, 0.8, 0.6})},
      {"sobel+vi", curve_of(d, {1.0, 0.5, 0.45, 0.4})},
      {"canny+mse", curve_of(d, {1.0, 0.9, 0.4, 0.35})},
      {"canny+vi", curve_of(d, {1.0, 0.98, 0.9, 0.1})},
  };
}

TEST(SelectTest, AllModesOnConstructedCurves) {
  const auto curves = constructed_curves();
  const auto lookup = [&](const ExtractorMetricPair& p) { return curves.at(p.name()); };
  const PairCandidates cands{{CannyParams{}, SobelMagnitude{}}, {MseQuality{}, ViQuality{}}};

  const auto free = select_pair_with(FreeSearch{}, cands, lookup);
  EXPECT_EQ(free.evaluated.size(), 4u);
  EXPECT_EQ(free.winner.report.pair, "sobel+mse");
  EXPECT_NEAR(free.winner.report.r_squared, 1.0, 1e-12);
  for (const auto& ev : free.evaluated) {
    EXPECT_GE(free.winner.report.r_squared, ev.report.r_squared);
  }

  const auto metric_fixed = select_pair_with(MetricFixed{ViQuality{}}, cands, lookup);
  EXPECT_EQ(metric_fixed.evaluated.size(), 2u);
  const double rv_c = fit_predictability(curves.at("canny+vi")).r_squared;
  const double rv_s = fit_predictability(curves.at("sobel+vi")).r_squared;
  EXPECT_EQ(metric_fixed.winner.report.pair, rv_c > rv_s ? "canny+vi" : "sobel+vi");

  const auto extractor_fixed = select_pair_with(ExtractorFixed{CannyParams{}}, cands, lookup);
  EXPECT_EQ(extractor_fixed.evaluated.size(), 2u);
  const double rc_m = fit_predictability(curves.at("canny+mse")).r_squared;
  EXPECT_EQ(extractor_fixed.winner.report.pair, rc_m > rv_c ? "canny+mse" : "canny+vi");

  const auto both = select_pair_with(BothFixed{{CannyParams{}, ViQuality{}}}, PairCandidates{}, lookup);
  EXPECT_EQ(both.evaluated.size(), 1u);
  EXPECT_EQ(both.winner.report.pair, "canny+vi");
}

TEST(SelectTest, SingletonAndEmptyCandidates) {
  const auto curves = constructed_curves();
  const auto lookup = [&](const ExtractorMetricPair& p) { return curves.at(p.name()); };
  const auto one = select_pair_with(MetricFixed{MseQuality{}}, PairCandidates{{CannyParams{}}, {}}, lookup);
  EXPECT_EQ(one.winner.report.pair, "canny+mse");
  EXPECT_THROW(select_pair_with(MetricFixed{MseQuality{}}, PairCandidates{}, lookup), DomainError);
  EXPECT_THROW(select_pair_with(ExtractorFixed{CannyParams{}}, PairCandidates{}, lookup), DomainError);
  EXPECT_THROW(select_pair_with(FreeSearch{}, PairCandidates{{CannyParams{}}, {}}, lookup), DomainError);
}

TEST(SelectTest, TiesBreakOnSpearmanThenName) {
  PredictabilityReport a{0.5, 0, 0, -0.9, "b+x"}, b{0.5, 0, 0, 0.8, "a+x"}, c{0.5, 0, 0, 0.9, "a+y"};
  EXPECT_TRUE(more_predictable(a, b));
  EXPECT_TRUE(more_predictable(c, a));
  EXPECT_FALSE(more_predictable(a, c));
}

TEST(SelectTest, RealSweepWinnerDominatesRescan) {
  const std::vector<SourceImage> corpus{{"disk", synthetic::disk(32, 32, 15.0, 16.0, 8.0)},
                                        {"sq", synthetic::filled_square(32, 32, 6, 9, 14)}};
  const PairCandidates cands{{CannyParams{}, SobelMagnitude{}, QuantizeSegmentation{4}},
                             {MseQuality{}, SsimQuality{}, ViQuality{}}};
  Rng rng(3);
  const auto sel = select_pair(FreeSearch{}, cands, corpus, kFactors, SurrogateBackend{}, rng);
  ASSERT_EQ(sel.evaluated.size(), 9u);
  for (const auto& ev : sel.evaluated) {
    EXPECT_GE(sel.winner.report.r_squared, ev.report.r_squared);
    const auto fresh = fit_predictability(ev.curve);
    EXPECT_EQ(fresh.r_squared, ev.report.r_squared);
  }
}

TEST(CsvTest, PairingAndCurveSchemas) {
  const auto curves = constructed_curves();
  const auto sel = select_pair_with(BothFixed{{SobelMagnitude{}, MseQuality{}}}, PairCandidates{},
                                    [&](const ExtractorMetricPair& p) { return curves.at(p.name()); });
  std::ostringstream pairing, curve;
  write_pairing_csv(pairing, sel.evaluated);
  write_curves_csv(curve, sel.evaluated);
  EXPECT_EQ(pairing.str().substr(0, pairing.str().find('\n')), "pair,r_squared,slope,spearman");
  EXPECT_NE(pairing.str().find("sobel+mse,1,-0.05,-1"), std::string::npos);
  EXPECT_EQ(curve.str(), "pair,d,q\nsobel+mse,1,0.95\nsobel+mse,2,0.9\nsobel+mse,4,0.8\nsobel+mse,8,0.6\n");
}

}  // namespace
}  // namespace semcom
