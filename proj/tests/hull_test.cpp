// Copyright 2026 The ctceval Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ctceval/hull.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "gtest/gtest.h"

namespace ctceval {
namespace {

// Brute force: p is covered if some point of the piecewise-linear frontier
// (in log-rate) has rate <= p.rate and quality >= p.quality.
bool covered_by_frontier(const ConvexHull& hull, const HullPoint& p, double tol = 1e-9) {
  const auto& h = hull.points;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (h[i].bitrate_kbps <= p.bitrate_kbps && h[i].quality >= p.quality - tol) return true;
    if (i + 1 == h.size()) break;
    const double x0 = std::log(h[i].bitrate_kbps), x1 = std::log(h[i + 1].bitrate_kbps);
    const double x = std::log(p.bitrate_kbps);
    if (x >= x0 && x <= x1) {
      const double q = h[i].quality + (h[i + 1].quality - h[i].quality) * (x - x0) / (x1 - x0);
      if (q >= p.quality - tol) return true;
    }
  }
  return false;
}

std::vector<RDCurve> random_ladder(std::mt19937_64& rng, int rungs, MetricId metric) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<RDCurve> curves;
  for (int r = 0; r < rungs; ++r) {
    std::vector<RDPoint> pts;
    double lr = std::log(50.0 + 400.0 * u(rng)) + r * 0.6;
    double q = 20.0 + 15.0 * u(rng) + r * 2.0;
    for (int i = 0; i < 6; ++i) {
      pts.push_back({235 - 25 * i, std::exp(lr), q});
      lr += 0.2 + 0.6 * u(rng);
      q += 0.2 + 3.0 * u(rng) / (1.0 + r * u(rng));
    }
    curves.emplace_back("seq", CodingConfig::kAdaptiveStreaming, metric, pts,
                        Resolution{640 * (r + 1), 360 * (r + 1)});
  }
  return curves;
}

TEST(DensifyCurveTest, Counts) {
  std::vector<RDPoint> six;
  for (int i = 0; i < 6; ++i) six.push_back({235 - 25 * i, 100.0 * (i + 1), 30.0 + i});
  const RDCurve c("s", CodingConfig::kAdaptiveStreaming, MetricId::kPsnrY, six);
  const auto dense = densify_curve(c);
  ASSERT_EQ(dense.size(), 41u);
  for (std::size_t seg = 0; seg < 5; ++seg) {
    const double step = std::log(dense[seg * 8 + 1].bitrate_kbps / dense[seg * 8].bitrate_kbps);
    for (std::size_t k = 0; k < 8; ++k) {
      EXPECT_NEAR(std::log(dense[seg * 8 + k + 1].bitrate_kbps) -
                      std::log(dense[seg * 8 + k].bitrate_kbps),
                  step, 1e-12);
    }
  }
  const RDCurve two("s", CodingConfig::kAdaptiveStreaming, MetricId::kPsnrY,
                    {six[0], six[1]});
  EXPECT_EQ(densify_curve(two).size(), 9u);
}

TEST(HullTest, TwoPointExample) {
  const ConvexHull h = hull_of_points(
      {{100, 30, {640, 360}, 235}, {150, 36, {1280, 720}, 235}, {120, 31, {640, 360}, 210}},
      MetricId::kVmaf);
  ASSERT_EQ(h.points.size(), 2u);
  EXPECT_EQ(h.points[0].bitrate_kbps, 100);
  EXPECT_EQ(h.points[1].quality, 36);
}

TEST(HullTest, ParetoCutAfterPeak) {
  const ConvexHull h = hull_of_points(
      {{100, 30, {}, 1}, {200, 40, {}, 2}, {400, 39, {}, 3}, {800, 41, {}, 4}},
      MetricId::kPsnrY);
  ASSERT_EQ(h.points.size(), 3u);
  EXPECT_EQ(h.points.back().bitrate_kbps, 800);
}

TEST(HullTest, EqualRateKeepsBestQuality) {
  const ConvexHull h = hull_of_points(
      {{100, 30, {}, 1}, {100, 33, {}, 2}, {200, 35, {}, 3}}, MetricId::kPsnrY);
  ASSERT_EQ(h.points.size(), 2u);
  EXPECT_EQ(h.points[0].quality, 33);
}

TEST(HullTest, RandomLaddersAreCoveredAndStable) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const auto curves = random_ladder(rng, 2 + trial % 5, MetricId::kPsnrY);
    std::vector<HullPoint> pooled;
    const ConvexHull hull = build_hull(curves, kDefaultIntermediatePoints, &pooled);
    for (std::size_t i = 1; i < hull.points.size(); ++i) {
      ASSERT_GT(hull.points[i].bitrate_kbps, hull.points[i - 1].bitrate_kbps);
      ASSERT_GT(hull.points[i].quality, hull.points[i - 1].quality);
    }
    for (const HullPoint& p : pooled) {
      ASSERT_TRUE(covered_by_frontier(hull, p)) << "trial " << trial;
    }
    EXPECT_EQ(hull_of_points(hull.points, hull.metric), hull);
    std::shuffle(pooled.begin(), pooled.end(), rng);
    EXPECT_EQ(hull_of_points(pooled, hull.metric), hull);
  }
}

TEST(HullTest, SaturatedPointsAreExcluded) {
  const RDCurve c("s", CodingConfig::kAdaptiveStreaming, MetricId::kVmaf,
                  {{235, 100, 60}, {210, 200, 80}, {185, 400, 95}, {160, 800, 99.9},
                   {135, 1600, 99.9}, {110, 3200, 99.8}},
                  Resolution{3840, 2160});
  std::vector<HullPoint> pooled;
  const std::vector<RDCurve> curves = {c};
  build_hull(curves, 7, &pooled);
  EXPECT_EQ(pooled.size(), 25u);
}

TEST(HullBdRateTest, ScaledHullGivesScaleMinusOne) {
  std::mt19937_64 rng(23);
  const auto anchor = random_ladder(rng, 4, MetricId::kPsnrY);
  std::vector<RDCurve> test;
  for (const RDCurve& c : anchor) {
    std::vector<RDPoint> pts = c.points();
    for (RDPoint& p : pts) p.bitrate_kbps *= 0.75;
    test.push_back(c.with_points(pts));
  }
  const ConvexHull ha = build_hull(anchor), ht = build_hull(test);
  EXPECT_NEAR(hull_bd_rate(ha, ht).value, -0.25, 1e-9);
}

TEST(HullBdRateTest, WindowUsesMeasuredPoints) {
  const ConvexHull h = hull_of_points(
      {{100, 30, {}, 235}, {150, 33, {}, 235, true}, {200, 35, {}, 210}, {400, 38, {}, 160}},
      MetricId::kPsnrY);
  const auto [lo, hi] = hull_quality_window(h, QualityRange::kLow,
                                            qp_set_for(CodingConfig::kAdaptiveStreaming));
  EXPECT_EQ(lo, 30);
  EXPECT_EQ(hi, 38);
  EXPECT_THROW(hull_quality_window(h, QualityRange::kHigh,
                                   qp_set_for(CodingConfig::kAdaptiveStreaming)),
               Error);
}

}  // namespace
}  // namespace ctceval
