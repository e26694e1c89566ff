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

// Multi-resolution rate-quality frontier for adaptive-streaming evaluation.

#ifndef CTCEVAL_HULL_HPP_
#define CTCEVAL_HULL_HPP_

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "ctceval/bdrate.hpp"
#include "ctceval/core_model.hpp"
#include "ctceval/error.hpp"
#include "ctceval/interp.hpp"

namespace ctceval {

inline constexpr int kDefaultIntermediatePoints = 7;

struct HullPoint {
  double bitrate_kbps = 0.0;
  double quality = 0.0;
  Resolution resolution;
  int qp = 0;  // for interpolated points, the qp of the lower-rate endpoint
  bool interpolated = false;

  friend bool operator==(const HullPoint&, const HullPoint&) = default;
};

struct ConvexHull {
  MetricId metric = MetricId::kVmaf;
  std::vector<HullPoint> points;  // ascending bitrate and quality

  friend bool operator==(const ConvexHull&, const ConvexHull&) = default;
};

inline std::vector<HullPoint> densify_curve(
    const RDCurve& curve, int n_intermediate = kDefaultIntermediatePoints) {
  if (curve.size() < 2) {
    fail(ErrorKind::kArgument, "densification needs at least 2 points");
  }
  const auto& pts = curve.points();
  auto to_hull = [&](const RDPoint& p) {
    return HullPoint{p.bitrate_kbps, p.quality, curve.resolution(), p.qp,
                     p.interpolated};
  };
  std::vector<HullPoint> out;
  out.reserve(pts.size() + (pts.size() - 1) *
                               static_cast<std::size_t>(n_intermediate));
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    out.push_back(to_hull(pts[i]));
    for (const RDPoint& p : densify_log_rate(pts[i], pts[i + 1], n_intermediate)) {
      out.push_back(to_hull(p));
    }
  }
  out.push_back(to_hull(pts.back()));
  return out;
}

namespace internal {

// Total order on hull candidates so the result never depends on input order.
inline bool hull_candidate_less(const HullPoint& a, const HullPoint& b) {
  return std::tie(a.bitrate_kbps, b.quality, a.resolution, a.interpolated, a.qp) <
         std::tie(b.bitrate_kbps, a.quality, b.resolution, b.interpolated, b.qp);
}

// Positive when o -> a -> b turns clockwise in (log-rate, quality).
inline double turn(const HullPoint& o, const HullPoint& a, const HullPoint& b) {
  const double ox = std::log(o.bitrate_kbps);
  const double ax = std::log(a.bitrate_kbps) - ox;
  const double bx = std::log(b.bitrate_kbps) - ox;
  const double ay = a.quality - o.quality;
  const double by = b.quality - o.quality;
  return ay * bx - ax * by;
}

inline bool is_strict_right_turn(const HullPoint& o, const HullPoint& a,
                                 const HullPoint& b) {
  const double scale =
      (std::abs(std::log(b.bitrate_kbps) - std::log(o.bitrate_kbps)) + 1.0) *
      (std::abs(b.quality - o.quality) + std::abs(a.quality - o.quality) + 1.0);
  return turn(o, a, b) > 1e-12 * scale;
}

}  // namespace internal

/// Upper convex envelope of `candidates` in the (log-rate, quality) plane,
/// truncated to its strictly increasing (Pareto-optimal) part.
inline ConvexHull hull_of_points(std::vector<HullPoint> candidates,
                                 MetricId metric) {
  if (candidates.empty()) {
    fail(ErrorKind::kArgument, "cannot build a hull from an empty point set");
  }
  for (const HullPoint& p : candidates) {
    if (!(p.bitrate_kbps > 0.0)) {
      fail(ErrorKind::kArgument, "hull points need positive bitrate");
    }
  }
  std::sort(candidates.begin(), candidates.end(), internal::hull_candidate_less);

  std::vector<HullPoint> upper;
  for (const HullPoint& p : candidates) {
    if (!upper.empty() && upper.back().bitrate_kbps == p.bitrate_kbps) {
      continue;  // same rate, lower or equal quality
    }
    while (upper.size() >= 2 &&
           !internal::is_strict_right_turn(upper[upper.size() - 2],
                                           upper.back(), p)) {
      upper.pop_back();
    }
    upper.push_back(p);
  }

  ConvexHull hull{metric, {}};
  for (const HullPoint& p : upper) {
    if (hull.points.empty() || p.quality > hull.points.back().quality) {
      hull.points.push_back(p);
    } else {
      break;  // concave envelope: once quality stops rising it never recovers
    }
  }
  return hull;
}

/// Densifies every per-resolution curve (after saturated-point exclusion),
/// pools the points and returns their frontier. When `pooled` is given it
/// receives the full candidate set, e.g. for plot export.
inline ConvexHull build_hull(std::span<const RDCurve> curves,
                             int n_intermediate = kDefaultIntermediatePoints,
                             std::vector<HullPoint>* pooled = nullptr) {
  if (curves.empty()) {
    fail(ErrorKind::kArgument, "hull construction needs at least one curve");
  }
  const MetricId metric = curves.front().metric();
  std::vector<HullPoint> all;
  for (const RDCurve& curve : curves) {
    if (curve.metric() != metric) {
      fail(ErrorKind::kArgument, "all hull curves must share one metric");
    }
    const RDCurve usable = exclude_saturated(curve);
    std::vector<HullPoint> dense = densify_curve(usable, n_intermediate);
    all.insert(all.end(), dense.begin(), dense.end());
  }
  if (pooled != nullptr) *pooled = all;
  return hull_of_points(std::move(all), metric);
}

inline RDCurve hull_as_curve(const ConvexHull& hull, std::string name = "hull") {
  std::vector<RDPoint> pts;
  pts.reserve(hull.points.size());
  for (const HullPoint& h : hull.points) {
    pts.push_back({h.qp, h.bitrate_kbps, h.quality, h.interpolated});
  }
  return RDCurve(std::move(name), CodingConfig::kAdaptiveStreaming, hull.metric,
                 std::move(pts));
}

/// Quality span of the anchor hull's measured points whose qp lies in the
/// range's QP window. Multi-resolution hulls lose per-QP identity for their
/// interpolated points, so only measured points define the window.
inline std::pair<double, double> hull_quality_window(const ConvexHull& anchor,
                                                     QualityRange range,
                                                     const QpSet& qps) {
  const auto [first, last] = quality_index_window(range);
  std::vector<int> window;
  for (int i = first; i <= last; ++i) window.push_back(qps.qp_by_quality_index(i));
  double lo = 0.0, hi = 0.0;
  int count = 0;
  for (const HullPoint& h : anchor.points) {
    if (h.interpolated ||
        std::find(window.begin(), window.end(), h.qp) == window.end()) {
      continue;
    }
    lo = count == 0 ? h.quality : std::min(lo, h.quality);
    hi = count == 0 ? h.quality : std::max(hi, h.quality);
    ++count;
  }
  if (count < 2) {
    fail(ErrorKind::kOverlap,
         "anchor hull has fewer than 2 measured points in the " +
             std::string(to_string(range)) + " quality window");
  }
  return {lo, hi};
}

inline BdRateResult hull_bd_rate(const ConvexHull& anchor, const ConvexHull& test,
                                 QualityRange range = QualityRange::kFull,
                                 const QpSet& qps =
                                     qp_set_for(CodingConfig::kAdaptiveStreaming)) {
  if (anchor.points.empty() || test.points.empty()) {
    fail(ErrorKind::kArgument, "hull BD-rate needs non-empty hulls");
  }
  if (anchor.metric != test.metric) {
    fail(ErrorKind::kArgument, "anchor and test hulls measure different metrics");
  }
  BdRateOptions options;
  if (range != QualityRange::kFull) {
    options.quality_window = hull_quality_window(anchor, range, qps);
  }
  return bd_rate(hull_as_curve(anchor, "anchor hull"),
                 hull_as_curve(test, "test hull"), QualityRange::kFull, options);
}

}  // namespace ctceval

#endif  // CTCEVAL_HULL_HPP_
