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

#ifndef CTCEVAL_BDRATE_HPP_
#define CTCEVAL_BDRATE_HPP_

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "ctceval/core_model.hpp"
#include "ctceval/error.hpp"
#include "ctceval/interp.hpp"

namespace ctceval {

enum class QualityRange { kFull, kLow, kMid, kHigh };

inline constexpr std::array<QualityRange, 4> kAllQualityRanges = {
    QualityRange::kFull, QualityRange::kLow, QualityRange::kMid,
    QualityRange::kHigh};

inline std::string_view to_string(QualityRange range) {
  switch (range) {
    case QualityRange::kFull: return "full";
    case QualityRange::kLow: return "low";
    case QualityRange::kMid: return "mid";
    case QualityRange::kHigh: return "high";
  }
  return "?";
}

inline QualityRange parse_quality_range(std::string_view text) {
  for (QualityRange range : kAllQualityRanges) {
    if (text == to_string(range)) return range;
  }
  fail(ErrorKind::kParse, "unknown quality range '" + std::string(text) + "'");
}

// 1-based [first, last] quality indices, QP1 being the lowest quality.
inline std::pair<int, int> quality_index_window(QualityRange range) {
  switch (range) {
    case QualityRange::kFull: return {1, 6};
    case QualityRange::kLow: return {1, 4};
    case QualityRange::kMid: return {2, 5};
    case QualityRange::kHigh: return {3, 6};
  }
  return {1, 6};
}

struct ExcludedPoint {
  std::string curve;
  int qp = 0;
  double bitrate_kbps = 0.0;
  double quality = 0.0;
};

struct BdRateResult {
  double value = 0.0;  // fractional rate change; -0.3 is a 30% saving
  double quality_lo = 0.0;
  double quality_hi = 0.0;
  int points_used_anchor = 0;
  int points_used_test = 0;
  std::vector<ExcludedPoint> excluded;
};

struct PlaneWeights {
  double a = 0.92;
  double b = 0.04;

  void validate() const {
    if (std::abs(a + 2.0 * b - 1.0) > 1e-12) {
      fail(ErrorKind::kArgument, "plane weights must satisfy a + 2b = 1");
    }
  }
};

/// Drops points on the flat top of a saturating metric's curve: scanning by
/// ascending rate, any point that does not strictly improve on the best
/// quality retained so far is removed. Non-saturating metrics pass through.
inline RDCurve exclude_saturated(const RDCurve& curve,
                                 std::vector<RDPoint>* dropped = nullptr) {
  if (!is_saturating(curve.metric())) return curve;
  std::vector<RDPoint> kept;
  for (const RDPoint& p : curve.points()) {
    if (kept.empty() || p.quality > kept.back().quality) {
      kept.push_back(p);
    } else if (dropped != nullptr) {
      dropped->push_back(p);
    }
  }
  if (kept.size() < 2) {
    fail(ErrorKind::kExclusion,
         curve.sequence() + " " + std::string(to_string(curve.metric())) +
             ": fewer than 2 points survive saturation exclusion");
  }
  return curve.with_points(std::move(kept));
}

inline RDCurve select_range(const RDCurve& curve, QualityRange range) {
  if (range == QualityRange::kFull) return curve;
  if (curve.size() != QpSet::kSize) {
    fail(ErrorKind::kArgument,
         curve.sequence() + ": partial quality ranges need exactly 6 points, got " +
             std::to_string(curve.size()));
  }
  std::vector<RDPoint> by_qp = curve.points();
  // Descending qp: index 0 is QP1 (lowest quality).
  std::sort(by_qp.begin(), by_qp.end(),
            [](const RDPoint& a, const RDPoint& b) { return a.qp > b.qp; });
  const auto [first, last] = quality_index_window(range);
  std::vector<RDPoint> window(by_qp.begin() + (first - 1), by_qp.begin() + last);
  return curve.with_points(std::move(window));
}

struct BdRateOptions {
  // Logarithm base used for the rate axis; 0 selects the natural log.
  double log_base = 0.0;
  // Restricts integration to the intersection of the curves' overlap and
  // this quality window.
  std::optional<std::pair<double, double>> quality_window;
};

namespace internal {

inline void require_increasing_quality(const RDCurve& curve,
                                       std::string_view role) {
  const auto& pts = curve.points();
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (!(pts[i].quality > pts[i - 1].quality)) {
      fail(ErrorKind::kExclusion,
           std::string(role) + " curve " + curve.sequence() + " " +
               std::string(to_string(curve.metric())) +
               " is not strictly increasing in quality at qp " +
               std::to_string(pts[i].qp));
    }
  }
}

inline PchipSpline fit_log_rate(const RDCurve& curve, double log_scale) {
  std::vector<Knot> knots;
  knots.reserve(curve.size());
  for (const RDPoint& p : curve.points()) {
    knots.push_back({p.quality, std::log(p.bitrate_kbps) * log_scale});
  }
  return pchip_fit(knots);
}

inline void record_dropped(const std::vector<RDPoint>& dropped,
                           const std::string& role,
                           std::vector<ExcludedPoint>& out) {
  for (const RDPoint& p : dropped) {
    out.push_back({role, p.qp, p.bitrate_kbps, p.quality});
  }
}

}  // namespace internal

/// Bjontegaard-delta rate of `test` relative to `anchor`: log-rate is fitted
/// as a monotone PCHIP function of quality on each curve, both splines are
/// integrated exactly over the common quality interval, and the mean log-rate
/// gap is mapped back to a fractional rate change.
inline BdRateResult bd_rate(const RDCurve& anchor, const RDCurve& test,
                            QualityRange range = QualityRange::kFull,
                            const BdRateOptions& options = {}) {
  if (anchor.metric() != test.metric()) {
    fail(ErrorKind::kArgument, "anchor and test curves measure different metrics");
  }
  BdRateResult result;
  std::vector<RDPoint> dropped_anchor, dropped_test;
  const RDCurve a = exclude_saturated(select_range(anchor, range), &dropped_anchor);
  const RDCurve t = exclude_saturated(select_range(test, range), &dropped_test);
  internal::record_dropped(dropped_anchor, "anchor", result.excluded);
  internal::record_dropped(dropped_test, "test", result.excluded);
  internal::require_increasing_quality(a, "anchor");
  internal::require_increasing_quality(t, "test");
  if (a.size() < 2 || t.size() < 2) {
    fail(ErrorKind::kExclusion, "each curve needs at least 2 points");
  }

  double lo = std::max(a.points().front().quality, t.points().front().quality);
  double hi = std::min(a.points().back().quality, t.points().back().quality);
  if (options.quality_window) {
    lo = std::max(lo, options.quality_window->first);
    hi = std::min(hi, options.quality_window->second);
  }
  if (!(hi > lo)) {
    fail(ErrorKind::kOverlap,
         anchor.sequence() + " " + std::string(to_string(anchor.metric())) +
             ": anchor and test quality ranges do not overlap");
  }

  const double log_scale =
      options.log_base > 0.0 ? 1.0 / std::log(options.log_base) : 1.0;
  const PchipSpline fit_a = internal::fit_log_rate(a, log_scale);
  const PchipSpline fit_t = internal::fit_log_rate(t, log_scale);
  const double mean_gap =
      (fit_t.integral(lo, hi) - fit_a.integral(lo, hi)) / (hi - lo);
  result.value = options.log_base > 0.0 ? std::pow(options.log_base, mean_gap) - 1.0
                                        : std::expm1(mean_gap);
  result.quality_lo = lo;
  result.quality_hi = hi;
  result.points_used_anchor = static_cast<int>(a.size());
  result.points_used_test = static_cast<int>(t.size());
  return result;
}

inline double bd_rate_weighted(double y, double cb, double cr,
                               const PlaneWeights& weights = {}) {
  weights.validate();
  return weights.a * y + weights.b * cb + weights.b * cr;
}

}  // namespace ctceval

#endif  // CTCEVAL_BDRATE_HPP_
