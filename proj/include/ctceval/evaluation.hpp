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

#ifndef CTCEVAL_EVALUATION_HPP_
#define CTCEVAL_EVALUATION_HPP_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include <fmt/format.h>

#include "ctceval/bdrate.hpp"
#include "ctceval/core_model.hpp"
#include "ctceval/hull.hpp"
#include "ctceval/ingest_report.hpp"

namespace ctceval {

struct EvaluationOptions {
  std::vector<QualityRange> ranges = {kAllQualityRanges.begin(), kAllQualityRanges.end()};
  std::set<MetricId> metrics;  // empty: every metric present in both inputs
  PlaneWeights weights;
  int n_intermediate = kDefaultIntermediatePoints;
};

struct EvaluationRow {
  std::string sequence;
  CodingConfig config = CodingConfig::kRandomAccess;
  std::string metric;  // MetricId name, or "PSNR_WEIGHTED" for the plane-weighted row
  QualityRange range = QualityRange::kFull;
  BdRateResult result;
};

inline constexpr std::string_view kWeightedMetricLabel = "PSNR_WEIGHTED";

struct SeriesKey {
  std::string sequence;
  CodingConfig config;
  MetricId metric;

  friend auto operator<=>(const SeriesKey&, const SeriesKey&) = default;
};

inline std::map<SeriesKey, std::vector<RDCurve>> group_by_series(
    const std::vector<RdRecord>& records) {
  std::map<SeriesKey, std::vector<RDCurve>> out;
  for (auto& [key, curve] : curves_from_records(records)) {
    out[{key.sequence, key.config, key.metric}].push_back(curve);
  }
  return out;
}

/// BD-rate for one anchor/test series. Adaptive-streaming series (or any
/// series spanning several resolutions) are compared through their hulls.
inline BdRateResult evaluate_series(const std::vector<RDCurve>& anchor,
                                    const std::vector<RDCurve>& test, QualityRange range,
                                    int n_intermediate = kDefaultIntermediatePoints) {
  const CodingConfig config = anchor.front().config();
  if (config == CodingConfig::kAdaptiveStreaming || anchor.size() > 1 || test.size() > 1) {
    const ConvexHull a = build_hull(anchor, n_intermediate);
    const ConvexHull t = build_hull(test, n_intermediate);
    return hull_bd_rate(a, t, range, qp_set_for(config));
  }
  return bd_rate(anchor.front(), test.front(), range);
}

/// Pairs anchor and test series by (sequence, config, metric) and computes
/// BD-rates for every requested range, plus the plane-weighted PSNR row when
/// PSNR_Y, PSNR_U and PSNR_V are all available.
inline std::vector<EvaluationRow> evaluate_pair(const std::vector<RdRecord>& anchor,
                                                const std::vector<RdRecord>& test,
                                                const EvaluationOptions& options = {}) {
  const auto anchor_series = group_by_series(anchor);
  const auto test_series = group_by_series(test);
  auto wanted = [&](MetricId m) { return options.metrics.empty() || options.metrics.contains(m); };
  for (const auto& [key, _] : test_series) {
    if (wanted(key.metric) && !anchor_series.contains(key)) {
      fail(ErrorKind::kParse, "anchor has no data for " + key.sequence + " " +
                                  std::string(to_string(key.config)) + " " +
                                  std::string(to_string(key.metric)));
    }
  }
  std::vector<EvaluationRow> rows;
  std::map<std::tuple<std::string, CodingConfig, QualityRange>, std::map<MetricId, double>> planes;
  for (const auto& [key, curves] : anchor_series) {
    if (!wanted(key.metric)) continue;
    auto it = test_series.find(key);
    if (it == test_series.end()) {
      fail(ErrorKind::kParse, "test has no data for " + key.sequence + " " +
                                  std::string(to_string(key.config)) + " " +
                                  std::string(to_string(key.metric)));
    }
    for (QualityRange range : options.ranges) {
      EvaluationRow row{key.sequence, key.config, std::string(to_string(key.metric)), range,
                        evaluate_series(curves, it->second, range, options.n_intermediate)};
      planes[{key.sequence, key.config, range}][key.metric] = row.result.value;
      rows.push_back(std::move(row));
    }
  }
  std::vector<EvaluationRow> weighted;
  for (const auto& [key, values] : planes) {
    if (!values.contains(MetricId::kPsnrY) || !values.contains(MetricId::kPsnrU) ||
        !values.contains(MetricId::kPsnrV)) {
      continue;
    }
    EvaluationRow row;
    std::tie(row.sequence, row.config, row.range) = key;
    row.metric = std::string(kWeightedMetricLabel);
    row.result.value = bd_rate_weighted(values.at(MetricId::kPsnrY), values.at(MetricId::kPsnrU),
                                        values.at(MetricId::kPsnrV), options.weights);
    weighted.push_back(std::move(row));
  }
  // Weighted rows follow the per-metric rows of their (sequence, config).
  for (EvaluationRow& w : weighted) {
    auto pos = rows.end();
    for (auto r = rows.begin(); r != rows.end(); ++r) {
      if (r->sequence == w.sequence && r->config == w.config) pos = r + 1;
    }
    rows.insert(pos, std::move(w));
  }
  return rows;
}

inline std::string emit_evaluation_csv(const std::vector<EvaluationRow>& rows) {
  std::string out =
      "sequence,config,metric,range,bdrate,quality_lo,quality_hi,points_anchor,points_test,"
      "excluded\n";
  for (const EvaluationRow& r : rows) {
    const bool combined = r.metric == kWeightedMetricLabel;
    out += fmt::format("{},{},{},{},{:.10f},", r.sequence, to_string(r.config), r.metric,
                       to_string(r.range), r.result.value);
    if (combined) {
      out += ",,,,\n";
      continue;
    }
    std::string excluded;
    for (const ExcludedPoint& e : r.result.excluded) {
      excluded += (excluded.empty() ? "" : ";") + e.curve + ":" + std::to_string(e.qp);
    }
    out += fmt::format("{:.6f},{:.6f},{},{},{}\n", r.result.quality_lo, r.result.quality_hi,
                       r.result.points_used_anchor, r.result.points_used_test, excluded);
  }
  return out;
}

/// Full-range BD-rates for the report metrics, tagged with class labels.
inline std::vector<SequenceBdRate> report_entries(
    const std::vector<EvaluationRow>& rows, const std::map<std::string, std::string>& classes) {
  std::vector<SequenceBdRate> out;
  for (const EvaluationRow& r : rows) {
    if (r.range != QualityRange::kFull) continue;
    const auto metric = try_parse_metric(r.metric);
    if (!metric) continue;
    auto it = classes.find(r.sequence);
    if (it == classes.end()) {
      fail(ErrorKind::kParse, "no class label for sequence " + r.sequence);
    }
    out.push_back({r.sequence, it->second, r.config, *metric, r.result.value});
  }
  return out;
}

/// Class-wise table over every config present, using the CTC row layout
/// restricted to the classes that actually occur.
inline ReportTable build_ctc_report(const std::vector<SequenceBdRate>& entries) {
  ReportTable table;
  for (CodingConfig config : kAllCodingConfigs) {
    std::vector<SequenceBdRate> subset;
    std::set<std::string> present;
    for (const SequenceBdRate& e : entries) {
      if (e.config != config) continue;
      subset.push_back(e);
      present.insert(e.class_label);
    }
    if (subset.empty()) continue;
    const ReportGrouping grouping = restrict_grouping(ctc_grouping(config), present);
    if (grouping.empty()) {
      fail(ErrorKind::kArgument, "no report group matches the classes of config " +
                                     std::string(to_string(config)));
    }
    table.append(aggregate_report(subset, grouping));
  }
  return table;
}

}  // namespace ctceval

#endif  // CTCEVAL_EVALUATION_HPP_
