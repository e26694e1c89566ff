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

#ifndef CTCEVAL_INGEST_REPORT_HPP_
#define CTCEVAL_INGEST_REPORT_HPP_

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include <fmt/format.h>
#include <json.hpp>

#include "ctceval/bdrate.hpp"
#include "ctceval/core_model.hpp"
#include "ctceval/error.hpp"
#include "ctceval/hull.hpp"
#include "ctceval/metrics_io.hpp"

namespace ctceval {

// ---------------------------------------------------------------------------
// Small text helpers shared by the CSV readers.

namespace internal {

inline std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.emplace_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

inline std::vector<std::string> text_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(start, end - start));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(std::move(line));
    start = end + 1;
  }
  return lines;
}

inline double parse_double(const std::string& text, std::string_view what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    fail(ErrorKind::kParse, "bad " + std::string(what) + " '" + text + "'");
  }
}

inline int parse_int(const std::string& text, std::string_view what) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    fail(ErrorKind::kParse, "bad " + std::string(what) + " '" + text + "'");
  }
}

// Ordering that compares embedded digit runs numerically ("v2" < "v10").
inline bool natural_less(std::string_view a, std::string_view b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const bool da = std::isdigit(static_cast<unsigned char>(a[i]));
    const bool db = std::isdigit(static_cast<unsigned char>(b[j]));
    if (da && db) {
      std::size_t ie = i, je = j;
      while (ie < a.size() && std::isdigit(static_cast<unsigned char>(a[ie]))) ++ie;
      while (je < b.size() && std::isdigit(static_cast<unsigned char>(b[je]))) ++je;
      const std::string_view na = a.substr(i, ie - i), nb = b.substr(j, je - j);
      const std::string_view ta = na.substr(std::min(na.find_first_not_of('0'), na.size()));
      const std::string_view tb = nb.substr(std::min(nb.find_first_not_of('0'), nb.size()));
      if (ta.size() != tb.size()) return ta.size() < tb.size();
      if (ta != tb) return ta < tb;
      i = ie;
      j = je;
    } else {
      if (a[i] != b[j]) return a[i] < b[j];
      ++i;
      ++j;
    }
  }
  return a.size() - i < b.size() - j;
}

}  // namespace internal

// ---------------------------------------------------------------------------
// Metric logs.

struct MetricLog {
  std::string sequence;
  int qp = 0;
  std::vector<std::map<MetricId, double>> frames;  // index == frame number
  std::map<MetricId, double> pooled;
  std::vector<std::string> warnings;
};

struct IngestOptions {
  // Negate CIEDE2000 values for producers that report it lower-is-better.
  bool flip_ciede2000 = false;
};

// Producer field names accepted for each metric.
inline std::optional<MetricId> metric_from_alias(std::string_view name) {
  static const std::map<std::string, MetricId, std::less<>> kAliases = {
      {"psnr_y", MetricId::kPsnrY},         {"psnr_cb", MetricId::kPsnrU},
      {"psnr_cr", MetricId::kPsnrV},        {"psnr_u", MetricId::kPsnrU},
      {"psnr_v", MetricId::kPsnrV},         {"psnr_yuv", MetricId::kPsnrYuv},
      {"ssim", MetricId::kSsim},            {"float_ssim", MetricId::kSsim},
      {"ms_ssim", MetricId::kMsSsim},       {"float_ms_ssim", MetricId::kMsSsim},
      {"vmaf", MetricId::kVmaf},            {"ciede2000", MetricId::kCiede2000},
      {"psnr_hvs", MetricId::kPsnrHvs},     {"cambi", MetricId::kCambi},
  };
  if (auto it = kAliases.find(name); it != kAliases.end()) return it->second;
  return try_parse_metric(name);
}

namespace internal {

inline void finish_metric_log(MetricLog& log, const IngestOptions& options) {
  std::set<MetricId> framed;
  for (const auto& f : log.frames) {
    for (const auto& [m, _] : f) framed.insert(m);
  }
  for (MetricId m : framed) {
    if (log.pooled.contains(m)) continue;
    double sum = 0.0;
    int n = 0;
    for (const auto& f : log.frames) {
      if (auto it = f.find(m); it != f.end()) {
        sum += it->second;
        ++n;
      }
    }
    log.pooled[m] = sum / n;
    log.warnings.push_back("pooled " + std::string(to_string(m)) +
                           " missing; recomputed as mean of " + std::to_string(n) +
                           " frames");
  }
  if (options.flip_ciede2000) {
    for (auto& f : log.frames) {
      if (auto it = f.find(MetricId::kCiede2000); it != f.end()) it->second = -it->second;
    }
    if (auto it = log.pooled.find(MetricId::kCiede2000); it != log.pooled.end()) {
      it->second = -it->second;
    }
  }
}

inline double json_number(const nlohmann::json& value, const std::string& what) {
  if (!value.is_number()) fail(ErrorKind::kParse, what + " is not a number");
  return value.get<double>();
}

inline MetricLog parse_metric_log_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorKind::kParse, std::string("metric log is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail(ErrorKind::kParse, "metric log root must be an object");

  MetricLog log;
  std::set<std::string> warned;
  auto lookup = [&](const std::string& name) -> std::optional<MetricId> {
    auto m = metric_from_alias(name);
    if (!m && warned.insert(name).second) {
      log.warnings.push_back("unknown metric '" + name + "' skipped");
    }
    return m;
  };

  if (auto it = doc.find("frames"); it != doc.end()) {
    if (!it->is_array()) fail(ErrorKind::kParse, "'frames' must be an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const auto& rec = (*it)[i];
      if (!rec.is_object()) fail(ErrorKind::kParse, "frame record must be an object");
      if (auto num = rec.find("frameNum"); num != rec.end()) {
        if (!num->is_number_integer() || num->get<long long>() != static_cast<long long>(i)) {
          fail(ErrorKind::kParse, "frame numbers must be contiguous from 0 (at record " +
                                      std::to_string(i) + ")");
        }
      }
      auto metrics = rec.find("metrics");
      if (metrics == rec.end() || !metrics->is_object()) {
        fail(ErrorKind::kParse, "frame record " + std::to_string(i) + " has no metrics object");
      }
      std::map<MetricId, double> values;
      for (const auto& [name, value] : metrics->items()) {
        if (auto m = lookup(name)) {
          values[*m] = json_number(value, "frame " + std::to_string(i) + " " + name);
        }
      }
      log.frames.push_back(std::move(values));
    }
  }

  if (auto it = doc.find("pooled_metrics"); it != doc.end()) {
    if (!it->is_object()) fail(ErrorKind::kParse, "'pooled_metrics' must be an object");
    for (const auto& [name, value] : it->items()) {
      auto m = lookup(name);
      if (!m) continue;
      if (value.is_number()) {
        log.pooled[*m] = value.get<double>();
      } else if (value.is_object() && value.contains("mean")) {
        log.pooled[*m] = json_number(value["mean"], "pooled " + name + " mean");
      } else {
        fail(ErrorKind::kParse, "pooled metric '" + name + "' has no mean");
      }
    }
  } else {
    log.warnings.push_back("pooled_metrics section missing");
  }
  return log;
}

// Per-frame CSV as written by the psnr subcommand: a header naming metrics,
// one row per frame index and an optional trailing "mean" row.
inline MetricLog parse_metric_log_csv(std::string_view text) {
  const auto lines = text_lines(text);
  if (lines.empty()) fail(ErrorKind::kParse, "metric CSV is empty");
  const auto header = split_csv_line(lines[0]);
  if (header.empty() || header[0] != "frame") {
    fail(ErrorKind::kParse, "metric CSV must start with a 'frame' column");
  }
  MetricLog log;
  std::vector<std::optional<MetricId>> columns;
  for (std::size_t c = 1; c < header.size(); ++c) {
    auto m = metric_from_alias(header[c]);
    if (!m) log.warnings.push_back("unknown metric '" + header[c] + "' skipped");
    columns.push_back(m);
  }
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto fields = split_csv_line(lines[r]);
    if (fields.size() != header.size()) {
      fail(ErrorKind::kParse, "metric CSV row " + std::to_string(r) + " has " +
                                  std::to_string(fields.size()) + " fields, expected " +
                                  std::to_string(header.size()));
    }
    std::map<MetricId, double> values;
    for (std::size_t c = 1; c < fields.size(); ++c) {
      if (columns[c - 1]) values[*columns[c - 1]] = parse_double(fields[c], "metric value");
    }
    if (fields[0] == "mean") {
      log.pooled = std::move(values);
      continue;
    }
    if (parse_int(fields[0], "frame index") != static_cast<int>(log.frames.size())) {
      fail(ErrorKind::kParse, "frame indices must be contiguous from 0");
    }
    log.frames.push_back(std::move(values));
  }
  return log;
}

}  // namespace internal

/// Parses a metric log: the JSON dialect of the external metric tool
/// (frames[].metrics and pooled_metrics.*.mean) or the per-frame CSV the psnr
/// subcommand writes. Unknown metric names are skipped with a warning; a
/// missing pooled value is recomputed from the frames.
inline MetricLog parse_metric_log(std::string_view text, std::string sequence = {},
                                  int qp = 0, const IngestOptions& options = {}) {
  const auto first = text.find_first_not_of(" \t\r\n");
  MetricLog log = (first != std::string_view::npos && text[first] == '{')
                      ? internal::parse_metric_log_json(text)
                      : internal::parse_metric_log_csv(text);
  log.sequence = std::move(sequence);
  log.qp = qp;
  internal::finish_metric_log(log, options);
  return log;
}

// ---------------------------------------------------------------------------
// RD records: the toolkit's CSV dialect.

struct RdRecord {
  std::string sequence;
  CodingConfig config = CodingConfig::kRandomAccess;
  Resolution resolution;
  int qp = 0;
  double bitrate_kbps = 0.0;
  MetricId metric = MetricId::kPsnrY;
  double value = 0.0;

  friend bool operator==(const RdRecord&, const RdRecord&) = default;
};

inline constexpr std::string_view kRdCsvHeader =
    "sequence,config,resolution,qp,bitrate_kbps,metric,value";

inline std::vector<RdRecord> parse_rd_csv(std::string_view text) {
  const auto lines = internal::text_lines(text);
  if (lines.empty() || lines[0] != kRdCsvHeader) {
    fail(ErrorKind::kParse, "RD CSV must start with header '" + std::string(kRdCsvHeader) + "'");
  }
  std::vector<RdRecord> records;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto f = internal::split_csv_line(lines[r]);
    if (f.size() != 7) {
      fail(ErrorKind::kParse, "RD CSV line " + std::to_string(r + 1) + " has " +
                                  std::to_string(f.size()) + " fields, expected 7");
    }
    RdRecord rec;
    rec.sequence = f[0];
    if (rec.sequence.empty()) fail(ErrorKind::kParse, "empty sequence name");
    rec.config = parse_coding_config(f[1]);
    rec.resolution = parse_resolution(f[2]);
    rec.qp = internal::parse_int(f[3], "qp");
    rec.bitrate_kbps = internal::parse_double(f[4], "bitrate");
    rec.metric = parse_metric(f[5]);
    rec.value = internal::parse_double(f[6], "metric value");
    records.push_back(std::move(rec));
  }
  return records;
}

inline std::string emit_rd_csv(const std::vector<RdRecord>& records) {
  std::string out(kRdCsvHeader);
  out += '\n';
  for (const RdRecord& r : records) {
    out += fmt::format("{},{},{},{},{:.6f},{},{:.6f}\n", r.sequence, to_string(r.config),
                       to_string(r.resolution), r.qp, r.bitrate_kbps, to_string(r.metric),
                       r.value);
  }
  return out;
}

struct CurveKey {
  std::string sequence;
  CodingConfig config;
  Resolution resolution;
  MetricId metric;

  friend auto operator<=>(const CurveKey&, const CurveKey&) = default;
};

inline std::map<CurveKey, RDCurve> curves_from_records(const std::vector<RdRecord>& records) {
  std::map<CurveKey, std::vector<RDPoint>> grouped;
  for (const RdRecord& r : records) {
    auto& pts = grouped[{r.sequence, r.config, r.resolution, r.metric}];
    for (const RDPoint& p : pts) {
      if (p.qp == r.qp) {
        fail(ErrorKind::kArgument, r.sequence + ": duplicate qp " + std::to_string(r.qp) +
                                       " for " + std::string(to_string(r.metric)));
      }
    }
    pts.push_back({r.qp, r.bitrate_kbps, r.value, false});
  }
  std::map<CurveKey, RDCurve> curves;
  for (auto& [key, pts] : grouped) {
    curves.emplace(key, RDCurve(key.sequence, key.config, key.metric, std::move(pts),
                                key.resolution));
  }
  return curves;
}

/// Joins per-QP metric logs with per-QP bitrates into one RD curve per
/// metric. PSNR_YUV is derived from the plane PSNRs with the format's weights
/// when the logs do not carry it.
inline std::vector<RDCurve> curves_from_logs(const std::vector<MetricLog>& logs,
                                             const std::map<int, double>& bitrates,
                                             const SequenceInfo& info, CodingConfig config,
                                             std::optional<Resolution> resolution = {},
                                             std::size_t min_points = 2) {
  if (logs.size() < min_points) {
    fail(ErrorKind::kArgument, info.name + ": need at least " + std::to_string(min_points) +
                                   " metric logs, got " + std::to_string(logs.size()));
  }
  std::set<int> seen;
  std::set<MetricId> common;
  for (std::size_t i = 0; i < logs.size(); ++i) {
    const MetricLog& log = logs[i];
    if (!seen.insert(log.qp).second) {
      fail(ErrorKind::kArgument, info.name + ": duplicate metric log for qp " +
                                     std::to_string(log.qp));
    }
    if (!bitrates.contains(log.qp)) {
      fail(ErrorKind::kArgument, info.name + ": no bitrate for qp " + std::to_string(log.qp));
    }
    std::set<MetricId> here;
    for (const auto& [m, _] : log.pooled) here.insert(m);
    const bool planes = here.contains(MetricId::kPsnrY) && here.contains(MetricId::kPsnrU) &&
                        here.contains(MetricId::kPsnrV);
    if (planes) here.insert(MetricId::kPsnrYuv);
    if (i == 0) {
      common = here;
    } else {
      std::set<MetricId> keep;
      std::set_intersection(common.begin(), common.end(), here.begin(), here.end(),
                            std::inserter(keep, keep.begin()));
      common = std::move(keep);
    }
  }

  std::vector<RDCurve> curves;
  for (MetricId m : common) {
    std::vector<RDPoint> pts;
    for (const MetricLog& log : logs) {
      double q;
      if (auto it = log.pooled.find(m); it != log.pooled.end()) {
        q = it->second;
      } else {
        q = weighted_psnr(log.pooled.at(MetricId::kPsnrY), log.pooled.at(MetricId::kPsnrU),
                          log.pooled.at(MetricId::kPsnrV), info.chroma);
      }
      pts.push_back({log.qp, bitrates.at(log.qp), q, false});
    }
    curves.emplace_back(info.name, config, m, std::move(pts),
                        resolution.value_or(info.resolution()));
  }
  return curves;
}

inline std::vector<RdRecord> records_from_curve(const RDCurve& curve) {
  std::vector<RdRecord> out;
  for (const RDPoint& p : curve.points()) {
    out.push_back({curve.sequence(), curve.config(), curve.resolution(), p.qp,
                   p.bitrate_kbps, curve.metric(), p.quality});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Class-wise report tables.

inline constexpr std::array<MetricId, 6> kReportMetrics = {
    MetricId::kPsnrY, MetricId::kPsnrYuv, MetricId::kSsim,
    MetricId::kMsSsim, MetricId::kVmaf, MetricId::kCiede2000};

inline std::string_view report_column_label(MetricId metric) {
  switch (metric) {
    case MetricId::kPsnrY: return "PSNR-Y";
    case MetricId::kPsnrYuv: return "PSNR-YUV";
    case MetricId::kSsim: return "SSIM";
    case MetricId::kMsSsim: return "MS-SSIM";
    case MetricId::kVmaf: return "VMAF";
    case MetricId::kCiede2000: return "CIEDE2000";
    default: return to_string(metric);
  }
}

struct ReportGroup {
  std::string label;
  std::vector<std::string> classes;
  bool overall = false;
};

using ReportGrouping = std::vector<ReportGroup>;

/// Summary rows in the CTC result-table layout for one coding config.
inline ReportGrouping ctc_grouping(CodingConfig config) {
  const std::vector<std::string> a_b1 = {"A1", "A2", "A3", "A4", "A5", "B1"};
  const std::vector<std::string> b2 = {"B2"};
  const std::vector<std::string> g = {"G", "G1", "G2"};
  const std::vector<std::string> e = {"E"};
  const std::vector<std::string> ycgco = {"ECF_YCgCo"};
  const std::vector<std::string> ecf_scc = {"ECF_SCC"};
  const std::vector<std::string> ecf444 = {"ECF_444", "ECF_444_HDR", "ECF_RGB"};
  const std::vector<std::string> ecf422 = {"ECF_422", "ECF_422_HDR"};
  auto cat = [](std::initializer_list<std::vector<std::string>> parts) {
    std::vector<std::string> all;
    for (const auto& p : parts) all.insert(all.end(), p.begin(), p.end());
    return all;
  };
  const auto all420 = cat({a_b1, b2, g, e});
  const auto all_ecf = cat({ycgco, ecf_scc, ecf444, ecf422});

  switch (config) {
    case CodingConfig::kStillImage:
      return {{"Class F", {"F"}, true}};
    case CodingConfig::kAdaptiveStreaming:
      return {{"4:2:0 Overall", all420, true}};
    default:
      break;
  }
  ReportGrouping rows = {{"Class A+B1", a_b1, false}, {"Class B2 (SCC)", b2, false}};
  if (config != CodingConfig::kLowDelay) {
    rows.push_back({"Class G (HDR)", g, false});
    rows.push_back({"Class E (UGC)", e, false});
  }
  rows.push_back({"ECF YCgCo", ycgco, false});
  rows.push_back({"ECF SCC", ecf_scc, false});
  rows.push_back({"ECF 4:4:4", ecf444, false});
  rows.push_back({"ECF 4:2:2", ecf422, false});
  rows.push_back({"ECF Overall", all_ecf, true});
  rows.push_back({"4:2:0 Overall", all420, true});
  return rows;
}

// Drops groups that no present class belongs to.
inline ReportGrouping restrict_grouping(const ReportGrouping& grouping,
                                        const std::set<std::string>& present_classes) {
  ReportGrouping out;
  for (const ReportGroup& g : grouping) {
    if (std::any_of(g.classes.begin(), g.classes.end(),
                    [&](const std::string& c) { return present_classes.contains(c); })) {
      out.push_back(g);
    }
  }
  return out;
}

struct SequenceBdRate {
  std::string sequence;
  std::string class_label;
  CodingConfig config = CodingConfig::kRandomAccess;
  MetricId metric = MetricId::kPsnrY;
  double value = 0.0;  // fractional
};

struct ReportRow {
  CodingConfig config = CodingConfig::kRandomAccess;
  std::string group;
  bool overall = false;
  std::array<std::optional<double>, kReportMetrics.size()> cells;  // fractional

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

struct ReportTable {
  std::vector<ReportRow> rows;

  void append(const ReportTable& other) {
    rows.insert(rows.end(), other.rows.begin(), other.rows.end());
  }
  friend bool operator==(const ReportTable&, const ReportTable&) = default;
};

/// Unweighted per-sequence means of BD-rates for each group. Every entry must
/// share one coding config. Overall groups average their member sequences
/// directly, not the class means.
inline ReportTable aggregate_report(const std::vector<SequenceBdRate>& entries,
                                    const ReportGrouping& grouping) {
  ReportTable table;
  if (entries.empty()) return table;
  const CodingConfig config = entries.front().config;
  for (const SequenceBdRate& e : entries) {
    if (e.config != config) {
      fail(ErrorKind::kArgument, "aggregate_report: entries mix coding configs");
    }
  }
  for (const ReportGroup& group : grouping) {
    ReportRow row;
    row.config = config;
    row.group = group.label;
    row.overall = group.overall;
    bool any = false;
    for (std::size_t c = 0; c < kReportMetrics.size(); ++c) {
      std::vector<double> values;
      for (const SequenceBdRate& e : entries) {
        if (e.metric == kReportMetrics[c] &&
            std::find(group.classes.begin(), group.classes.end(), e.class_label) !=
                group.classes.end()) {
          values.push_back(e.value);
        }
      }
      if (values.empty()) continue;
      any = true;
      std::sort(values.begin(), values.end());  // order-independent summation
      row.cells[c] = std::accumulate(values.begin(), values.end(), 0.0) /
                     static_cast<double>(values.size());
    }
    if (!any) {
      fail(ErrorKind::kArgument, "report group '" + group.label + "' has no member sequences");
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

enum class ReportFormat { kCsv, kMarkdown };

inline std::string format_percent(double fraction) {
  std::string s = fmt::format("{:.2f}%", fraction * 100.0);
  if (s == "-0.00%") s = "0.00%";
  return s;
}

inline std::string emit_report(const ReportTable& table, ReportFormat format) {
  std::string out;
  if (format == ReportFormat::kCsv) {
    out = "config,summary,overall";
    for (MetricId m : kReportMetrics) out += "," + std::string(report_column_label(m));
    out += '\n';
    for (const ReportRow& row : table.rows) {
      out += fmt::format("{},{},{}", to_string(row.config), row.group, row.overall ? 1 : 0);
      for (const auto& cell : row.cells) out += "," + (cell ? format_percent(*cell) : "");
      out += '\n';
    }
    return out;
  }

  out = "| Coding Config. | Summary |";
  for (MetricId m : kReportMetrics) out += " " + std::string(report_column_label(m)) + " |";
  out += "\n|:--|:--|";
  for (std::size_t i = 0; i < kReportMetrics.size(); ++i) out += "--:|";
  out += '\n';
  std::optional<CodingConfig> previous;
  for (const ReportRow& row : table.rows) {
    const std::string config =
        previous == row.config ? "" : std::string(display_name(row.config));
    previous = row.config;
    auto bold = [&](const std::string& s) { return row.overall ? "**" + s + "**" : s; };
    out += "| " + config + " | " + bold(row.group) + " |";
    for (const auto& cell : row.cells) {
      out += " " + (cell ? bold(format_percent(*cell)) : std::string("-")) + " |";
    }
    out += '\n';
  }
  return out;
}

inline ReportTable parse_report_csv(std::string_view text) {
  const auto lines = internal::text_lines(text);
  ReportTable table;
  if (lines.empty()) fail(ErrorKind::kParse, "report CSV is empty");
  const auto header = internal::split_csv_line(lines[0]);
  if (header.size() != 3 + kReportMetrics.size() || header[0] != "config") {
    fail(ErrorKind::kParse, "unexpected report CSV header");
  }
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto f = internal::split_csv_line(lines[r]);
    if (f.size() != header.size()) {
      fail(ErrorKind::kParse, "report CSV row " + std::to_string(r) + " has wrong field count");
    }
    ReportRow row;
    row.config = parse_coding_config(f[0]);
    row.group = f[1];
    row.overall = f[2] == "1";
    for (std::size_t c = 0; c < kReportMetrics.size(); ++c) {
      std::string cell = f[3 + c];
      if (cell.empty()) continue;
      if (cell.back() == '%') cell.pop_back();
      row.cells[c] = internal::parse_double(cell, "percentage") / 100.0;
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

/// Long-format series for plotting BD-rate progress across releases:
/// version,config,class,metric,bdrate (percent, two decimals).
inline std::string emit_progress_series(
    const std::vector<std::pair<std::string, ReportTable>>& history) {
  if (history.empty()) fail(ErrorKind::kArgument, "progress series needs at least one table");
  struct Row {
    std::string version;
    CodingConfig config;
    std::string group;
    std::size_t metric;
    double value;
  };
  std::vector<Row> rows;
  for (const auto& [version, table] : history) {
    for (const ReportRow& r : table.rows) {
      for (std::size_t c = 0; c < kReportMetrics.size(); ++c) {
        if (r.cells[c]) rows.push_back({version, r.config, r.group, c, *r.cells[c]});
      }
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.version != b.version) return internal::natural_less(a.version, b.version);
    if (a.config != b.config) return a.config < b.config;
    if (a.group != b.group) return internal::natural_less(a.group, b.group);
    return a.metric < b.metric;
  });
  std::string out = "version,config,class,metric,bdrate\n";
  for (const Row& r : rows) {
    out += fmt::format("{},{},{},{},{:.2f}\n", r.version, to_string(r.config), r.group,
                       report_column_label(kReportMetrics[r.metric]), r.value * 100.0);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Hull plot data.

inline constexpr std::string_view kHullCsvHeader =
    "metric,resolution,qp_or_interp,bitrate_kbps,quality,on_hull";

/// Every pooled candidate point with a flag marking frontier membership.
inline std::string emit_hull_csv(const std::vector<HullPoint>& pooled,
                                 const ConvexHull& hull) {
  std::vector<HullPoint> sorted = pooled;
  std::stable_sort(sorted.begin(), sorted.end(), [](const HullPoint& a, const HullPoint& b) {
    return std::tie(a.resolution, a.bitrate_kbps) < std::tie(b.resolution, b.bitrate_kbps);
  });
  std::string out(kHullCsvHeader);
  out += '\n';
  for (const HullPoint& p : sorted) {
    const bool on = std::find(hull.points.begin(), hull.points.end(), p) != hull.points.end();
    out += fmt::format("{},{},{},{:.6f},{:.6f},{}\n", to_string(hull.metric),
                       to_string(p.resolution),
                       p.interpolated ? std::string("interp") : std::to_string(p.qp),
                       p.bitrate_kbps, p.quality, on ? 1 : 0);
  }
  return out;
}

}  // namespace ctceval

#endif  // CTCEVAL_INGEST_REPORT_HPP_
