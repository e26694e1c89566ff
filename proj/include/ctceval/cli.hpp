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

// Command-line front end. `run_cli` is the whole program; the executable in
// tools/ only forwards argv and the standard streams.

#ifndef CTCEVAL_CLI_HPP_
#define CTCEVAL_CLI_HPP_

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "ctceval/bdrate.hpp"
#include "ctceval/core_model.hpp"
#include "ctceval/error.hpp"
#include "ctceval/evaluation.hpp"
#include "ctceval/hull.hpp"
#include "ctceval/ingest_report.hpp"
#include "ctceval/metrics_io.hpp"
#include "ctceval/resampler.hpp"
#include "ctceval/runner.hpp"

namespace ctceval::cli {

namespace fs = std::filesystem;

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,  // I/O, process or numeric failures
  kExitParse = 2,    // usage, parse and configuration errors
  kExitOverlap = 3,
  kExitExclusion = 4,
};

inline int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParse:
    case ErrorKind::kArgument:
    case ErrorKind::kConfig:
      return kExitParse;
    case ErrorKind::kOverlap:
      return kExitOverlap;
    case ErrorKind::kExclusion:
      return kExitExclusion;
    default:
      return kExitFailure;
  }
}

inline std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kIo, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writes through a sibling temp file and renames it into place.
inline void write_file_atomic(const fs::path& path, std::string_view bytes) {
  if (!path.parent_path().empty()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::kIo, "cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) fail(ErrorKind::kIo, "write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

inline void emit(const std::string& output, std::string_view bytes, std::ostream& out) {
  if (output.empty()) {
    out << bytes;
  } else {
    write_file_atomic(output, bytes);
  }
}

inline std::vector<RdRecord> load_records(const fs::path& path) {
  return parse_rd_csv(read_file(path));
}

inline std::vector<QualityRange> parse_ranges(const std::string& text) {
  if (text == "all") return {kAllQualityRanges.begin(), kAllQualityRanges.end()};
  return {parse_quality_range(text)};
}

inline std::set<MetricId> parse_metrics(const std::vector<std::string>& names) {
  std::set<MetricId> out;
  for (const auto& n : names) out.insert(parse_metric(n));
  return out;
}

inline std::map<std::string, std::string> load_classes(const std::string& manifest,
                                                       const std::string& classes_csv) {
  std::map<std::string, std::string> classes;
  if (!manifest.empty()) {
    const RunManifest m = load_manifest(manifest);
    for (const auto& s : m.sequences) classes[s.info.name] = s.info.class_label;
  }
  if (!classes_csv.empty()) {
    const auto lines = internal::text_lines(read_file(classes_csv));
    for (std::size_t i = 1; i < lines.size(); ++i) {
      const auto f = internal::split_csv_line(lines[i]);
      if (f.size() != 2) fail(ErrorKind::kParse, "classes CSV rows need sequence,class");
      classes[f[0]] = f[1];
    }
  }
  return classes;
}

struct VideoArgs {
  int width = 0;
  int height = 0;
  int bit_depth = 8;
  std::string chroma = "420";
  std::int64_t fps_num = 30;
  std::int64_t fps_denom = 1;

  std::optional<VideoFormat> format() const {
    if (width <= 0 || height <= 0) return std::nullopt;
    return VideoFormat{width, height, bit_depth, parse_chroma_format(chroma), fps_num, fps_denom};
  }
};

inline void add_video_options(CLI::App* cmd, VideoArgs& v, const std::string& prefix = "") {
  cmd->add_option("--" + prefix + "width", v.width, "Frame width of raw input");
  cmd->add_option("--" + prefix + "height", v.height, "Frame height of raw input");
  cmd->add_option("--bit-depth", v.bit_depth, "Sample bit depth of raw input (8 or 10)")
      ->check(CLI::IsMember({8, 10}));
  cmd->add_option("--chroma", v.chroma, "Chroma format of raw input: 420, 422, 444, mono")
      ->check(CLI::IsMember({"420", "422", "444", "mono"}));
  cmd->add_option("--fps-num", v.fps_num, "Frame-rate numerator (Y4M output header)");
  cmd->add_option("--fps-denom", v.fps_denom, "Frame-rate denominator (Y4M output header)");
}

inline int cmd_bdrate(const std::string& anchor, const std::string& test,
                      const std::vector<std::string>& metrics, const std::string& range,
                      double luma_weight, const std::string& output, std::ostream& out) {
  EvaluationOptions options;
  options.ranges = parse_ranges(range);
  options.metrics = parse_metrics(metrics);
  options.weights = {luma_weight, (1.0 - luma_weight) / 2.0};
  const auto rows = evaluate_pair(load_records(anchor), load_records(test), options);
  emit(output, emit_evaluation_csv(rows), out);
  return kExitOk;
}

struct HullArgs {
  std::string anchor;
  std::string test;
  std::string sequence;
  std::string metric;
  std::string config = "AS";
  int intermediate = kDefaultIntermediatePoints;
  std::string csv_out;
  std::string test_csv_out;
  std::string output;
};

inline std::vector<RDCurve> series_curves(const std::vector<RdRecord>& records,
                                          const std::string& sequence, CodingConfig config,
                                          MetricId metric, const std::string& role) {
  std::vector<RDCurve> curves;
  for (auto& [key, curve] : curves_from_records(records)) {
    if (key.sequence == sequence && key.config == config && key.metric == metric) {
      curves.push_back(curve);
    }
  }
  if (curves.empty()) {
    fail(ErrorKind::kParse, role + " has no " + std::string(to_string(metric)) + " data for " +
                                sequence + " " + std::string(to_string(config)));
  }
  return curves;
}

inline int cmd_hull(const HullArgs& args, std::ostream& out) {
  const CodingConfig config = parse_coding_config(args.config);
  const MetricId metric = parse_metric(args.metric);
  const auto anchor_records = load_records(args.anchor);
  std::string sequence = args.sequence;
  if (sequence.empty()) {
    std::set<std::string> names;
    for (const auto& r : anchor_records) {
      if (r.config == config) names.insert(r.sequence);
    }
    if (names.size() != 1) {
      fail(ErrorKind::kArgument, "--sequence is required when the input holds " +
                                     std::to_string(names.size()) + " sequences");
    }
    sequence = *names.begin();
  }

  std::vector<HullPoint> anchor_pool;
  const auto anchor_curves = series_curves(anchor_records, sequence, config, metric, "anchor");
  const ConvexHull anchor_hull = build_hull(anchor_curves, args.intermediate, &anchor_pool);
  std::string report = "role,sequence,metric,range,resolutions,candidates,hull_points,bdrate\n";
  report += fmt::format("anchor,{},{},,{},{},{},\n", sequence, to_string(metric),
                        anchor_curves.size(), anchor_pool.size(), anchor_hull.points.size());
  if (!args.csv_out.empty()) {
    write_file_atomic(args.csv_out, emit_hull_csv(anchor_pool, anchor_hull));
  }
  if (!args.test.empty()) {
    std::vector<HullPoint> test_pool;
    const auto test_curves =
        series_curves(load_records(args.test), sequence, config, metric, "test");
    const ConvexHull test_hull = build_hull(test_curves, args.intermediate, &test_pool);
    report += fmt::format("test,{},{},,{},{},{},\n", sequence, to_string(metric),
                          test_curves.size(), test_pool.size(), test_hull.points.size());
    if (!args.test_csv_out.empty()) {
      write_file_atomic(args.test_csv_out, emit_hull_csv(test_pool, test_hull));
    }
    for (QualityRange range : kAllQualityRanges) {
      const BdRateResult r = hull_bd_rate(anchor_hull, test_hull, range, qp_set_for(config));
      report += fmt::format("bdrate,{},{},{},,,,{:.10f}\n", sequence, to_string(metric),
                            to_string(range), r.value);
    }
  }
  emit(args.output, report, out);
  return kExitOk;
}

inline int cmd_psnr(const std::string& ref, const std::string& dist, const VideoArgs& video,
                    double cap, const std::string& siting, const std::string& output,
                    std::ostream& out) {
  VideoReader ref_reader(ref, video.format());
  VideoReader dist_reader(dist, video.format());
  const VideoFormat& rf = ref_reader.format();
  const VideoFormat& df = dist_reader.format();
  if (rf.width != df.width || rf.height != df.height || rf.chroma != df.chroma ||
      rf.bit_depth != df.bit_depth) {
    fail(ErrorKind::kArgument, "reference and distorted videos have different formats");
  }
  const ChromaSiting s = parse_chroma_siting(siting);
  PsnrPool pool(rf.chroma);
  std::string csv = "frame,PSNR_Y,PSNR_U,PSNR_V,PSNR_YUV\n";
  for (int i = 0;; ++i) {
    auto a = ref_reader.next();
    auto b = dist_reader.next();
    if (!a && !b) break;
    if (!a || !b) fail(ErrorKind::kArgument, "reference and distorted frame counts differ");
    a->siting = b->siting = s;
    const PsnrTriple p = psnr_frame(*a, *b, cap);
    pool.add(p);
    csv += fmt::format("{},{:.6f},{:.6f},{:.6f},{:.6f}\n", i, p.y_db, p.u_db, p.v_db,
                       p.weighted_db);
  }
  const PsnrTriple m = pool.mean();
  csv += fmt::format("mean,{:.6f},{:.6f},{:.6f},{:.6f}\n", m.y_db, m.u_db, m.v_db, m.weighted_db);
  emit(output, csv, out);
  return kExitOk;
}

struct ResampleArgs {
  std::string input;
  std::string output;
  int width = 0;
  int height = 0;
  VideoArgs source;
  std::string siting = "type0";
  std::string bank_csv;
  int frames = 0;
};

inline int cmd_resample(const ResampleArgs& args) {
  VideoReader reader(args.input, args.source.format());
  VideoFormat out_format = reader.format();
  out_format.width = args.width;
  out_format.height = args.height;
  const ChromaSiting siting = parse_chroma_siting(args.siting);
  if (!args.bank_csv.empty()) {
    write_file_atomic(args.bank_csv,
                      filter_bank_csv(build_filter_bank({reader.format().width, args.width})));
  }
  const fs::path tmp = staging_path(args.output);
  {
    VideoWriter writer(tmp, out_format);
    int n = 0;
    while (auto frame = reader.next()) {
      if (args.frames > 0 && n >= args.frames) break;
      frame->siting = siting;
      writer.write(resample_frame(*frame, {args.width, args.height}));
      ++n;
    }
  }
  fs::rename(tmp, args.output);
  return kExitOk;
}

struct RunArgs {
  std::string manifest;
  bool dry_run = false;
  bool force = false;
  bool collect_only = false;
  bool no_check_inputs = false;
  int parallelism = 0;
  std::string output_dir;
  std::string results_dir;
  std::string output;
};

inline int cmd_run(const RunArgs& args, std::ostream& out, std::ostream& err) {
  RunManifest manifest = load_manifest(args.manifest);
  if (!args.output_dir.empty()) manifest.output_dir = args.output_dir;
  if (args.parallelism > 0) manifest.parallelism = args.parallelism;
  validate_manifest(manifest, !(args.no_check_inputs || args.dry_run || args.collect_only));
  const std::vector<JobSpec> jobs = plan_jobs(manifest);
  if (args.dry_run) {
    emit(args.output, dry_run_listing(jobs), out);
    return kExitOk;
  }

  std::vector<JobResult> results;
  if (args.collect_only) {
    for (const JobSpec& job : jobs) {
      if (!outputs_complete(job)) fail(ErrorKind::kIo, job.id + ": outputs missing");
      JobResult r;
      r.job_id = job.id;
      r.status = JobStatus::kSkipped;
      r.exit_code = 0;
      r.bitstream_bytes = fs::file_size(job.bitstream);
      r.metric_log = job.metric_log;
      results.push_back(std::move(r));
    }
  } else {
    ExecuteOptions options;
    options.parallelism = manifest.parallelism;
    options.force = args.force;
    options.ledger = manifest.output_dir / "jobs.ledger";
    results = execute(jobs, options);
  }

  int succeeded = 0, skipped = 0, failed = 0;
  for (const JobResult& r : results) {
    if (r.status == JobStatus::kSuccess) ++succeeded;
    if (r.status == JobStatus::kSkipped) ++skipped;
    if (r.status == JobStatus::kFailed) {
      ++failed;
      err << r.job_id << ": " << r.message << '\n';
    }
  }
  out << fmt::format("{} jobs: {} executed, {} skipped, {} failed\n", results.size(), succeeded,
                     skipped, failed);

  const fs::path results_dir =
      args.results_dir.empty() ? manifest.output_dir / "results" : fs::path(args.results_dir);
  for (const auto& [codec, records] : collect(results, jobs)) {
    write_file_atomic(results_dir / (codec + ".csv"), emit_rd_csv(records));
  }
  return failed == 0 ? kExitOk : kExitFailure;
}

inline int cmd_report(const std::string& anchor, const std::string& test,
                      const std::string& manifest, const std::string& classes_csv,
                      const std::string& format, const std::string& output, std::ostream& out) {
  if (manifest.empty() && classes_csv.empty()) {
    fail(ErrorKind::kArgument, "report needs --manifest or --classes for class labels");
  }
  const auto classes = load_classes(manifest, classes_csv);
  EvaluationOptions options;
  options.ranges = {QualityRange::kFull};
  options.metrics = {kReportMetrics.begin(), kReportMetrics.end()};
  const auto rows = evaluate_pair(load_records(anchor), load_records(test), options);
  const ReportTable table = build_ctc_report(report_entries(rows, classes));
  emit(output, emit_report(table, format == "csv" ? ReportFormat::kCsv : ReportFormat::kMarkdown),
       out);
  return kExitOk;
}

inline int cmd_progress(const std::vector<std::string>& tables, const std::string& output,
                        std::ostream& out) {
  std::vector<std::pair<std::string, ReportTable>> history;
  for (const auto& spec : tables) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) {
      fail(ErrorKind::kArgument, "--table expects VERSION=PATH, got '" + spec + "'");
    }
    history.emplace_back(spec.substr(0, eq), parse_report_csv(read_file(spec.substr(eq + 1))));
  }
  emit(output, emit_progress_series(history), out);
  return kExitOk;
}

/// Builds the full command tree. Exposed so tests can inspect option docs.
struct Program {
  CLI::App app{"ctceval: codec evaluation toolkit (BD-rate, convex hull, PSNR, resampling, "
               "batch runs and CTC report tables)",
               "ctceval"};
  std::string anchor, test, output, range = "all", manifest, classes, format = "markdown";
  std::vector<std::string> metrics, tables;
  double luma_weight = 0.92;
  HullArgs hull;
  std::string ref, dist, siting = "type0";
  double cap = kDefaultPsnrCap;
  VideoArgs video;
  ResampleArgs resample;
  RunArgs run;
  std::vector<CLI::App*> subcommands;

  Program() {
    app.require_subcommand(1);
    app.set_version_flag("--version", "ctceval 1.0.0");

    auto* bd = app.add_subcommand("bdrate", "BD-rate of a test RD table against an anchor");
    bd->add_option("--anchor", anchor, "Anchor RD CSV")->required()->check(CLI::ExistingFile);
    bd->add_option("--test", test, "Test RD CSV")->required()->check(CLI::ExistingFile);
    bd->add_option("--metric", metrics, "Restrict to these metrics (repeatable)");
    bd->add_option("--range", range, "Quality range: full, low, mid, high or all")
        ->check(CLI::IsMember({"all", "full", "low", "mid", "high"}));
    bd->add_option("--luma-weight", luma_weight,
                   "Luma weight A of the weighted BD-rate; chroma planes get (1-A)/2 each");
    bd->add_option("-o,--output", output, "Write the result CSV here instead of stdout");

    auto* hl = app.add_subcommand("hull", "Multi-resolution convex hull and hull BD-rate");
    hl->add_option("--anchor", hull.anchor, "Anchor RD CSV (all resolutions)")
        ->required()->check(CLI::ExistingFile);
    hl->add_option("--test", hull.test, "Test RD CSV; enables hull BD-rate rows")
        ->check(CLI::ExistingFile);
    hl->add_option("--sequence", hull.sequence, "Sequence to analyse (optional if unique)");
    hl->add_option("--metric", hull.metric, "Metric the hull is built on")->required();
    hl->add_option("--config", hull.config, "Coding config tag of the series (default AS)");
    hl->add_option("--intermediate", hull.intermediate,
                   "Log-rate points inserted between adjacent QPs")
        ->check(CLI::NonNegativeNumber);
    hl->add_option("--csv-out", hull.csv_out, "Write anchor hull plot data CSV");
    hl->add_option("--test-csv-out", hull.test_csv_out, "Write test hull plot data CSV");
    hl->add_option("-o,--output", hull.output, "Write the summary CSV here instead of stdout");

    auto* ps = app.add_subcommand("psnr", "Per-frame and pooled weighted PSNR of two videos");
    ps->add_option("--ref", ref, "Reference video (.yuv or .y4m)")
        ->required()->check(CLI::ExistingFile);
    ps->add_option("--dist", dist, "Distorted video (.yuv or .y4m)")
        ->required()->check(CLI::ExistingFile);
    add_video_options(ps, video);
    ps->add_option("--cap", cap, "PSNR reported for identical planes, in dB");
    ps->add_option("--siting", siting, "Chroma siting: type0, type2 or jpeg")
        ->check(CLI::IsMember({"type0", "type2", "jpeg"}));
    ps->add_option("-o,--output", output, "Write the metric CSV here instead of stdout");

    auto* rs = app.add_subcommand("resample", "Lanczos-5 resampling of a raw or Y4M video");
    rs->add_option("--input", resample.input, "Input video")->required()->check(CLI::ExistingFile);
    rs->add_option("--output", resample.output, "Output video (.yuv or .y4m)")->required();
    rs->add_option("--width", resample.width, "Target width")->required()
        ->check(CLI::PositiveNumber);
    rs->add_option("--height", resample.height, "Target height")->required()
        ->check(CLI::PositiveNumber);
    add_video_options(rs, resample.source, "src-");
    rs->add_option("--siting", resample.siting, "Chroma siting: type0, type2 or jpeg")
        ->check(CLI::IsMember({"type0", "type2", "jpeg"}));
    rs->add_option("--frames", resample.frames, "Resample at most this many frames")
        ->check(CLI::NonNegativeNumber);
    rs->add_option("--bank-csv", resample.bank_csv,
                   "Also write the horizontal filter bank as CSV");

    auto* rn = app.add_subcommand("run", "Plan, execute and collect a manifest campaign");
    rn->add_option("--manifest", run.manifest, "Run manifest (JSON)")
        ->required()->check(CLI::ExistingFile);
    auto* dry = rn->add_flag("--dry-run", run.dry_run, "Print the planned commands and exit");
    auto* collect_only = rn->add_flag("--collect-only", run.collect_only,
                                      "Skip execution; collect existing outputs");
    dry->excludes(collect_only);
    rn->add_flag("--force", run.force, "Re-run jobs whose outputs already exist")
        ->excludes(collect_only);
    rn->add_flag("--no-check-inputs", run.no_check_inputs,
                 "Do not require sequence source files to exist");
    rn->add_option("-j,--parallelism", run.parallelism,
                   "Maximum concurrent jobs (overrides manifest)")
        ->check(CLI::PositiveNumber);
    rn->add_option("--output-dir", run.output_dir, "Output directory (overrides manifest)");
    rn->add_option("--results-dir", run.results_dir,
                   "Where per-codec RD CSVs go (default OUTPUT_DIR/results)");
    rn->add_option("-o,--output", run.output, "Write the dry-run listing here");

    auto* rp = app.add_subcommand("report", "Class-wise BD-rate table in the CTC layout");
    rp->add_option("--anchor", anchor, "Anchor RD CSV")->required()->check(CLI::ExistingFile);
    rp->add_option("--test", test, "Test RD CSV")->required()->check(CLI::ExistingFile);
    rp->add_option("--manifest", manifest, "Manifest supplying sequence class labels")
        ->check(CLI::ExistingFile);
    rp->add_option("--classes", classes, "CSV (sequence,class) supplying class labels")
        ->check(CLI::ExistingFile);
    rp->add_option("--format", format, "Output format: markdown or csv")
        ->check(CLI::IsMember({"markdown", "csv"}));
    rp->add_option("-o,--output", output, "Write the report here instead of stdout");

    auto* pg = app.add_subcommand("progress", "Long-format BD-rate series across releases");
    pg->add_option("--table", tables, "VERSION=REPORT_CSV (repeatable, report --format csv)")
        ->required();
    pg->add_option("-o,--output", output, "Write the series CSV here instead of stdout");

    subcommands = {bd, hl, ps, rs, rn, rp, pg};
  }

  int dispatch(std::ostream& out, std::ostream& err) {
    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "bdrate") return cmd_bdrate(anchor, test, metrics, range, luma_weight, output, out);
    if (name == "hull") return cmd_hull(hull, out);
    if (name == "psnr") return cmd_psnr(ref, dist, video, cap, siting, output, out);
    if (name == "resample") return cmd_resample(resample);
    if (name == "run") return cmd_run(run, out, err);
    if (name == "report") return cmd_report(anchor, test, manifest, classes, format, output, out);
    if (name == "progress") return cmd_progress(tables, output, out);
    return kExitParse;
  }
};

/// Entry point. Exit codes: 0 ok, 1 runtime failure, 2 usage or parse
/// error, 3 no quality overlap, 4 curve unusable after exclusion.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Program program;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    program.app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << program.app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << program.app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << program.app.version() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    for (CLI::App* sub : program.subcommands) {
      if (sub->parsed()) {
        err << sub->help();
        return kExitParse;
      }
    }
    err << program.app.help();
    return kExitParse;
  }
  try {
    return program.dispatch(out, err);
  } catch (const Error& e) {
    err << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace ctceval::cli

#endif  // CTCEVAL_CLI_HPP_
