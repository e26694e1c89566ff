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

// Campaign orchestration: expands a run manifest into CTC-conformant encoder,
// decoder and metric jobs, runs them with bounded parallelism and turns the
// produced bitstreams and metric logs into RD records.

#ifndef CTCEVAL_RUNNER_HPP_
#define CTCEVAL_RUNNER_HPP_

#include <fcntl.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <fmt/format.h>
#include <json.hpp>

#include "ctceval/core_model.hpp"
#include "ctceval/error.hpp"
#include "ctceval/ingest_report.hpp"
#include "ctceval/metrics_io.hpp"
#include "ctceval/resampler.hpp"

extern char** environ;

namespace ctceval {

namespace fs = std::filesystem;

struct CodecTemplates {
  std::string name;
  std::vector<std::string> encode;
  std::vector<std::string> decode;   // optional
  std::vector<std::string> metrics;  // optional
};

struct ManifestSequence {
  SequenceInfo info;
  fs::path path;
  bool still_image = false;
  std::vector<CodingConfig> configs;  // empty: the manifest-wide list
};

struct RunManifest {
  std::vector<CodecTemplates> codecs;
  std::vector<ManifestSequence> sequences;
  std::vector<CodingConfig> configs;
  std::map<CodingConfig, QpSet> qp_overrides;
  LadderOverrides as_ladders;
  std::map<CodingConfig, std::map<Resolution, int>> tiles;
  fs::path output_dir = "ctc-out";
  int parallelism = 1;

  QpSet qps_for(CodingConfig config) const {
    if (auto it = qp_overrides.find(config); it != qp_overrides.end()) return it->second;
    return qp_set_for(config);
  }

  int tiles_for(CodingConfig config, Resolution r) const {
    if (auto c = tiles.find(config); c != tiles.end()) {
      if (auto t = c->second.find(r); t != c->second.end()) return t->second;
    }
    return 1;
  }
};

inline constexpr std::array<std::string_view, 5> kRequiredEncodePlaceholders = {
    "{input}", "{output}", "{qp}", "{width}", "{height}"};

inline void validate_manifest(const RunManifest& m, bool check_files = true) {
  if (m.codecs.empty()) fail(ErrorKind::kConfig, "manifest lists no codecs");
  if (m.sequences.empty()) fail(ErrorKind::kConfig, "manifest lists no sequences");
  const bool per_sequence = std::all_of(m.sequences.begin(), m.sequences.end(),
                                        [](const ManifestSequence& s) { return !s.configs.empty(); });
  if (m.configs.empty() && !per_sequence) {
    fail(ErrorKind::kConfig, "manifest lists no configs");
  }
  if (m.parallelism < 1) fail(ErrorKind::kConfig, "parallelism must be at least 1");
  std::set<std::string> names;
  for (const CodecTemplates& c : m.codecs) {
    if (c.name.empty() || !names.insert(c.name).second) {
      fail(ErrorKind::kConfig, "codec names must be unique and non-empty");
    }
    if (c.encode.empty()) fail(ErrorKind::kConfig, c.name + ": encode template is empty");
    std::string joined;
    for (const auto& a : c.encode) joined += a + " ";
    for (std::string_view ph : kRequiredEncodePlaceholders) {
      if (joined.find(ph) == std::string::npos) {
        fail(ErrorKind::kConfig,
             c.name + ": encode template lacks placeholder " + std::string(ph));
      }
    }
  }
  names.clear();
  for (const ManifestSequence& s : m.sequences) {
    s.info.validate();
    if (!names.insert(s.info.name).second) {
      fail(ErrorKind::kConfig, "duplicate sequence " + s.info.name);
    }
    if (check_files && !fs::exists(s.path)) {
      fail(ErrorKind::kConfig, s.info.name + ": source file " + s.path.string() + " not found");
    }
  }
}

namespace internal {

inline std::vector<std::string> json_strings(const nlohmann::json& j, const std::string& what) {
  if (!j.is_array()) fail(ErrorKind::kConfig, what + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& v : j) {
    if (!v.is_string()) fail(ErrorKind::kConfig, what + " must be an array of strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

}  // namespace internal

/// Reads a JSON run manifest. Relative sequence paths and the output
/// directory resolve against `base_dir`.
inline RunManifest parse_manifest(std::string_view text, const fs::path& base_dir = ".") {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kParse, std::string("manifest is not valid JSON: ") + e.what());
  }
  RunManifest m;
  try {
    for (const auto& c : doc.at("codecs")) {
      CodecTemplates t;
      t.name = c.at("name").get<std::string>();
      t.encode = internal::json_strings(c.at("encode"), t.name + ".encode");
      if (c.contains("decode")) t.decode = internal::json_strings(c["decode"], t.name + ".decode");
      if (c.contains("metrics")) {
        t.metrics = internal::json_strings(c["metrics"], t.name + ".metrics");
      }
      m.codecs.push_back(std::move(t));
    }
    for (const auto& s : doc.at("sequences")) {
      ManifestSequence seq;
      SequenceInfo& info = seq.info;
      info.name = s.at("name").get<std::string>();
      info.class_label = s.at("class").get<std::string>();
      info.width = s.at("width").get<int>();
      info.height = s.at("height").get<int>();
      info.bit_depth = s.value("bit_depth", 8);
      info.chroma = parse_chroma_format(s.value("chroma", std::string("420")));
      info.fps_num = s.value("fps_num", std::int64_t{30});
      info.fps_denom = s.value("fps_denom", std::int64_t{1});
      info.frame_count = s.value("frame_count", 130);
      info.hdr = s.value("hdr", false);
      seq.still_image = s.value("still", info.class_label == "F");
      info.siting = s.contains("siting")
                        ? parse_chroma_siting(s["siting"].get<std::string>())
                        : siting_for(info.hdr, seq.still_image);
      if (s.contains("configs")) {
        for (const auto& c : s["configs"]) {
          seq.configs.push_back(parse_coding_config(c.get<std::string>()));
        }
      }
      seq.path = s.at("path").get<std::string>();
      if (seq.path.is_relative()) seq.path = base_dir / seq.path;
      m.sequences.push_back(std::move(seq));
    }
    if (doc.contains("configs")) {
      for (const auto& c : doc["configs"]) m.configs.push_back(parse_coding_config(c.get<std::string>()));
    }
    if (doc.contains("qp_overrides")) {
      for (const auto& [cfg, qps] : doc["qp_overrides"].items()) {
        m.qp_overrides.emplace(parse_coding_config(cfg), QpSet::from_vector(qps.get<std::vector<int>>()));
      }
    }
    if (doc.contains("as_ladders")) {
      for (const auto& [src, rungs] : doc["as_ladders"].items()) {
        std::vector<Resolution> ladder;
        for (const auto& r : rungs) ladder.push_back(parse_resolution(r.get<std::string>()));
        m.as_ladders[parse_resolution(src)] = std::move(ladder);
      }
    }
    if (doc.contains("tiles")) {
      for (const auto& [cfg, table] : doc["tiles"].items()) {
        auto& per = m.tiles[parse_coding_config(cfg)];
        for (const auto& [res, n] : table.items()) per[parse_resolution(res)] = n.get<int>();
      }
    }
    m.output_dir = doc.value("output_dir", std::string("ctc-out"));
    if (m.output_dir.is_relative()) m.output_dir = base_dir / m.output_dir;
    m.parallelism = doc.value("parallelism", 1);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kConfig, std::string("manifest: ") + e.what());
  }
  return m;
}

inline RunManifest load_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kIo, "cannot open manifest " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_manifest(ss.str(), path.parent_path().empty() ? fs::path(".") : path.parent_path());
}

// In-process resampling step (AS ladder inputs and upscaled reconstructions).
struct ResizeTask {
  fs::path input;
  fs::path output;
  VideoFormat input_format;
  Resolution target;
  ChromaSiting siting = ChromaSiting::kType0Vertical;
  int max_frames = 0;  // 0: all
};

struct JobStep {
  std::string name;
  std::vector<std::string> argv;     // external command
  std::optional<ResizeTask> resize;  // or internal resample
};

struct JobSpec {
  std::string id;
  std::string codec;
  SequenceInfo sequence;
  CodingConfig config = CodingConfig::kRandomAccess;
  int qp = 0;
  Resolution resolution;  // coded resolution (ladder rung for AS)
  int frames = 0;
  int tiles = 1;
  std::optional<ResizeTask> prepare;  // builds the rung input for AS jobs
  std::vector<JobStep> steps;
  fs::path bitstream;
  fs::path recon;
  fs::path metric_log;  // empty when the codec has no metrics template
  fs::path stdout_log;
};

namespace internal {

inline std::string substitute(const std::string& arg,
                              const std::map<std::string, std::string>& vars,
                              const std::string& job_id) {
  std::string out;
  std::size_t pos = 0;
  while (pos < arg.size()) {
    const std::size_t open = arg.find_first_of("{}", pos);
    if (open == std::string::npos) {
      out += arg.substr(pos);
      break;
    }
    out += arg.substr(pos, open - pos);
    // "{{" and "}}" are literal braces; a lone "}" passes through.
    if (open + 1 < arg.size() && arg[open + 1] == arg[open]) {
      out += arg[open];
      pos = open + 2;
      continue;
    }
    if (arg[open] == '}') {
      out += '}';
      pos = open + 1;
      continue;
    }
    const std::size_t close = arg.find('}', open);
    if (close == std::string::npos) {
      fail(ErrorKind::kConfig, job_id + ": unterminated placeholder in '" + arg + "'");
    }
    const std::string key = arg.substr(open + 1, close - open - 1);
    auto it = vars.find(key);
    if (it == vars.end()) {
      fail(ErrorKind::kConfig, job_id + ": unresolved placeholder {" + key + "}");
    }
    out += it->second;
    pos = close + 1;
  }
  return out;
}

inline std::vector<std::string> expand(const std::vector<std::string>& tmpl,
                                       const std::map<std::string, std::string>& vars,
                                       const std::string& job_id) {
  std::vector<std::string> out;
  out.reserve(tmpl.size());
  for (const auto& a : tmpl) out.push_back(substitute(a, vars, job_id));
  return out;
}

}  // namespace internal

/// Expands codecs x sequences x configs x ladder rungs x QPs in manifest
/// order. AS jobs add the downscaled rungs after the source resolution.
inline std::vector<JobSpec> plan_jobs(const RunManifest& m) {
  std::vector<JobSpec> jobs;
  for (const CodecTemplates& codec : m.codecs) {
    for (const ManifestSequence& seq : m.sequences) {
      const SequenceInfo& info = seq.info;
      for (CodingConfig config : seq.configs.empty() ? m.configs : seq.configs) {
        const int frames = frame_count_for(config, info.class_label, info.is_ecf());
        std::vector<Resolution> rungs = {info.resolution()};
        if (config == CodingConfig::kAdaptiveStreaming) {
          for (Resolution r : as_ladder_for(info.resolution(), m.as_ladders)) rungs.push_back(r);
        }
        for (Resolution rung : rungs) {
          const bool scaled = rung != info.resolution();
          const fs::path input =
              scaled ? m.output_dir / "scaled" / (info.name + "_" + to_string(rung) + ".yuv")
                     : seq.path;
          for (int qp : m.qps_for(config).values()) {
            JobSpec job;
            job.codec = codec.name;
            job.sequence = info;
            job.config = config;
            job.qp = qp;
            job.resolution = rung;
            job.frames = frames;
            job.tiles = m.tiles_for(config, rung);
            const std::string stem =
                info.name + "_" + to_string(rung) + "_qp" + std::to_string(qp);
            const fs::path dir =
                m.output_dir / codec.name / std::string(to_string(config)) / info.name;
            job.id = codec.name + "/" + std::string(to_string(config)) + "/" + info.name +
                     "/" + to_string(rung) + "/qp" + std::to_string(qp);
            job.bitstream = dir / (stem + ".obu");
            job.recon = dir / (stem + ".yuv");
            job.stdout_log = dir / (stem + ".log");
            const fs::path recon_full = scaled ? dir / (stem + "_up.yuv") : job.recon;
            if (!codec.metrics.empty()) job.metric_log = dir / (stem + ".json");

            if (scaled) {
              VideoFormat src_format = VideoFormat::from(info);
              job.prepare = ResizeTask{seq.path, input, src_format, rung, info.siting, frames};
            }

            const std::map<std::string, std::string> vars = {
                {"input", input.string()},
                {"output", job.bitstream.string()},
                {"bitstream", job.bitstream.string()},
                {"recon", job.recon.string()},
                {"recon_full", recon_full.string()},
                {"reference", seq.path.string()},
                {"log", job.metric_log.string()},
                {"qp", std::to_string(qp)},
                {"width", std::to_string(rung.width)},
                {"height", std::to_string(rung.height)},
                {"src_width", std::to_string(info.width)},
                {"src_height", std::to_string(info.height)},
                {"frames", std::to_string(frames)},
                {"fps_num", std::to_string(info.fps_num)},
                {"fps_denom", std::to_string(info.fps_denom)},
                {"bit_depth", std::to_string(info.bit_depth)},
                {"chroma", std::string(to_string(info.chroma))},
                {"tiles", std::to_string(job.tiles)},
                {"config", std::string(to_string(config))},
                {"sequence", info.name},
                {"codec", codec.name},
            };
            job.steps.push_back({"encode", internal::expand(codec.encode, vars, job.id), {}});
            if (!codec.decode.empty()) {
              job.steps.push_back({"decode", internal::expand(codec.decode, vars, job.id), {}});
            }
            if (scaled && !codec.decode.empty()) {
              VideoFormat rung_format = VideoFormat::from(info);
              rung_format.width = rung.width;
              rung_format.height = rung.height;
              job.steps.push_back({"upscale", {},
                                   ResizeTask{job.recon, recon_full, rung_format,
                                              info.resolution(), info.siting, 0}});
            }
            if (!codec.metrics.empty()) {
              job.steps.push_back({"metrics", internal::expand(codec.metrics, vars, job.id), {}});
            }
            jobs.push_back(std::move(job));
          }
        }
      }
    }
  }
  return jobs;
}

inline std::string shell_quote(const std::string& arg) {
  if (!arg.empty() && arg.find_first_of(" \t\n'\"\\$`*?;&|<>(){}[]!#~") == std::string::npos) {
    return arg;
  }
  std::string out = "'";
  for (char c : arg) {
    if (c == '\'') out += "'\\''";
    else out += c;
  }
  return out + "'";
}

inline std::string describe_step(const JobStep& step) {
  if (step.resize) {
    return "[internal] resample " + shell_quote(step.resize->input.string()) + " -> " +
           shell_quote(step.resize->output.string()) + " " + to_string(step.resize->target);
  }
  std::string line;
  for (const auto& a : step.argv) line += (line.empty() ? "" : " ") + shell_quote(a);
  return line;
}

/// One line per step, tab-separated: job id, step name, command.
inline std::string dry_run_listing(const std::vector<JobSpec>& jobs) {
  std::string out;
  for (const JobSpec& job : jobs) {
    if (job.prepare) {
      out += job.id + "\tprepare\t" + describe_step({"prepare", {}, job.prepare}) + "\n";
    }
    for (const JobStep& s : job.steps) out += job.id + "\t" + s.name + "\t" + describe_step(s) + "\n";
  }
  return out;
}

// Temp sibling that keeps the extension, so writers still pick the container.
inline fs::path staging_path(const fs::path& path) {
  return path.parent_path() / (path.stem().string() + ".tmp" + path.extension().string());
}

inline void run_resize(const ResizeTask& task) {
  VideoReader reader(task.input, task.input_format);
  VideoFormat out_format = task.input_format;
  out_format.width = task.target.width;
  out_format.height = task.target.height;
  if (!task.output.parent_path().empty()) fs::create_directories(task.output.parent_path());
  const fs::path tmp = staging_path(task.output);
  {
    VideoWriter writer(tmp, out_format);
    int n = 0;
    while (auto frame = reader.next()) {
      if (task.max_frames > 0 && n >= task.max_frames) break;
      frame->siting = task.siting;
      writer.write(resample_frame(*frame, task.target));
      ++n;
    }
  }
  fs::rename(tmp, task.output);
}

enum class JobStatus { kSuccess, kFailed, kSkipped };

inline std::string_view to_string(JobStatus s) {
  switch (s) {
    case JobStatus::kSuccess: return "success";
    case JobStatus::kFailed: return "failed";
    case JobStatus::kSkipped: return "skipped";
  }
  return "?";
}

struct JobResult {
  std::string job_id;
  JobStatus status = JobStatus::kFailed;
  int exit_code = -1;
  double wall_seconds = 0.0;
  std::optional<std::uint64_t> bitstream_bytes;  // present iff usable
  std::string message;
  fs::path stdout_log;
  fs::path metric_log;

  bool ok() const { return status != JobStatus::kFailed; }
};

// Spawns argv with the parent's environment; stdout and stderr append to
// `log_path`. Returns the exit status (128 + signal when killed).
inline int spawn_and_wait(const std::vector<std::string>& argv, const fs::path& log_path) {
  if (argv.empty()) fail(ErrorKind::kArgument, "empty command");
  std::vector<char*> cargv;
  for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
  cargv.push_back(nullptr);

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  const std::string log = log_path.string();
  posix_spawn_file_actions_addopen(&actions, STDOUT_FILENO, log.c_str(),
                                   O_WRONLY | O_CREAT | O_APPEND, 0644);
  posix_spawn_file_actions_adddup2(&actions, STDOUT_FILENO, STDERR_FILENO);
  pid_t pid = 0;
  const int rc = posix_spawnp(&pid, cargv[0], &actions, nullptr, cargv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  if (rc != 0) {
    fail(ErrorKind::kIo, "cannot spawn '" + argv[0] + "': " + std::strerror(rc));
  }
  int status = 0;
  while (waitpid(pid, &status, 0) < 0) {
    if (errno != EINTR) fail(ErrorKind::kIo, "waitpid failed");
  }
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  if (WIFSIGNALED(status)) return 128 + WTERMSIG(status);
  return -1;
}

struct ExecuteOptions {
  int parallelism = 1;
  bool force = false;   // re-run jobs whose outputs already exist
  fs::path ledger;      // empty: no ledger
};

inline bool outputs_complete(const JobSpec& job) {
  std::error_code ec;
  const auto size = fs::file_size(job.bitstream, ec);
  if (ec || size == 0) return false;
  if (!job.metric_log.empty()) {
    const auto log_size = fs::file_size(job.metric_log, ec);
    if (ec || log_size == 0) return false;
  }
  return true;
}

inline JobResult run_job(const JobSpec& job) {
  JobResult result;
  result.job_id = job.id;
  result.stdout_log = job.stdout_log;
  result.metric_log = job.metric_log;
  const auto start = std::chrono::steady_clock::now();
  try {
    fs::create_directories(job.bitstream.parent_path());
    result.exit_code = 0;
    for (const JobStep& step : job.steps) {
      if (step.resize) {
        run_resize(*step.resize);
        continue;
      }
      const int code = spawn_and_wait(step.argv, job.stdout_log);
      if (code != 0) {
        result.exit_code = code;
        result.message = step.name + " exited with status " + std::to_string(code);
        break;
      }
    }
  } catch (const std::exception& e) {
    result.exit_code = -1;
    result.message = e.what();
  }
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (result.exit_code == 0) {
    std::error_code ec;
    const auto size = fs::file_size(job.bitstream, ec);
    if (ec || size == 0) {
      result.message = ec ? "bitstream missing" : "bitstream is empty";
    } else {
      result.status = JobStatus::kSuccess;
      result.bitstream_bytes = size;
    }
  }
  return result;
}

/// Runs jobs on `parallelism` workers; each worker executes one job's steps
/// sequentially, so at most `parallelism` child processes are alive at once.
/// Failures are recorded, never thrown. Results come back in job order.
inline std::vector<JobResult> execute(const std::vector<JobSpec>& jobs,
                                      const ExecuteOptions& options) {
  if (options.parallelism < 1) fail(ErrorKind::kArgument, "parallelism must be at least 1");
  std::vector<JobResult> results(jobs.size());

  // Shared rung inputs are prepared once, before any encoder runs.
  std::set<fs::path> prepared;
  for (const JobSpec& job : jobs) {
    if (!job.prepare || (!options.force && outputs_complete(job))) continue;
    if (!prepared.insert(job.prepare->output).second) continue;
    if (!options.force && fs::exists(job.prepare->output)) continue;
    run_resize(*job.prepare);
  }

  std::mutex ledger_mutex;
  std::ofstream ledger;
  if (!options.ledger.empty()) {
    if (!options.ledger.parent_path().empty()) fs::create_directories(options.ledger.parent_path());
    ledger.open(options.ledger, std::ios::app);
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const JobSpec& job = jobs[i];
      JobResult r;
      if (!options.force && outputs_complete(job)) {
        r.job_id = job.id;
        r.status = JobStatus::kSkipped;
        r.exit_code = 0;
        r.bitstream_bytes = fs::file_size(job.bitstream);
        r.stdout_log = job.stdout_log;
        r.metric_log = job.metric_log;
      } else {
        r = run_job(job);
      }
      if (ledger.is_open()) {
        std::lock_guard lock(ledger_mutex);
        ledger << fmt::format("{}\t{}\t{}\t{:.3f}\t{}\n", r.job_id, to_string(r.status),
                              r.exit_code, r.wall_seconds,
                              r.bitstream_bytes ? std::to_string(*r.bitstream_bytes) : "-");
        ledger.flush();
      }
      results[i] = std::move(r);
    }
  };
  const int n = std::min<int>(options.parallelism, static_cast<int>(std::max<std::size_t>(jobs.size(), 1)));
  std::vector<std::jthread> pool;
  for (int t = 0; t < n; ++t) pool.emplace_back(worker);
  pool.clear();
  return results;
}

/// Reads each successful job's bitstream size and metric log into RD
/// records, grouped by codec name. Record order follows job order.
inline std::map<std::string, std::vector<RdRecord>> collect(
    const std::vector<JobResult>& results, const std::vector<JobSpec>& jobs,
    const IngestOptions& ingest = {}) {
  if (results.size() != jobs.size()) {
    fail(ErrorKind::kArgument, "collect: results do not match the job list");
  }
  std::map<std::string, std::vector<RdRecord>> out;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const JobSpec& job = jobs[i];
    const JobResult& r = results[i];
    if (r.job_id != job.id) fail(ErrorKind::kArgument, "collect: result order mismatch");
    if (!r.ok()) continue;
    if (!r.bitstream_bytes || *r.bitstream_bytes == 0) {
      fail(ErrorKind::kIo, job.id + ": empty bitstream");
    }
    if (job.metric_log.empty()) {
      fail(ErrorKind::kConfig, job.id + ": codec has no metrics template");
    }
    std::ifstream in(job.metric_log);
    if (!in) fail(ErrorKind::kIo, job.id + ": metric log " + job.metric_log.string() + " missing");
    std::stringstream ss;
    ss << in.rdbuf();
    const MetricLog log = parse_metric_log(ss.str(), job.sequence.name, job.qp, ingest);
    const double kbps = std::stod(format_kbps(bitrate_kbps(
        *r.bitstream_bytes, job.sequence.fps_num, job.sequence.fps_denom, job.frames)));
    const std::vector<RDCurve> curves =
        curves_from_logs({log}, {{job.qp, kbps}}, job.sequence, job.config, job.resolution, 1);
    auto& records = out[job.codec];
    for (const RDCurve& c : curves) {
      for (const RdRecord& rec : records_from_curve(c)) records.push_back(rec);
    }
  }
  return out;
}

}  // namespace ctceval

#endif  // CTCEVAL_RUNNER_HPP_
