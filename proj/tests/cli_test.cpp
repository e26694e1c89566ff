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

#include "ctceval/cli.hpp"

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"

namespace ctceval::cli {
namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome Invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Outcome o;
  o.code = run_cli(args, out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> Lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

// One sequence with six QPs; `rate_scale` multiplies every rate.
std::string RdTable(const std::string& metric, const std::vector<double>& quality,
                    double rate_scale = 1.0) {
  const int qps[] = {235, 210, 185, 160, 135, 110};
  const double rates[] = {200, 320, 510, 820, 1300, 2100};
  std::string csv = "sequence,config,resolution,qp,bitrate_kbps,metric,value\n";
  for (int i = 0; i < 6; ++i) {
    csv += fmt::format("seq,RA,1920x1080,{},{:.6f},{},{:.6f}\n", qps[i], rates[i] * rate_scale,
                       metric, quality[static_cast<std::size_t>(i)]);
  }
  return csv;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("ctceval_cli_" +
            std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Write(const std::string& name, const std::string& bytes) {
    const fs::path p = dir_ / name;
    std::ofstream(p, std::ios::binary) << bytes;
    return p.string();
  }

  // Raw 8-bit 4:2:0 video with constant planes.
  std::string WriteFlatYuv(const std::string& name, int w, int h, int frames, char y, char uv) {
    std::string bytes;
    for (int f = 0; f < frames; ++f) {
      bytes += std::string(static_cast<std::size_t>(w * h), y);
      bytes += std::string(static_cast<std::size_t>(w * h / 2), uv);
    }
    return Write(name, bytes);
  }

  fs::path dir_;
};

const std::vector<double> kPsnr = {30, 32.5, 35, 37.5, 40, 42.5};

TEST_F(CliTest, BdRateOfScaledRates) {
  const auto a = Write("a.csv", RdTable("PSNR_Y", kPsnr));
  const auto t = Write("t.csv", RdTable("PSNR_Y", kPsnr, 0.8));
  const Outcome o = Invoke({"bdrate", "--anchor", a, "--test", t, "--range", "full"});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto lines = Lines(o.out);
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[0],
            "sequence,config,metric,range,bdrate,quality_lo,quality_hi,points_anchor,"
            "points_test,excluded");
  EXPECT_NE(lines[1].find("seq,RA,PSNR_Y,full,-0.2000000000,"), std::string::npos) << lines[1];
}

TEST_F(CliTest, BdRateDefaultsToAllRanges) {
  const auto a = Write("a.csv", RdTable("PSNR_Y", kPsnr));
  const auto t = Write("t.csv", RdTable("PSNR_Y", kPsnr, 1.1));
  const Outcome o = Invoke({"bdrate", "--anchor", a, "--test", t});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto lines = Lines(o.out);
  ASSERT_EQ(lines.size(), 5u);
  EXPECT_NE(lines[2].find(",low,0.1000000000,"), std::string::npos) << lines[2];
  EXPECT_NE(lines[4].find(",high,0.1000000000,"), std::string::npos) << lines[4];
}

TEST_F(CliTest, MissingRequiredOptionIsUsageError) {
  const auto a = Write("a.csv", RdTable("PSNR_Y", kPsnr));
  const Outcome o = Invoke({"bdrate", "--anchor", a});
  EXPECT_EQ(o.code, kExitParse);
  EXPECT_NE(o.err.find("--test"), std::string::npos);
  EXPECT_TRUE(o.out.empty());
}

TEST_F(CliTest, UnknownSubcommandAndBadValues) {
  EXPECT_EQ(Invoke({}).code, kExitParse);
  EXPECT_EQ(Invoke({"frobnicate"}).code, kExitParse);
  const auto a = Write("a.csv", RdTable("PSNR_Y", kPsnr));
  EXPECT_EQ(Invoke({"bdrate", "--anchor", a, "--test", a, "--range", "middle"}).code, kExitParse);
  EXPECT_EQ(Invoke({"bdrate", "--anchor", a, "--test", a, "--metric", "LPIPS"}).code, kExitParse);
  const auto bad = Write("bad.csv", "sequence,config\nseq,RA\n");
  EXPECT_EQ(Invoke({"bdrate", "--anchor", bad, "--test", a}).code, kExitParse);
}

TEST_F(CliTest, DisjointQualityIsOverlapError) {
  const auto a = Write("a.csv", RdTable("PSNR_Y", kPsnr));
  std::vector<double> high = kPsnr;
  for (double& q : high) q += 20.0;
  const auto t = Write("t.csv", RdTable("PSNR_Y", high));
  const Outcome o = Invoke({"bdrate", "--anchor", a, "--test", t});
  EXPECT_EQ(o.code, kExitOverlap) << o.err;
}

TEST_F(CliTest, SaturatedCurveIsExclusionError) {
  const auto a = Write("a.csv", RdTable("VMAF", {99.9, 99.9, 99.9, 99.9, 99.9, 99.9}));
  const auto t = Write("t.csv", RdTable("VMAF", {60, 70, 80, 90, 95, 98}));
  const Outcome o = Invoke({"bdrate", "--anchor", a, "--test", t});
  EXPECT_EQ(o.code, kExitExclusion) << o.err;
}

TEST_F(CliTest, PlateauIsReportedInExcludedColumn) {
  const auto a = Write("a.csv", RdTable("VMAF", {50, 70, 85, 95, 99.9, 99.9}));
  const auto t = Write("t.csv", RdTable("VMAF", {50, 70, 85, 95, 99.9, 99.9}, 0.9));
  const Outcome o = Invoke({"bdrate", "--anchor", a, "--test", t});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_NE(o.out.find(",5,5,anchor:110;test:110"), std::string::npos) << o.out;
}

TEST_F(CliTest, HelpDocumentsEveryFlag) {
  const Outcome top = Invoke({"--help"});
  EXPECT_EQ(top.code, 0);
  for (const char* sub : {"bdrate", "hull", "psnr", "resample", "run", "report", "progress"}) {
    EXPECT_NE(top.out.find(sub), std::string::npos) << sub;
  }
  const Outcome bd = Invoke({"bdrate", "--help"});
  EXPECT_EQ(bd.code, 0);
  for (const char* flag : {"--anchor", "--test", "--metric", "--range", "--luma-weight"}) {
    EXPECT_NE(bd.out.find(flag), std::string::npos) << flag;
  }
  const Outcome rn = Invoke({"run", "--help"});
  for (const char* flag : {"--manifest", "--dry-run", "--collect-only", "--force",
                           "--parallelism", "--output-dir", "--results-dir"}) {
    EXPECT_NE(rn.out.find(flag), std::string::npos) << flag;
  }
  EXPECT_EQ(Invoke({"--version"}).out, "ctceval 1.0.0\n");
}

TEST_F(CliTest, OutputFileIsWrittenAtomically) {
  const auto a = Write("a.csv", RdTable("PSNR_Y", kPsnr));
  const auto t = Write("t.csv", RdTable("PSNR_Y", kPsnr, 0.8));
  const fs::path target = dir_ / "sub" / "bd.csv";
  const Outcome o = Invoke({"bdrate", "--anchor", a, "--test", t, "-o", target.string()});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_TRUE(o.out.empty());
  EXPECT_NE(Slurp(target).find("-0.2000000000"), std::string::npos);
  EXPECT_FALSE(fs::exists(target.string() + ".tmp"));

  // A failing command leaves an existing output untouched.
  const std::string before = Slurp(target);
  std::vector<double> high = kPsnr;
  for (double& q : high) q += 20.0;
  const auto far = Write("far.csv", RdTable("PSNR_Y", high));
  EXPECT_EQ(Invoke({"bdrate", "--anchor", a, "--test", far, "-o", target.string()}).code,
            kExitOverlap);
  EXPECT_EQ(Slurp(target), before);
}

TEST_F(CliTest, PsnrOfFlatFrames) {
  const auto ref = WriteFlatYuv("ref.yuv", 16, 16, 2, 100, 64);
  const auto dist = WriteFlatYuv("dist.yuv", 16, 16, 2, 102, 64);
  const Outcome o = Invoke({"psnr", "--ref", ref, "--dist", dist, "--width", "16", "--height",
                         "16", "--cap", "100"});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto lines = Lines(o.out);
  ASSERT_EQ(lines.size(), 4u);
  EXPECT_EQ(lines[0], "frame,PSNR_Y,PSNR_U,PSNR_V,PSNR_YUV");
  const double y = 10.0 * std::log10(255.0 * 255.0 / 4.0);
  const double yuv = (14.0 * y + 100.0 + 100.0) / 16.0;
  EXPECT_EQ(lines[1], fmt::format("0,{:.6f},100.000000,100.000000,{:.6f}", y, yuv));
  EXPECT_EQ(lines[3], fmt::format("mean,{:.6f},100.000000,100.000000,{:.6f}", y, yuv));
}

TEST_F(CliTest, PsnrRejectsMismatchedInputs) {
  const auto ref = WriteFlatYuv("ref.yuv", 16, 16, 2, 100, 64);
  const auto dist = WriteFlatYuv("dist.yuv", 16, 16, 1, 100, 64);
  EXPECT_EQ(Invoke({"psnr", "--ref", ref, "--dist", dist, "--width", "16", "--height", "16"}).code,
            kExitParse);
  EXPECT_EQ(Invoke({"psnr", "--ref", ref, "--dist", ref}).code, kExitParse);
}

TEST_F(CliTest, ResampleFlatVideoToY4m) {
  const auto src = WriteFlatYuv("src.yuv", 32, 32, 3, 90, 40);
  const fs::path dst = dir_ / "dst.y4m";
  const fs::path bank = dir_ / "bank.csv";
  const Outcome o = Invoke({"resample", "--input", src, "--src-width", "32", "--src-height", "32",
                         "--width", "16", "--height", "16", "--output", dst.string(),
                         "--frames", "2", "--bank-csv", bank.string()});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_TRUE(fs::exists(bank));
  VideoReader reader(dst, std::nullopt);
  EXPECT_EQ(reader.format().width, 16);
  EXPECT_EQ(reader.format().height, 16);
  int frames = 0;
  while (auto f = reader.next()) {
    ++frames;
    for (auto s : f->y.samples) ASSERT_EQ(s, 90);
    for (auto s : f->u->samples) ASSERT_EQ(s, 40);
  }
  EXPECT_EQ(frames, 2);
  for (const auto& e : fs::directory_iterator(dir_)) {
    EXPECT_EQ(e.path().string().find(".tmp"), std::string::npos) << e.path();
  }
}

TEST_F(CliTest, ReportAndProgress) {
  std::string a = RdTable("PSNR_Y", kPsnr);
  std::string t = RdTable("PSNR_Y", kPsnr, 0.9);
  const auto anchor = Write("a.csv", a);
  const auto test = Write("t.csv", t);
  const auto classes = Write("classes.csv", "sequence,class\nseq,A1\n");
  EXPECT_EQ(Invoke({"report", "--anchor", anchor, "--test", test}).code, kExitParse);

  const Outcome md = Invoke({"report", "--anchor", anchor, "--test", test, "--classes", classes});
  ASSERT_EQ(md.code, 0) << md.err;
  EXPECT_NE(md.out.find("| Random Access | Class A+B1 | -10.00% |"), std::string::npos)
      << md.out;

  const fs::path v1 = dir_ / "v1.csv";
  const fs::path v2 = dir_ / "v2.csv";
  ASSERT_EQ(Invoke({"report", "--anchor", anchor, "--test", test, "--classes", classes, "--format",
                 "csv", "-o", v1.string()})
                .code,
            0);
  const auto faster = Write("t2.csv", RdTable("PSNR_Y", kPsnr, 0.8));
  ASSERT_EQ(Invoke({"report", "--anchor", anchor, "--test", faster, "--classes", classes,
                 "--format", "csv", "-o", v2.string()})
                .code,
            0);
  const Outcome pg =
      Invoke({"progress", "--table", "v1=" + v1.string(), "--table", "v2=" + v2.string()});
  ASSERT_EQ(pg.code, 0) << pg.err;
  EXPECT_NE(pg.out.find("v1"), std::string::npos);
  EXPECT_NE(pg.out.find("v2"), std::string::npos);
  EXPECT_NE(pg.out.find("-20.00"), std::string::npos) << pg.out;
  EXPECT_EQ(Invoke({"progress", "--table", v1.string()}).code, kExitParse);
}

TEST_F(CliTest, DryRunListsFixtureCampaign) {
  const std::string manifest = std::string(CTCEVAL_TEST_DATA) + "/fixture/manifest.json";
  const Outcome o = Invoke({"run", "--manifest", manifest, "--dry-run", "--output-dir",
                         dir_.string()});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto lines = Lines(o.out);
  // 120 jobs, each with encode, decode and metrics; AS rungs below 4K add
  // a prepare and an upscale step.
  EXPECT_EQ(lines.size(), 480u);
  EXPECT_TRUE(fs::is_empty(dir_));
}

TEST_F(CliTest, ExecutableExitStatus) {
  const std::string cli = CTCEVAL_CLI_PATH;
  auto status = [](const std::string& cmd) {
    const int raw = std::system((cmd + " >/dev/null 2>&1").c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  EXPECT_EQ(status(cli + " --version"), 0);
  EXPECT_EQ(status(cli + " bdrate"), kExitParse);
  const auto a = Write("a.csv", RdTable("PSNR_Y", kPsnr));
  std::vector<double> high = kPsnr;
  for (double& q : high) q += 20.0;
  const auto t = Write("t.csv", RdTable("PSNR_Y", high));
  EXPECT_EQ(status(cli + " bdrate --anchor " + a + " --test " + t), kExitOverlap);
}

}  // namespace
}  // namespace ctceval::cli
