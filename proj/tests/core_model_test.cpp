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

#include "ctceval/core_model.hpp"

#include <vector>

#include "gtest/gtest.h"

namespace ctceval {
namespace {

TEST(QpSetTest, ConfigTables) {
  using V = std::array<int, 6>;
  EXPECT_EQ(qp_set_for(CodingConfig::kStillImage).values(), (V{60, 85, 110, 135, 160, 185}));
  EXPECT_EQ(qp_set_for(CodingConfig::kAllIntra).values(), (V{85, 110, 135, 160, 185, 210}));
  for (CodingConfig c : {CodingConfig::kRandomAccess, CodingConfig::kLowDelay,
                         CodingConfig::kAdaptiveStreaming}) {
    EXPECT_EQ(qp_set_for(c).values(), (V{110, 135, 160, 185, 210, 235})) << to_string(c);
  }
}

TEST(QpSetTest, QualityIndexCountsFromLargestQp) {
  const QpSet ra = qp_set_for(CodingConfig::kRandomAccess);
  EXPECT_EQ(ra.qp_by_quality_index(1), 235);
  EXPECT_EQ(ra.qp_by_quality_index(6), 110);
  EXPECT_TRUE(ra.contains(160));
  EXPECT_FALSE(ra.contains(161));
}

TEST(QpSetTest, RejectsBadSets) {
  EXPECT_THROW(QpSet({10, 20, 20, 30, 40, 50}), Error);
  EXPECT_THROW(QpSet({-1, 20, 25, 30, 40, 50}), Error);
  EXPECT_THROW(QpSet({10, 20, 25, 30, 40, 256}), Error);
  EXPECT_THROW(QpSet::from_vector({1, 2, 3}), Error);
  EXPECT_EQ(QpSet::from_vector({1, 2, 3, 4, 5, 6}).values()[5], 6);
}

TEST(FrameCountTest, PerConfigAndClass) {
  EXPECT_EQ(frame_count_for(CodingConfig::kStillImage, "F", false), 1);
  EXPECT_EQ(frame_count_for(CodingConfig::kAllIntra, "A1", false), 15);
  EXPECT_EQ(frame_count_for(CodingConfig::kAllIntra, "ECF_422", true), 5);
  EXPECT_EQ(frame_count_for(CodingConfig::kRandomAccess, "A1", false), 130);
  EXPECT_EQ(frame_count_for(CodingConfig::kRandomAccess, "ECF_SCC", true), 66);
  EXPECT_EQ(frame_count_for(CodingConfig::kLowDelay, "ECF_SCC", true), 33);
  EXPECT_EQ(frame_count_for(CodingConfig::kAdaptiveStreaming, "A1", false), 130);
  EXPECT_THROW(frame_count_for(CodingConfig::kRandomAccess, "F", false), Error);
  EXPECT_THROW(frame_count_for(CodingConfig::kAdaptiveStreaming, "ECF_422", true), Error);
}

TEST(LadderTest, Builtin4kLadder) {
  const auto rungs = as_ladder_for({3840, 2160});
  ASSERT_EQ(rungs.size(), 5u);
  EXPECT_EQ(rungs.front(), (Resolution{2560, 1440}));
  EXPECT_EQ(rungs.back(), (Resolution{640, 360}));
  try {
    as_ladder_for({1920, 1080});
    FAIL() << "expected a config error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kConfig);
  }
  LadderOverrides overrides{{{1920, 1080}, {{960, 540}}}};
  EXPECT_EQ(as_ladder_for({1920, 1080}, overrides).size(), 1u);
}

TEST(ParseTest, RoundTrips) {
  for (CodingConfig c : kAllCodingConfigs) {
    EXPECT_EQ(parse_coding_config(to_string(c)), c);
    EXPECT_EQ(parse_coding_config(display_name(c)), c);
  }
  for (MetricId m : kAllMetrics) EXPECT_EQ(parse_metric(to_string(m)), m);
  EXPECT_FALSE(try_parse_metric("PSNR-Q").has_value());
  EXPECT_EQ(parse_chroma_format("4:2:2"), ChromaFormat::k422);
  EXPECT_EQ(parse_resolution("1920x1080"), (Resolution{1920, 1080}));
  EXPECT_THROW(parse_resolution("1920x"), Error);
  EXPECT_THROW(parse_resolution("0x10"), Error);
  EXPECT_EQ(parse_chroma_siting(to_string(ChromaSiting::kCenterJpeg)), ChromaSiting::kCenterJpeg);
}

TEST(SitingTest, Defaults) {
  EXPECT_EQ(siting_for(false, false), ChromaSiting::kType0Vertical);
  EXPECT_EQ(siting_for(true, false), ChromaSiting::kType2CoLocated);
  EXPECT_EQ(siting_for(false, true), ChromaSiting::kCenterJpeg);
}

TEST(MetricTest, SaturatingSet) {
  EXPECT_TRUE(is_saturating(MetricId::kVmaf));
  EXPECT_TRUE(is_saturating(MetricId::kSsim));
  EXPECT_TRUE(is_saturating(MetricId::kMsSsim));
  EXPECT_TRUE(is_saturating(MetricId::kCambi));
  EXPECT_FALSE(is_saturating(MetricId::kPsnrY));
  EXPECT_FALSE(is_saturating(MetricId::kCiede2000));
}

TEST(RDCurveTest, SortsAndValidates) {
  RDCurve c("s", CodingConfig::kRandomAccess, MetricId::kPsnrY,
            {{110, 900, 40}, {235, 100, 30}, {160, 400, 35}});
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c.points()[0].qp, 235);
  EXPECT_EQ(c.points()[2].qp, 110);
  EXPECT_THROW(RDCurve("s", CodingConfig::kRandomAccess, MetricId::kPsnrY, {{1, 0.0, 3}}),
               Error);
  EXPECT_THROW(RDCurve("s", CodingConfig::kRandomAccess, MetricId::kPsnrY,
                       {{1, 5.0, 3}, {2, 5.0, 4}}),
               Error);
}

TEST(SequenceInfoTest, Validate) {
  SequenceInfo info{"a", "A1", 64, 32};
  EXPECT_NO_THROW(info.validate());
  info.bit_depth = 12;
  EXPECT_THROW(info.validate(), Error);
  EXPECT_TRUE((SequenceInfo{"b", "ECF_SCC", 8, 8}).is_ecf());
}

}  // namespace
}  // namespace ctceval
