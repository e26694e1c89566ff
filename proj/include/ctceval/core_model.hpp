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

// Domain types shared by every ctceval module: chroma formats, coding
// configurations, QP sets, sequence metadata and rate-distortion curves.

#ifndef CTCEVAL_CORE_MODEL_HPP_
#define CTCEVAL_CORE_MODEL_HPP_

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ctceval/error.hpp"

namespace ctceval {

enum class ChromaFormat { k420, k422, k444, kMono };

struct Subsampling {
  int horizontal;
  int vertical;
};

inline Subsampling subsampling_of(ChromaFormat chroma) {
  switch (chroma) {
    case ChromaFormat::k420: return {2, 2};
    case ChromaFormat::k422: return {2, 1};
    case ChromaFormat::k444: return {1, 1};
    case ChromaFormat::kMono: return {1, 1};
  }
  return {1, 1};
}

inline std::string_view to_string(ChromaFormat chroma) {
  switch (chroma) {
    case ChromaFormat::k420: return "420";
    case ChromaFormat::k422: return "422";
    case ChromaFormat::k444: return "444";
    case ChromaFormat::kMono: return "mono";
  }
  return "?";
}

inline ChromaFormat parse_chroma_format(std::string_view text) {
  if (text == "420" || text == "4:2:0") return ChromaFormat::k420;
  if (text == "422" || text == "4:2:2") return ChromaFormat::k422;
  if (text == "444" || text == "4:4:4") return ChromaFormat::k444;
  if (text == "mono" || text == "400") return ChromaFormat::kMono;
  fail(ErrorKind::kParse, "unknown chroma format '" + std::string(text) + "'");
}

enum class CodingConfig {
  kAllIntra,
  kRandomAccess,
  kLowDelay,
  kAdaptiveStreaming,
  kStillImage,
};

inline constexpr std::array<CodingConfig, 5> kAllCodingConfigs = {
    CodingConfig::kAllIntra, CodingConfig::kRandomAccess,
    CodingConfig::kLowDelay, CodingConfig::kAdaptiveStreaming,
    CodingConfig::kStillImage};

// Short tag used in file names, CSV columns and manifests.
inline std::string_view to_string(CodingConfig config) {
  switch (config) {
    case CodingConfig::kAllIntra: return "AI";
    case CodingConfig::kRandomAccess: return "RA";
    case CodingConfig::kLowDelay: return "LD";
    case CodingConfig::kAdaptiveStreaming: return "AS";
    case CodingConfig::kStillImage: return "SI";
  }
  return "?";
}

inline std::string_view display_name(CodingConfig config) {
  switch (config) {
    case CodingConfig::kAllIntra: return "All Intra";
    case CodingConfig::kRandomAccess: return "Random Access";
    case CodingConfig::kLowDelay: return "Low Delay";
    case CodingConfig::kAdaptiveStreaming: return "Adaptive Streaming";
    case CodingConfig::kStillImage: return "Still Image";
  }
  return "?";
}

inline CodingConfig parse_coding_config(std::string_view text) {
  for (CodingConfig config : kAllCodingConfigs) {
    if (text == to_string(config) || text == display_name(config)) {
      return config;
    }
  }
  fail(ErrorKind::kParse, "unknown coding config '" + std::string(text) + "'");
}

// Six quantizer indices on the qindex scale, ascending.
class QpSet {
 public:
  static constexpr std::size_t kSize = 6;

  explicit QpSet(std::array<int, kSize> qps) : qps_(qps) {
    for (std::size_t i = 0; i < kSize; ++i) {
      if (qps_[i] < 0 || qps_[i] > 255) {
        fail(ErrorKind::kArgument,
             "qp " + std::to_string(qps_[i]) + " outside [0, 255]");
      }
      if (i > 0 && qps_[i] <= qps_[i - 1]) {
        fail(ErrorKind::kArgument, "qp set must be strictly increasing");
      }
    }
  }

  static QpSet from_vector(const std::vector<int>& qps) {
    if (qps.size() != kSize) {
      fail(ErrorKind::kArgument, "qp set needs exactly 6 entries, got " +
                                     std::to_string(qps.size()));
    }
    std::array<int, kSize> values{};
    std::copy(qps.begin(), qps.end(), values.begin());
    return QpSet(values);
  }

  const std::array<int, kSize>& values() const { return qps_; }
  int operator[](std::size_t i) const { return qps_.at(i); }

  // 1-based quality-range index: QP1 is the largest qindex (lowest quality).
  int qp_by_quality_index(int index) const {
    if (index < 1 || index > static_cast<int>(kSize)) {
      fail(ErrorKind::kArgument, "quality index out of range");
    }
    return qps_[kSize - static_cast<std::size_t>(index)];
  }

  bool contains(int qp) const {
    return std::find(qps_.begin(), qps_.end(), qp) != qps_.end();
  }

  friend bool operator==(const QpSet&, const QpSet&) = default;

 private:
  std::array<int, kSize> qps_;
};

inline QpSet qp_set_for(CodingConfig config) {
  switch (config) {
    case CodingConfig::kStillImage:
      return QpSet({60, 85, 110, 135, 160, 185});
    case CodingConfig::kAllIntra:
      return QpSet({85, 110, 135, 160, 185, 210});
    case CodingConfig::kRandomAccess:
    case CodingConfig::kLowDelay:
    case CodingConfig::kAdaptiveStreaming:
      return QpSet({110, 135, 160, 185, 210, 235});
  }
  fail(ErrorKind::kConfig, "unknown coding config");
}

inline bool is_ecf_class(std::string_view class_label) {
  return class_label.starts_with("ECF");
}

// Frames encoded per sequence for a config. Still images (class F) code a
// single frame per image.
inline int frame_count_for(CodingConfig config, std::string_view class_label,
                           bool is_ecf) {
  const bool still = class_label == "F";
  switch (config) {
    case CodingConfig::kStillImage:
      if (is_ecf) break;
      return 1;
    case CodingConfig::kAllIntra:
      if (still) return 1;
      return is_ecf ? 5 : 15;
    case CodingConfig::kRandomAccess:
      if (still) break;
      return is_ecf ? 66 : 130;
    case CodingConfig::kLowDelay:
      if (still) break;
      return is_ecf ? 33 : 130;
    case CodingConfig::kAdaptiveStreaming:
      if (still || is_ecf) break;
      return 130;
  }
  fail(ErrorKind::kConfig, "no frame count defined for config " +
                               std::string(to_string(config)) + " and class " +
                               std::string(class_label));
}

struct Resolution {
  int width = 0;
  int height = 0;

  friend auto operator<=>(const Resolution&, const Resolution&) = default;
};

inline std::string to_string(Resolution r) {
  return std::to_string(r.width) + "x" + std::to_string(r.height);
}

inline Resolution parse_resolution(std::string_view text) {
  const auto x = text.find('x');
  if (x == std::string_view::npos) {
    fail(ErrorKind::kParse, "resolution must look like WxH: '" +
                                std::string(text) + "'");
  }
  try {
    std::size_t used_w = 0;
    std::size_t used_h = 0;
    const std::string w(text.substr(0, x));
    const std::string h(text.substr(x + 1));
    Resolution r{std::stoi(w, &used_w), std::stoi(h, &used_h)};
    if (used_w != w.size() || used_h != h.size() || r.width <= 0 ||
        r.height <= 0) {
      throw std::invalid_argument("bad");
    }
    return r;
  } catch (const std::exception&) {
    fail(ErrorKind::kParse, "bad resolution '" + std::string(text) + "'");
  }
}

using LadderOverrides = std::map<Resolution, std::vector<Resolution>>;

// Downscaled rungs for the adaptive-streaming ladder. Only the 2160p ladder
// is built in; anything else must come from the manifest.
inline std::vector<Resolution> as_ladder_for(
    Resolution source, const LadderOverrides& overrides = {}) {
  if (auto it = overrides.find(source); it != overrides.end()) {
    return it->second;
  }
  if (source == Resolution{3840, 2160}) {
    return {{2560, 1440}, {1920, 1080}, {1280, 720}, {960, 540}, {640, 360}};
  }
  fail(ErrorKind::kConfig,
       "no adaptive-streaming ladder for source " + to_string(source));
}

enum class ChromaSiting { kType0Vertical, kType2CoLocated, kCenterJpeg };

inline ChromaSiting siting_for(bool hdr, bool still_image) {
  if (still_image) return ChromaSiting::kCenterJpeg;
  return hdr ? ChromaSiting::kType2CoLocated : ChromaSiting::kType0Vertical;
}

inline std::string_view to_string(ChromaSiting siting) {
  switch (siting) {
    case ChromaSiting::kType0Vertical: return "type0";
    case ChromaSiting::kType2CoLocated: return "type2";
    case ChromaSiting::kCenterJpeg: return "jpeg";
  }
  return "?";
}

inline ChromaSiting parse_chroma_siting(std::string_view text) {
  if (text == "type0") return ChromaSiting::kType0Vertical;
  if (text == "type2") return ChromaSiting::kType2CoLocated;
  if (text == "jpeg" || text == "center") return ChromaSiting::kCenterJpeg;
  fail(ErrorKind::kParse, "unknown chroma siting '" + std::string(text) + "'");
}

struct SequenceInfo {
  std::string name;
  std::string class_label;
  int width = 0;
  int height = 0;
  int bit_depth = 8;
  ChromaFormat chroma = ChromaFormat::k420;
  std::int64_t fps_num = 30;
  std::int64_t fps_denom = 1;
  int frame_count = 1;
  bool hdr = false;
  ChromaSiting siting = ChromaSiting::kType0Vertical;

  Resolution resolution() const { return {width, height}; }
  bool is_ecf() const { return is_ecf_class(class_label); }

  void validate() const {
    if (width <= 0 || height <= 0) {
      fail(ErrorKind::kArgument, name + ": width and height must be positive");
    }
    if (fps_num <= 0 || fps_denom <= 0) {
      fail(ErrorKind::kArgument, name + ": frame rate must be positive");
    }
    if (frame_count <= 0) {
      fail(ErrorKind::kArgument, name + ": frame_count must be positive");
    }
    if (bit_depth != 8 && bit_depth != 10) {
      fail(ErrorKind::kArgument, name + ": bit depth must be 8 or 10");
    }
  }
};

enum class MetricId {
  kPsnrY,
  kPsnrU,
  kPsnrV,
  kPsnrYuv,
  kSsim,
  kMsSsim,
  kVmaf,
  kCiede2000,
  kPsnrHvs,
  kCambi,
};

inline constexpr std::array<MetricId, 10> kAllMetrics = {
    MetricId::kPsnrY, MetricId::kPsnrU,     MetricId::kPsnrV,
    MetricId::kPsnrYuv, MetricId::kSsim,    MetricId::kMsSsim,
    MetricId::kVmaf,  MetricId::kCiede2000, MetricId::kPsnrHvs,
    MetricId::kCambi};

inline std::string_view to_string(MetricId metric) {
  switch (metric) {
    case MetricId::kPsnrY: return "PSNR_Y";
    case MetricId::kPsnrU: return "PSNR_U";
    case MetricId::kPsnrV: return "PSNR_V";
    case MetricId::kPsnrYuv: return "PSNR_YUV";
    case MetricId::kSsim: return "SSIM";
    case MetricId::kMsSsim: return "MS_SSIM";
    case MetricId::kVmaf: return "VMAF";
    case MetricId::kCiede2000: return "CIEDE2000";
    case MetricId::kPsnrHvs: return "PSNR_HVS";
    case MetricId::kCambi: return "CAMBI";
  }
  return "?";
}

inline std::optional<MetricId> try_parse_metric(std::string_view text) {
  for (MetricId metric : kAllMetrics) {
    if (text == to_string(metric)) return metric;
  }
  return std::nullopt;
}

inline MetricId parse_metric(std::string_view text) {
  if (auto metric = try_parse_metric(text)) return *metric;
  fail(ErrorKind::kParse, "unknown metric '" + std::string(text) + "'");
}

// Metrics whose RD curves flatten out near their ceiling.
inline bool is_saturating(MetricId metric) {
  switch (metric) {
    case MetricId::kVmaf:
    case MetricId::kSsim:
    case MetricId::kMsSsim:
    case MetricId::kCambi:
      return true;
    default:
      return false;
  }
}

struct RDPoint {
  int qp = 0;
  double bitrate_kbps = 0.0;
  double quality = 0.0;
  bool interpolated = false;

  friend bool operator==(const RDPoint&, const RDPoint&) = default;
};

// Per-sequence, per-metric RD samples, sorted by strictly increasing rate.
class RDCurve {
 public:
  RDCurve(std::string sequence, CodingConfig config, MetricId metric,
          std::vector<RDPoint> points, Resolution resolution = {})
      : sequence_(std::move(sequence)),
        config_(config),
        metric_(metric),
        resolution_(resolution),
        points_(std::move(points)) {
    for (const RDPoint& p : points_) {
      if (!(p.bitrate_kbps > 0.0)) {
        fail(ErrorKind::kArgument,
             sequence_ + ": bitrate must be positive (qp " +
                 std::to_string(p.qp) + ")");
      }
    }
    std::sort(points_.begin(), points_.end(),
              [](const RDPoint& a, const RDPoint& b) {
                return a.bitrate_kbps < b.bitrate_kbps;
              });
    for (std::size_t i = 1; i < points_.size(); ++i) {
      if (points_[i].bitrate_kbps == points_[i - 1].bitrate_kbps) {
        fail(ErrorKind::kArgument, sequence_ + ": duplicate bitrate " +
                                       std::to_string(points_[i].bitrate_kbps));
      }
    }
  }

  const std::string& sequence() const { return sequence_; }
  CodingConfig config() const { return config_; }
  MetricId metric() const { return metric_; }
  Resolution resolution() const { return resolution_; }
  const std::vector<RDPoint>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }

  RDCurve with_points(std::vector<RDPoint> points) const {
    return RDCurve(sequence_, config_, metric_, std::move(points),
                   resolution_);
  }

  friend bool operator==(const RDCurve&, const RDCurve&) = default;

 private:
  std::string sequence_;
  CodingConfig config_;
  MetricId metric_;
  Resolution resolution_;
  std::vector<RDPoint> points_;
};

}  // namespace ctceval

#endif  // CTCEVAL_CORE_MODEL_HPP_
