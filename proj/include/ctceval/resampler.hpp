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

// Separable Lanczos-5 polyphase resampler with 14-bit integer coefficients.
//
// Output sample i on an axis reads source coordinate
//   (i + 0.5) * src / dst - 0.5 + siting_offset
// (centered phase alignment), snapped to the nearest of 64 phases. Taps that
// fall outside the plane replicate the edge sample. Each pass accumulates in
// 64-bit integers and rounds once (add 2^13, shift 14). The horizontal pass
// writes unclamped 32-bit intermediates so that its overshoot reaches the
// vertical pass intact; only the final result is clamped to the bit depth.

#ifndef CTCEVAL_RESAMPLER_HPP_
#define CTCEVAL_RESAMPLER_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "ctceval/core_model.hpp"
#include "ctceval/error.hpp"
#include "ctceval/metrics_io.hpp"

namespace ctceval {

inline constexpr int kLanczosAlpha = 5;
inline constexpr int kFilterPrecisionBits = 14;
inline constexpr std::int32_t kFilterUnity = 1 << kFilterPrecisionBits;
inline constexpr int kDefaultPhases = 64;

inline double lanczos_kernel(double x, int alpha = kLanczosAlpha) {
  if (x == 0.0) return 1.0;
  if (std::abs(x) >= alpha) return 0.0;
  const double px = std::numbers::pi * x;
  return alpha * std::sin(px) * std::sin(px / alpha) / (px * px);
}

struct FilterBank {
  int taps_per_phase = 2 * kLanczosAlpha;
  int phases = kDefaultPhases;
  double stretch = 1.0;                     // kernel widening for downscaling
  std::vector<std::vector<std::int32_t>> rows;  // [phase][tap]

  // Tap index that sits on the integer source position at phase 0.
  int center_tap() const { return taps_per_phase / 2 - 1; }
};

/// Lanczos-5 coefficients for a src/dst `scale_ratio`. Ratios above one
/// (downscaling) stretch the kernel by the ratio and widen the support to
/// 2 * alpha * ceil(ratio) taps. Each row is normalised, rounded to 14 bits
/// and its rounding residual pushed onto the largest-magnitude tap, so every
/// row sums to exactly 2^14.
inline FilterBank build_filter_bank(Rational scale_ratio, int n_phases = kDefaultPhases) {
  if (scale_ratio.num <= 0 || scale_ratio.den <= 0) {
    fail(ErrorKind::kArgument, "scale ratio must be positive");
  }
  if (n_phases < 1) fail(ErrorKind::kArgument, "phase count must be positive");
  FilterBank bank;
  bank.phases = n_phases;
  bank.stretch = std::max(1.0, scale_ratio.value());
  bank.taps_per_phase = 2 * kLanczosAlpha * static_cast<int>(std::ceil(bank.stretch - 1e-12));
  const int center = bank.center_tap();

  bank.rows.resize(static_cast<std::size_t>(n_phases));
  std::vector<double> weights(static_cast<std::size_t>(bank.taps_per_phase));
  for (int p = 0; p < n_phases; ++p) {
    const double frac = static_cast<double>(p) / n_phases;
    double sum = 0.0;
    for (int j = 0; j < bank.taps_per_phase; ++j) {
      weights[j] = lanczos_kernel((j - center - frac) / bank.stretch);
      sum += weights[j];
    }
    auto& row = bank.rows[static_cast<std::size_t>(p)];
    row.resize(weights.size());
    std::int32_t total = 0;
    std::size_t largest = 0;
    for (std::size_t j = 0; j < weights.size(); ++j) {
      row[j] = static_cast<std::int32_t>(std::lround(weights[j] / sum * kFilterUnity));
      total += row[j];
      if (std::abs(row[j]) > std::abs(row[largest])) largest = j;
    }
    row[largest] += kFilterUnity - total;
  }
  return bank;
}

enum class Axis { kHorizontal, kVertical };

struct ResampleSpec {
  int src_dim = 1;
  int dst_dim = 1;
  double siting_offset = 0.0;  // in source samples of this plane
  Axis axis = Axis::kHorizontal;

  Rational ratio() const { return {src_dim, dst_dim}; }

  void validate() const {
    if (src_dim < 1 || dst_dim < 1) {
      fail(ErrorKind::kArgument, "resample dimensions must be at least 1");
    }
  }
};

/// Displacement of a chroma sample from the luma-co-located position, in
/// chroma samples of a 2x-subsampled axis.
inline double siting_offset(ChromaSiting siting, Axis axis) {
  switch (siting) {
    case ChromaSiting::kType2CoLocated: return 0.0;
    case ChromaSiting::kType0Vertical: return axis == Axis::kVertical ? 0.25 : 0.0;
    case ChromaSiting::kCenterJpeg: return 0.25;
  }
  return 0.0;
}

/// Source-coordinate correction for resampling a chroma plane of the given
/// siting by `ratio` (src/dst) when the axis is subsampled by `factor`.
/// Zero for centre-sited chroma, where the centered mapping is already exact.
inline double chroma_phase_correction(ChromaSiting siting, Axis axis, int factor,
                                      double ratio) {
  if (factor <= 1) return 0.0;
  const double d = siting_offset(siting, axis) * (2.0 / factor);
  return (d + 0.5 / factor - 0.5) * (ratio - 1.0);
}

namespace internal {

struct TapPlan {
  int taps = 0;
  std::vector<int> source_index;          // [dst][tap], edge-clamped
  std::vector<const std::int32_t*> coef;  // [dst]
};

inline TapPlan plan_taps(const ResampleSpec& spec, const FilterBank& bank) {
  TapPlan plan;
  plan.taps = bank.taps_per_phase;
  plan.source_index.resize(static_cast<std::size_t>(spec.dst_dim) * plan.taps);
  plan.coef.resize(static_cast<std::size_t>(spec.dst_dim));
  const double scale = static_cast<double>(spec.src_dim) / spec.dst_dim;
  for (int i = 0; i < spec.dst_dim; ++i) {
    const double pos = (i + 0.5) * scale - 0.5 + spec.siting_offset;
    double base = std::floor(pos);
    int phase = static_cast<int>(std::lround((pos - base) * bank.phases));
    if (phase == bank.phases) {
      phase = 0;
      base += 1.0;
    }
    const int first = static_cast<int>(base) - bank.center_tap();
    for (int j = 0; j < plan.taps; ++j) {
      plan.source_index[static_cast<std::size_t>(i) * plan.taps + j] =
          std::clamp(first + j, 0, spec.src_dim - 1);
    }
    plan.coef[static_cast<std::size_t>(i)] = bank.rows[static_cast<std::size_t>(phase)].data();
  }
  return plan;
}

inline std::int64_t round_shift(std::int64_t acc) {
  return (acc + (std::int64_t{1} << (kFilterPrecisionBits - 1))) >> kFilterPrecisionBits;
}

}  // namespace internal

inline FilterBank filter_bank_for(const ResampleSpec& spec) {
  return build_filter_bank(spec.ratio());
}

inline PlaneBuffer resample_plane(const PlaneBuffer& src, const ResampleSpec& h,
                                  const ResampleSpec& v, const FilterBank& h_bank,
                                  const FilterBank& v_bank) {
  h.validate();
  v.validate();
  if (h.axis != Axis::kHorizontal || v.axis != Axis::kVertical) {
    fail(ErrorKind::kArgument, "resample specs must be (horizontal, vertical)");
  }
  if (h.src_dim != src.width || v.src_dim != src.height) {
    fail(ErrorKind::kArgument, "resample spec does not match source plane size");
  }
  const int out_w = h.dst_dim;
  const int out_h = v.dst_dim;
  const internal::TapPlan hp = internal::plan_taps(h, h_bank);
  const internal::TapPlan vp = internal::plan_taps(v, v_bank);

  std::vector<std::int32_t> mid(static_cast<std::size_t>(out_w) * src.height);
  for (int y = 0; y < src.height; ++y) {
    const std::uint16_t* line = src.samples.data() + static_cast<std::size_t>(y) * src.width;
    std::int32_t* out = mid.data() + static_cast<std::size_t>(y) * out_w;
    for (int x = 0; x < out_w; ++x) {
      const int* idx = hp.source_index.data() + static_cast<std::size_t>(x) * hp.taps;
      const std::int32_t* c = hp.coef[static_cast<std::size_t>(x)];
      std::int64_t acc = 0;
      for (int j = 0; j < hp.taps; ++j) acc += std::int64_t{c[j]} * line[idx[j]];
      out[x] = static_cast<std::int32_t>(internal::round_shift(acc));
    }
  }

  PlaneBuffer dst(out_w, out_h, src.bit_depth);
  const std::int64_t max_value = dst.max_value();
  for (int y = 0; y < out_h; ++y) {
    const int* idx = vp.source_index.data() + static_cast<std::size_t>(y) * vp.taps;
    const std::int32_t* c = vp.coef[static_cast<std::size_t>(y)];
    std::uint16_t* out = dst.samples.data() + static_cast<std::size_t>(y) * out_w;
    for (int x = 0; x < out_w; ++x) {
      std::int64_t acc = 0;
      for (int j = 0; j < vp.taps; ++j) {
        acc += std::int64_t{c[j]} * mid[static_cast<std::size_t>(idx[j]) * out_w + x];
      }
      out[x] = static_cast<std::uint16_t>(
          std::clamp<std::int64_t>(internal::round_shift(acc), 0, max_value));
    }
  }
  return dst;
}

inline PlaneBuffer resample_plane(const PlaneBuffer& src, const ResampleSpec& h,
                                  const ResampleSpec& v) {
  return resample_plane(src, h, v, filter_bank_for(h), filter_bank_for(v));
}

/// Rescales every plane of `frame` so that luma becomes `target`. Chroma
/// planes keep their subsampling and get siting-aware phase corrections.
inline Frame resample_frame(const Frame& frame, Resolution target) {
  Frame out;
  out.chroma = frame.chroma;
  out.siting = frame.siting;
  const ResampleSpec lh{frame.y.width, target.width, 0.0, Axis::kHorizontal};
  const ResampleSpec lv{frame.y.height, target.height, 0.0, Axis::kVertical};
  out.y = resample_plane(frame.y, lh, lv);
  if (frame.chroma == ChromaFormat::kMono) return out;
  if (!frame.u || !frame.v) fail(ErrorKind::kArgument, "frame is missing chroma planes");

  const Subsampling s = subsampling_of(frame.chroma);
  const Resolution dst_c = chroma_plane_size(target.width, target.height, frame.chroma);
  const PlaneBuffer& u = *frame.u;
  const ResampleSpec ch{u.width, dst_c.width,
                        chroma_phase_correction(frame.siting, Axis::kHorizontal,
                                                s.horizontal,
                                                static_cast<double>(u.width) / dst_c.width),
                        Axis::kHorizontal};
  const ResampleSpec cv{u.height, dst_c.height,
                        chroma_phase_correction(frame.siting, Axis::kVertical,
                                                s.vertical,
                                                static_cast<double>(u.height) / dst_c.height),
                        Axis::kVertical};
  const FilterBank hb = filter_bank_for(ch);
  const FilterBank vb = filter_bank_for(cv);
  out.u = resample_plane(*frame.u, ch, cv, hb, vb);
  out.v = resample_plane(*frame.v, ch, cv, hb, vb);
  return out;
}

inline std::string filter_bank_csv(const FilterBank& bank) {
  std::string out = "phase";
  for (int j = 0; j < bank.taps_per_phase; ++j) out += ",tap" + std::to_string(j);
  out += '\n';
  for (std::size_t p = 0; p < bank.rows.size(); ++p) {
    out += std::to_string(p);
    for (std::int32_t c : bank.rows[p]) out += "," + std::to_string(c);
    out += '\n';
  }
  return out;
}

}  // namespace ctceval

#endif  // CTCEVAL_RESAMPLER_HPP_
