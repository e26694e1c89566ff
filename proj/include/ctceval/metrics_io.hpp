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

// Raw video I/O (planar YUV and Y4M), per-plane and weighted PSNR, and the
// bitstream-size bitrate formula.

#ifndef CTCEVAL_METRICS_IO_HPP_
#define CTCEVAL_METRICS_IO_HPP_

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "ctceval/core_model.hpp"
#include "ctceval/error.hpp"

namespace ctceval {

inline constexpr double kDefaultPsnrCap = 100.0;

struct PlaneBuffer {
  int width = 0;
  int height = 0;
  int bit_depth = 8;
  std::vector<std::uint16_t> samples;  // row-major

  PlaneBuffer() = default;
  PlaneBuffer(int w, int h, int depth, std::uint16_t fill = 0)
      : width(w), height(h), bit_depth(depth),
        samples(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {}

  int max_value() const { return (1 << bit_depth) - 1; }
  std::uint16_t at(int x, int y) const {
    return samples[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                   static_cast<std::size_t>(x)];
  }
  std::uint16_t& at(int x, int y) {
    return samples[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                   static_cast<std::size_t>(x)];
  }

  void validate() const {
    if (width <= 0 || height <= 0) {
      fail(ErrorKind::kArgument, "plane dimensions must be positive");
    }
    if (bit_depth < 1 || bit_depth > 16) {
      fail(ErrorKind::kArgument, "unsupported bit depth");
    }
    if (samples.size() !=
        static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
      fail(ErrorKind::kArgument, "plane sample count does not match dimensions");
    }
    const int limit = max_value();
    for (std::uint16_t s : samples) {
      if (s > limit) {
        fail(ErrorKind::kRange, "sample " + std::to_string(s) + " exceeds " +
                                    std::to_string(bit_depth) + "-bit range");
      }
    }
  }

  friend bool operator==(const PlaneBuffer&, const PlaneBuffer&) = default;
};

inline Resolution chroma_plane_size(int width, int height, ChromaFormat chroma) {
  const Subsampling s = subsampling_of(chroma);
  return {(width + s.horizontal - 1) / s.horizontal,
          (height + s.vertical - 1) / s.vertical};
}

struct Frame {
  PlaneBuffer y;
  std::optional<PlaneBuffer> u;
  std::optional<PlaneBuffer> v;
  ChromaFormat chroma = ChromaFormat::k420;
  ChromaSiting siting = ChromaSiting::kType0Vertical;

  static Frame blank(int width, int height, int bit_depth, ChromaFormat chroma,
                     ChromaSiting siting = ChromaSiting::kType0Vertical) {
    Frame f;
    f.y = PlaneBuffer(width, height, bit_depth);
    f.chroma = chroma;
    f.siting = siting;
    if (chroma != ChromaFormat::kMono) {
      const Resolution c = chroma_plane_size(width, height, chroma);
      const auto mid = static_cast<std::uint16_t>(1 << (bit_depth - 1));
      f.u = PlaneBuffer(c.width, c.height, bit_depth, mid);
      f.v = PlaneBuffer(c.width, c.height, bit_depth, mid);
    }
    return f;
  }

  void validate() const {
    y.validate();
    if (chroma == ChromaFormat::kMono) {
      if (u || v) fail(ErrorKind::kArgument, "mono frame carries chroma planes");
      return;
    }
    if (!u || !v) fail(ErrorKind::kArgument, "frame is missing chroma planes");
    const Resolution c = chroma_plane_size(y.width, y.height, chroma);
    for (const PlaneBuffer* p : {&*u, &*v}) {
      p->validate();
      if (p->width != c.width || p->height != c.height) {
        fail(ErrorKind::kArgument, "chroma plane size does not match format");
      }
      if (p->bit_depth != y.bit_depth) {
        fail(ErrorKind::kArgument, "chroma bit depth differs from luma");
      }
    }
  }

  friend bool operator==(const Frame&, const Frame&) = default;
};

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  friend Rational operator+(Rational a, Rational b) {
    const std::int64_t n = a.num * b.den + b.num * a.den;
    const std::int64_t d = a.den * b.den;
    const std::int64_t g = std::gcd(n, d);
    return {n / g, d / g};
  }
  friend bool operator==(const Rational&, const Rational&) = default;
};

struct WeightTriple {
  Rational y;
  Rational u;
  Rational v;
};

inline WeightTriple plane_weights(ChromaFormat chroma) {
  switch (chroma) {
    case ChromaFormat::k420: return {{7, 8}, {1, 16}, {1, 16}};
    case ChromaFormat::k422: return {{4, 5}, {1, 10}, {1, 10}};
    case ChromaFormat::k444: return {{2, 3}, {1, 6}, {1, 6}};
    case ChromaFormat::kMono: return {{1, 1}, {0, 1}, {0, 1}};
  }
  return {{1, 1}, {0, 1}, {0, 1}};
}

struct PsnrTriple {
  double y_db = 0.0;
  double u_db = 0.0;
  double v_db = 0.0;
  double weighted_db = 0.0;
};

inline double weighted_psnr(double y, double u, double v, ChromaFormat chroma) {
  const WeightTriple w = plane_weights(chroma);
  return w.y.value() * y + w.u.value() * u + w.v.value() * v;
}

inline double psnr_plane(const PlaneBuffer& ref, const PlaneBuffer& dist,
                         double cap_db = kDefaultPsnrCap) {
  if (ref.width != dist.width || ref.height != dist.height) {
    fail(ErrorKind::kArgument, "psnr: plane dimensions differ");
  }
  if (ref.bit_depth != dist.bit_depth) {
    fail(ErrorKind::kArgument, "psnr: plane bit depths differ");
  }
  if (ref.samples.size() != dist.samples.size() || ref.samples.empty()) {
    fail(ErrorKind::kArgument, "psnr: plane sample counts differ or are empty");
  }
  std::uint64_t sse = 0;
  for (std::size_t i = 0; i < ref.samples.size(); ++i) {
    const std::int64_t d = static_cast<std::int64_t>(ref.samples[i]) - dist.samples[i];
    sse += static_cast<std::uint64_t>(d * d);
  }
  if (sse == 0) return cap_db;
  const double mse = static_cast<double>(sse) / static_cast<double>(ref.samples.size());
  const double peak = ref.max_value();
  return std::min(cap_db, 10.0 * std::log10(peak * peak / mse));
}

inline PsnrTriple psnr_frame(const Frame& ref, const Frame& dist,
                             double cap_db = kDefaultPsnrCap) {
  if (ref.chroma != dist.chroma || ref.siting != dist.siting) {
    fail(ErrorKind::kArgument, "psnr: frame formats differ");
  }
  PsnrTriple out;
  out.y_db = psnr_plane(ref.y, dist.y, cap_db);
  if (ref.chroma != ChromaFormat::kMono) {
    if (!ref.u || !ref.v || !dist.u || !dist.v) {
      fail(ErrorKind::kArgument, "psnr: frame is missing chroma planes");
    }
    out.u_db = psnr_plane(*ref.u, *dist.u, cap_db);
    out.v_db = psnr_plane(*ref.v, *dist.v, cap_db);
  }
  out.weighted_db = weighted_psnr(out.y_db, out.u_db, out.v_db, ref.chroma);
  return out;
}

// Mean of per-frame plane PSNRs (dB domain), then the format weighting.
class PsnrPool {
 public:
  explicit PsnrPool(ChromaFormat chroma) : chroma_(chroma) {}

  void add(const PsnrTriple& frame) {
    y_ += frame.y_db;
    u_ += frame.u_db;
    v_ += frame.v_db;
    ++count_;
  }

  int count() const { return count_; }

  PsnrTriple mean() const {
    if (count_ == 0) fail(ErrorKind::kArgument, "psnr: no frames pooled");
    PsnrTriple out;
    out.y_db = y_ / count_;
    out.u_db = u_ / count_;
    out.v_db = v_ / count_;
    out.weighted_db = weighted_psnr(out.y_db, out.u_db, out.v_db, chroma_);
    return out;
  }

 private:
  ChromaFormat chroma_;
  double y_ = 0.0, u_ = 0.0, v_ = 0.0;
  int count_ = 0;
};

inline PsnrTriple psnr_sequence(std::span<const Frame> ref, std::span<const Frame> dist,
                                double cap_db = kDefaultPsnrCap) {
  if (ref.size() != dist.size()) {
    fail(ErrorKind::kArgument, "psnr: frame counts differ");
  }
  if (ref.empty()) fail(ErrorKind::kArgument, "psnr: no frames");
  PsnrPool pool(ref.front().chroma);
  for (std::size_t i = 0; i < ref.size(); ++i) pool.add(psnr_frame(ref[i], dist[i], cap_db));
  return pool.mean();
}

inline double bitrate_kbps(std::uint64_t file_size_bytes, std::int64_t fps_num,
                           std::int64_t fps_denom, std::int64_t frame_num) {
  if (fps_num <= 0 || fps_denom <= 0 || frame_num <= 0) {
    fail(ErrorKind::kArgument, "bitrate: fps and frame count must be positive");
  }
  return static_cast<double>(file_size_bytes) * 8.0 * static_cast<double>(fps_num) /
         (static_cast<double>(fps_denom) * static_cast<double>(frame_num) * 1000.0);
}

// Six decimal places, the precision quality metrics are reported at.
inline std::string format_kbps(double kbps) { return fmt::format("{:.6f}", kbps); }

// ---------------------------------------------------------------------------
// Raw video streams.
//
// Planar raw files store Y, U, V planes per frame; 8-bit samples take one
// byte, deeper samples two bytes little-endian, LSB-aligned. Y4M files carry
// the geometry in the stream header and prefix every frame with "FRAME".

struct VideoFormat {
  int width = 0;
  int height = 0;
  int bit_depth = 8;
  ChromaFormat chroma = ChromaFormat::k420;
  std::int64_t fps_num = 30;
  std::int64_t fps_denom = 1;

  static VideoFormat from(const SequenceInfo& info) {
    return {info.width, info.height, info.bit_depth, info.chroma, info.fps_num,
            info.fps_denom};
  }

  std::size_t bytes_per_sample() const { return bit_depth > 8 ? 2 : 1; }

  std::size_t frame_bytes() const {
    std::size_t samples = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    if (chroma != ChromaFormat::kMono) {
      const Resolution c = chroma_plane_size(width, height, chroma);
      samples += 2 * static_cast<std::size_t>(c.width) * static_cast<std::size_t>(c.height);
    }
    return samples * bytes_per_sample();
  }
};

inline bool is_y4m_path(const std::filesystem::path& path) {
  return path.extension() == ".y4m";
}

namespace internal {

inline std::string y4m_colorspace(const VideoFormat& f) {
  std::string cs;
  switch (f.chroma) {
    case ChromaFormat::k420: cs = "420"; break;
    case ChromaFormat::k422: cs = "422"; break;
    case ChromaFormat::k444: cs = "444"; break;
    case ChromaFormat::kMono: cs = "mono"; break;
  }
  if (f.bit_depth > 8) cs += "p" + std::to_string(f.bit_depth);
  else if (f.chroma == ChromaFormat::k420) cs = "420jpeg";
  return cs;
}

inline void parse_y4m_colorspace(std::string_view cs, VideoFormat& f) {
  f.bit_depth = 8;
  if (auto p = cs.find('p'); p != std::string_view::npos && p + 1 < cs.size() &&
                             std::isdigit(static_cast<unsigned char>(cs[p + 1]))) {
    f.bit_depth = std::stoi(std::string(cs.substr(p + 1)));
    cs = cs.substr(0, p);
  }
  if (cs.starts_with("420")) f.chroma = ChromaFormat::k420;
  else if (cs == "422") f.chroma = ChromaFormat::k422;
  else if (cs == "444") f.chroma = ChromaFormat::k444;
  else if (cs == "mono") f.chroma = ChromaFormat::kMono;
  else fail(ErrorKind::kParse, "unsupported Y4M colorspace '" + std::string(cs) + "'");
}

}  // namespace internal

/// Sequential frame reader for planar raw and Y4M files.
class VideoReader {
 public:
  // For raw input `format` is required. For Y4M it is optional; when given,
  // every header field must agree with it.
  VideoReader(const std::filesystem::path& path, std::optional<VideoFormat> format)
      : path_(path), in_(path, std::ios::binary) {
    if (!in_) fail(ErrorKind::kIo, "cannot open " + path.string());
    y4m_ = peek_y4m();
    if (y4m_) {
      format_ = read_y4m_header();
      if (format && (format->width != format_.width || format->height != format_.height ||
                     format->chroma != format_.chroma ||
                     format->bit_depth != format_.bit_depth)) {
        fail(ErrorKind::kParse, path.string() + ": Y4M header does not match expected format");
      }
    } else {
      if (!format) fail(ErrorKind::kArgument, path.string() + ": raw input needs a format");
      format_ = *format;
      const auto size = std::filesystem::file_size(path);
      if (size % format_.frame_bytes() != 0) {
        fail(ErrorKind::kIo, path.string() + ": file size " + std::to_string(size) +
                                 " is not a whole number of frames");
      }
    }
    if (format_.width <= 0 || format_.height <= 0) {
      fail(ErrorKind::kArgument, path.string() + ": invalid frame size");
    }
  }

  const VideoFormat& format() const { return format_; }

  std::optional<Frame> next() {
    if (y4m_) {
      std::string line;
      if (!std::getline(in_, line)) return std::nullopt;
      if (!line.starts_with("FRAME")) {
        fail(ErrorKind::kParse, path_.string() + ": expected FRAME marker");
      }
    } else if (in_.peek() == std::char_traits<char>::eof()) {
      return std::nullopt;
    }
    std::vector<unsigned char> buf(format_.frame_bytes());
    in_.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (in_.gcount() != static_cast<std::streamsize>(buf.size())) {
      fail(ErrorKind::kIo, path_.string() + ": truncated frame " + std::to_string(index_));
    }
    ++index_;
    return unpack(buf);
  }

  std::vector<Frame> read_all() {
    std::vector<Frame> frames;
    while (auto f = next()) frames.push_back(std::move(*f));
    return frames;
  }

 private:
  bool peek_y4m() {
    char magic[9] = {};
    in_.read(magic, 9);
    const bool y4m = in_.gcount() == 9 && std::string_view(magic, 9) == "YUV4MPEG2";
    in_.clear();
    in_.seekg(0);
    return y4m;
  }

  VideoFormat read_y4m_header() {
    std::string header;
    if (!std::getline(in_, header)) fail(ErrorKind::kParse, "empty Y4M header");
    VideoFormat f;
    f.chroma = ChromaFormat::k420;
    std::size_t pos = 0;
    bool first = true;
    while (pos < header.size()) {
      std::size_t end = header.find(' ', pos);
      if (end == std::string::npos) end = header.size();
      const std::string token = header.substr(pos, end - pos);
      pos = end + 1;
      if (first) { first = false; continue; }
      if (token.empty()) continue;
      try {
        switch (token[0]) {
          case 'W': f.width = std::stoi(token.substr(1)); break;
          case 'H': f.height = std::stoi(token.substr(1)); break;
          case 'C': internal::parse_y4m_colorspace(token.substr(1), f); break;
          case 'F': {
            const auto colon = token.find(':');
            if (colon == std::string::npos) fail(ErrorKind::kParse, "bad Y4M frame rate");
            f.fps_num = std::stoll(token.substr(1, colon - 1));
            f.fps_denom = std::stoll(token.substr(colon + 1));
            break;
          }
          default: break;  // I, A, X: not needed
        }
      } catch (const std::logic_error&) {
        fail(ErrorKind::kParse, path_.string() + ": bad Y4M header token '" + token + "'");
      }
    }
    return f;
  }

  PlaneBuffer unpack_plane(const unsigned char*& p, int w, int h) const {
    PlaneBuffer plane(w, h, format_.bit_depth);
    const int limit = plane.max_value();
    for (auto& s : plane.samples) {
      if (format_.bytes_per_sample() == 1) {
        s = *p++;
      } else {
        s = static_cast<std::uint16_t>(p[0] | (p[1] << 8));
        p += 2;
      }
      if (s > limit) {
        fail(ErrorKind::kRange, path_.string() + ": sample " + std::to_string(s) +
                                    " exceeds " + std::to_string(format_.bit_depth) +
                                    "-bit range in frame " + std::to_string(index_ - 1));
      }
    }
    return plane;
  }

  Frame unpack(const std::vector<unsigned char>& buf) const {
    const unsigned char* p = buf.data();
    Frame f;
    f.chroma = format_.chroma;
    f.y = unpack_plane(p, format_.width, format_.height);
    if (format_.chroma != ChromaFormat::kMono) {
      const Resolution c = chroma_plane_size(format_.width, format_.height, format_.chroma);
      f.u = unpack_plane(p, c.width, c.height);
      f.v = unpack_plane(p, c.width, c.height);
    }
    return f;
  }

  std::filesystem::path path_;
  std::ifstream in_;
  bool y4m_ = false;
  VideoFormat format_;
  int index_ = 0;
};

/// Writes frames as planar raw or Y4M (chosen by file extension).
class VideoWriter {
 public:
  VideoWriter(const std::filesystem::path& path, const VideoFormat& format)
      : out_(path, std::ios::binary | std::ios::trunc), format_(format),
        y4m_(is_y4m_path(path)) {
    if (!out_) fail(ErrorKind::kIo, "cannot create " + path.string());
    if (y4m_) {
      out_ << "YUV4MPEG2 W" << format.width << " H" << format.height << " F"
           << format.fps_num << ':' << format.fps_denom << " Ip A1:1 C"
           << internal::y4m_colorspace(format) << '\n';
    }
  }

  void write(const Frame& frame) {
    if (frame.y.width != format_.width || frame.y.height != format_.height ||
        frame.chroma != format_.chroma || frame.y.bit_depth != format_.bit_depth) {
      fail(ErrorKind::kArgument, "frame does not match writer format");
    }
    if (y4m_) out_ << "FRAME\n";
    write_plane(frame.y);
    if (frame.chroma != ChromaFormat::kMono) {
      write_plane(*frame.u);
      write_plane(*frame.v);
    }
    if (!out_) fail(ErrorKind::kIo, "write failed");
  }

 private:
  void write_plane(const PlaneBuffer& plane) {
    std::vector<unsigned char> buf;
    buf.reserve(plane.samples.size() * format_.bytes_per_sample());
    for (std::uint16_t s : plane.samples) {
      buf.push_back(static_cast<unsigned char>(s & 0xff));
      if (format_.bytes_per_sample() == 2) buf.push_back(static_cast<unsigned char>(s >> 8));
    }
    out_.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  }

  std::ofstream out_;
  VideoFormat format_;
  bool y4m_;
};

inline std::vector<Frame> read_raw_video(const std::filesystem::path& path,
                                         const SequenceInfo& info) {
  VideoReader reader(path, VideoFormat::from(info));
  std::vector<Frame> frames = reader.read_all();
  for (Frame& f : frames) f.siting = info.siting;
  return frames;
}

}  // namespace ctceval

#endif  // CTCEVAL_METRICS_IO_HPP_
