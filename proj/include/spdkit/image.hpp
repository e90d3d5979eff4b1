// Copyright 2026 the spdkit authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SPDKIT_IMAGE_HPP_
#define SPDKIT_IMAGE_HPP_

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "spdkit/error.hpp"

namespace spdkit {

// Grayscale image; pixels(row, col), intensities normalized to [0, 1] by the
// decoders below.
struct Image {
  Eigen::MatrixXd pixels;

  Image() = default;
  explicit Image(Eigen::MatrixXd p) : pixels(std::move(p)) {}
  Image(Eigen::Index h, Eigen::Index w) : pixels(Eigen::MatrixXd::Zero(h, w)) {}

  Eigen::Index height() const { return pixels.rows(); }
  Eigen::Index width() const { return pixels.cols(); }
};

namespace detail_pnm {

// Next header token, skipping whitespace and '#' comments.
inline std::string next_token(std::istream& in, const std::string& context) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  if (tok.empty()) throw IoError("PNM: truncated header in " + context);
  return tok;
}

inline long parse_uint(std::istream& in, const std::string& context) {
  const std::string tok = next_token(in, context);
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(tok, &pos);
  } catch (const std::exception&) {
    throw IoError("PNM: expected integer, got '" + tok + "' in " + context);
  }
  if (pos != tok.size() || v < 0) {
    throw IoError("PNM: expected integer, got '" + tok + "' in " + context);
  }
  return v;
}

inline double read_sample(std::istream& in, bool binary, bool two_byte,
                          const std::string& context) {
  if (!binary) return static_cast<double>(parse_uint(in, context));
  int hi = in.get();
  if (hi == EOF) throw IoError("PNM: truncated raster in " + context);
  if (!two_byte) return static_cast<double>(hi);
  int lo = in.get();
  if (lo == EOF) throw IoError("PNM: truncated raster in " + context);
  return static_cast<double>((hi << 8) | lo);  // big-endian per the format
}

}  // namespace detail_pnm

// Decodes PGM (P2 ASCII / P5 binary) and PPM (P3 / P6). Color input is
// reduced to luma with weights 0.299 / 0.587 / 0.114; all intensities are
// scaled by the declared maxval into [0, 1].
inline Image decode_pnm(std::istream& in, const std::string& context = "<stream>") {
  const std::string magic = detail_pnm::next_token(in, context);
  bool binary, color;
  if (magic == "P2") {
    binary = false;
    color = false;
  } else if (magic == "P5") {
    binary = true;
    color = false;
  } else if (magic == "P3") {
    binary = false;
    color = true;
  } else if (magic == "P6") {
    binary = true;
    color = true;
  } else {
    throw IoError("PNM: unsupported magic '" + magic + "' in " + context);
  }
  const long w = detail_pnm::parse_uint(in, context);
  const long h = detail_pnm::parse_uint(in, context);
  const long maxval = detail_pnm::parse_uint(in, context);
  if (w <= 0 || h <= 0) {
    throw IoError("PNM: zero-sized image (" + std::to_string(w) + "x" +
                  std::to_string(h) + ") in " + context);
  }
  if (maxval < 1 || maxval > 65535) {
    throw IoError("PNM: maxval " + std::to_string(maxval) + " out of range in " + context);
  }
  const bool two_byte = maxval > 255;
  // The header ends with exactly one whitespace byte before a binary raster;
  // the token reader has already consumed it.
  Image img(h, w);
  // Divide rather than multiply by a precomputed reciprocal: IEEE division
  // keeps v / maxval correctly rounded, so 8-bit data round-trips bitwise.
  const double denom = static_cast<double>(maxval);
  for (long y = 0; y < h; ++y) {
    for (long x = 0; x < w; ++x) {
      double v;
      if (color) {
        const double r = detail_pnm::read_sample(in, binary, two_byte, context);
        const double g = detail_pnm::read_sample(in, binary, two_byte, context);
        const double b = detail_pnm::read_sample(in, binary, two_byte, context);
        v = 0.299 * r + 0.587 * g + 0.114 * b;
      } else {
        v = detail_pnm::read_sample(in, binary, two_byte, context);
      }
      img.pixels(y, x) = v / denom;
    }
  }
  return img;
}

inline Image decode_pnm_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open image file " + path.string());
  return decode_pnm(in, path.string());
}

// Writes binary PGM (P5, maxval 255), clamping and rounding [0, 1] pixels.
inline void encode_pgm(const Image& img, std::ostream& out) {
  out << "P5\n" << img.width() << " " << img.height() << "\n255\n";
  for (Eigen::Index y = 0; y < img.height(); ++y) {
    for (Eigen::Index x = 0; x < img.width(); ++x) {
      const double v = std::clamp(img.pixels(y, x), 0.0, 1.0);
      out.put(static_cast<char>(static_cast<std::uint8_t>(std::lround(v * 255.0))));
    }
  }
  if (!out) throw IoError("PGM: write failed");
}

inline void encode_pgm_file(const Image& img, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot create image file " + path.string());
  encode_pgm(img, out);
}

// Bilinear resample with half-pixel-centered sampling (align-centers):
// source coordinate of target pixel t is (t + 0.5) * size_ratio - 0.5,
// clamped at the borders. Affine in pixel values by construction.
inline Image bilinear_resize(const Image& img, Eigen::Index target_h,
                             Eigen::Index target_w) {
  if (img.height() < 1 || img.width() < 1) {
    throw DimensionError("bilinear_resize: empty source image");
  }
  if (target_h < 1 || target_w < 1) {
    throw DimensionError("bilinear_resize: empty target size");
  }
  if (img.height() == target_h && img.width() == target_w) return img;

  Image out(target_h, target_w);
  const double sy = static_cast<double>(img.height()) / static_cast<double>(target_h);
  const double sx = static_cast<double>(img.width()) / static_cast<double>(target_w);
  for (Eigen::Index ty = 0; ty < target_h; ++ty) {
    const double fy = std::clamp((ty + 0.5) * sy - 0.5, 0.0,
                                 static_cast<double>(img.height() - 1));
    const Eigen::Index y0 = static_cast<Eigen::Index>(std::floor(fy));
    const Eigen::Index y1 = std::min(y0 + 1, img.height() - 1);
    const double wy = fy - static_cast<double>(y0);
    for (Eigen::Index tx = 0; tx < target_w; ++tx) {
      const double fx = std::clamp((tx + 0.5) * sx - 0.5, 0.0,
                                   static_cast<double>(img.width() - 1));
      const Eigen::Index x0 = static_cast<Eigen::Index>(std::floor(fx));
      const Eigen::Index x1 = std::min(x0 + 1, img.width() - 1);
      const double wx = fx - static_cast<double>(x0);
      out.pixels(ty, tx) = (1.0 - wy) * ((1.0 - wx) * img.pixels(y0, x0) +
                                         wx * img.pixels(y0, x1)) +
                           wy * ((1.0 - wx) * img.pixels(y1, x0) +
                                 wx * img.pixels(y1, x1));
    }
  }
  return out;
}

}  // namespace spdkit

#endif  // SPDKIT_IMAGE_HPP_
