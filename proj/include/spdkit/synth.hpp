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

#ifndef SPDKIT_SYNTH_HPP_
#define SPDKIT_SYNTH_HPP_

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "spdkit/error.hpp"
#include "spdkit/image.hpp"
#include "spdkit/rng.hpp"

namespace spdkit {

// Synthetic image-set dataset with controllable class separation.
//
// Class c gets a base intensity mean_c spread across [0.2, 0.8] and two
// fixed random +-1 spatial patterns. Each image i of a set mixes the two
// patterns with rotating weights sqrt(2)*(cos th, sin th), th = 2*pi*i/N plus
// a per-set phase, and adds uniform pixel noise of standard deviation
// noise_std. Equally spaced rotation weights have zero sample mean and unit
// sample covariance, so all sets of a class share (up to noise) one
// covariance descriptor, while different classes get descriptors built from
// different patterns. Class means differ by 0.6/(classes-1), which for small
// class counts exceeds 5x the intra-class pixel standard deviation
// sqrt(2*pattern_amp^2 + noise_std^2), and no pixel leaves [0, 1].
struct SynthConfig {
  int classes = 3;
  int sets_per_class = 5;
  int images_per_set = 20;
  int size = 24;
  std::uint64_t seed = 42;
  double pattern_amp = 0.03;
  double noise_std = 0.01;

  void validate() const {
    if (classes < 1) throw Error("synth: classes must be >= 1");
    if (sets_per_class < 1) throw Error("synth: sets-per-class must be >= 1");
    if (images_per_set < 3) throw Error("synth: images-per-set must be >= 3");
    if (size < 2) throw Error("synth: size must be >= 2");
    if (!(pattern_amp > 0.0) || !(noise_std >= 0.0)) {
      throw Error("synth: pattern_amp must be > 0 and noise_std >= 0");
    }
    if (0.2 - bound() < 0.0 || 0.8 + bound() > 1.0) {
      throw Error("synth: pattern_amp/noise_std too large, pixels would clip");
    }
  }

  double class_mean(int c) const {
    return classes == 1 ? 0.5 : 0.2 + 0.6 * static_cast<double>(c) / (classes - 1);
  }

 private:
  // Worst-case deviation from the class mean: |w0| + |w1| <= 2 for the
  // rotation weights, and uniform noise spans +- sqrt(3) * noise_std.
  double bound() const { return 2.0 * pattern_amp + std::sqrt(3.0) * noise_std; }
};

namespace detail_synth {

inline std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t tag, std::uint64_t a,
                              std::uint64_t b = 0) {
  return mix64(mix64(mix64(seed ^ mix64(tag)) ^ mix64(a)) ^ mix64(b));
}

inline std::vector<Eigen::MatrixXd> class_patterns(const SynthConfig& cfg, int c) {
  Xoshiro256ss rng(sub_seed(cfg.seed, 1, static_cast<std::uint64_t>(c)));
  std::vector<Eigen::MatrixXd> patterns;
  for (int r = 0; r < 2; ++r) {
    Eigen::MatrixXd u(cfg.size, cfg.size);
    for (Eigen::Index y = 0; y < cfg.size; ++y) {
      for (Eigen::Index x = 0; x < cfg.size; ++x) {
        u(y, x) = (rng.next() >> 63) ? 1.0 : -1.0;
      }
    }
    patterns.push_back(std::move(u));
  }
  return patterns;
}

inline std::string padded(const char* prefix, int i, int width) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%0*d", prefix, width, i);
  return buf;
}

}  // namespace detail_synth

inline std::vector<Image> synth_image_set(const SynthConfig& cfg, int c, int s) {
  const std::vector<Eigen::MatrixXd> u = detail_synth::class_patterns(cfg, c);
  Xoshiro256ss rng(detail_synth::sub_seed(cfg.seed, 2, static_cast<std::uint64_t>(c),
                                          static_cast<std::uint64_t>(s)));
  const double phase = rng.uniform(0.0, 2.0 * M_PI);
  const double mean = cfg.class_mean(c);
  const double noise_half = std::sqrt(3.0) * cfg.noise_std;

  std::vector<Image> images;
  images.reserve(static_cast<std::size_t>(cfg.images_per_set));
  for (int i = 0; i < cfg.images_per_set; ++i) {
    const double theta = 2.0 * M_PI * i / cfg.images_per_set + phase;
    const double w0 = std::sqrt(2.0) * std::cos(theta);
    const double w1 = std::sqrt(2.0) * std::sin(theta);
    Image img(cfg.size, cfg.size);
    for (Eigen::Index y = 0; y < cfg.size; ++y) {
      for (Eigen::Index x = 0; x < cfg.size; ++x) {
        img.pixels(y, x) = mean + cfg.pattern_amp * (w0 * u[0](y, x) + w1 * u[1](y, x)) +
                           rng.uniform(-noise_half, noise_half);
      }
    }
    images.push_back(std::move(img));
  }
  return images;
}

// Writes the dataset as a `root/<class>/<set>/*.pgm` tree.
inline void generate_synth_dataset(const SynthConfig& cfg, const std::filesystem::path& root) {
  cfg.validate();
  std::filesystem::create_directories(root);
  for (int c = 0; c < cfg.classes; ++c) {
    const std::filesystem::path class_dir = root / detail_synth::padded("class", c, 2);
    for (int s = 0; s < cfg.sets_per_class; ++s) {
      const std::filesystem::path set_dir = class_dir / detail_synth::padded("set", s, 2);
      std::filesystem::create_directories(set_dir);
      const std::vector<Image> images = synth_image_set(cfg, c, s);
      for (int i = 0; i < cfg.images_per_set; ++i) {
        encode_pgm_file(images[static_cast<std::size_t>(i)],
                        set_dir / (detail_synth::padded("img", i, 3) + ".pgm"));
      }
    }
  }
}

}  // namespace spdkit

#endif  // SPDKIT_SYNTH_HPP_
