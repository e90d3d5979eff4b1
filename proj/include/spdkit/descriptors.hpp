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

#ifndef SPDKIT_DESCRIPTORS_HPP_
#define SPDKIT_DESCRIPTORS_HPP_

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "spdkit/error.hpp"
#include "spdkit/image.hpp"
#include "spdkit/matrix.hpp"

namespace spdkit {

// A labeled set of same-sized images (e.g. all views of one object). At
// least two images are required so the sample covariance is meaningful.
class ImageSet {
 public:
  ImageSet(std::string set_id, std::string label, std::vector<Image> images)
      : set_id_(std::move(set_id)), label_(std::move(label)), images_(std::move(images)) {
    if (images_.size() < 2) {
      throw DimensionError("ImageSet '" + set_id_ + "': needs at least 2 images, got " +
                           std::to_string(images_.size()));
    }
    const Eigen::Index h = images_.front().height();
    const Eigen::Index w = images_.front().width();
    for (const Image& img : images_) {
      if (img.height() != h || img.width() != w) {
        throw DimensionError("ImageSet '" + set_id_ + "': mixed image sizes");
      }
      if (!img.pixels.allFinite()) {
        throw NumericalError("ImageSet '" + set_id_ + "': non-finite pixel values");
      }
    }
  }

  const std::string& set_id() const { return set_id_; }
  const std::string& label() const { return label_; }
  const std::vector<Image>& images() const { return images_; }
  Eigen::Index size() const { return static_cast<Eigen::Index>(images_.size()); }
  Eigen::Index height() const { return images_.front().height(); }
  Eigen::Index width() const { return images_.front().width(); }

 private:
  std::string set_id_;
  std::string label_;
  std::vector<Image> images_;
};

// A d-by-d partition of the image plane into equal rectangular blocks.
struct BlockGrid {
  int d = 0;

  static BlockGrid for_image(const ImageSet& set, int d) {
    if (d < 2) throw DimensionError("BlockGrid: grid must be at least 2x2, got " + std::to_string(d));
    if (set.height() % d != 0 || set.width() % d != 0) {
      throw DimensionError("BlockGrid: " + std::to_string(set.height()) + "x" +
                           std::to_string(set.width()) + " images not divisible into " +
                           std::to_string(d) + "x" + std::to_string(d) + " blocks");
    }
    return BlockGrid{d};
  }

  int block_count() const { return d * d; }
};

// Extraction knobs. grid == 0 selects the plain covariance descriptor on
// whole images; grid == d >= 2 selects the block-kernel descriptor on a
// d-by-d partition. lambda scales the trace-proportional ridge; abs_floor
// is the fallback ridge when the trace is exactly zero.
struct DescriptorConfig {
  double lambda = 1e-3;
  double abs_floor = 1e-6;
  int grid = 0;
};

// Side length of the descriptor produced for h-by-w images under `cfg`.
inline Eigen::Index descriptor_dim(Eigen::Index h, Eigen::Index w, const DescriptorConfig& cfg) {
  if (cfg.grid == 0) return h * w;
  return static_cast<Eigen::Index>(cfg.grid) * cfg.grid;
}

namespace detail_desc {

inline Eigen::VectorXd flatten_row_major(const Eigen::MatrixXd& m) {
  Eigen::VectorXd v(m.size());
  Eigen::Index k = 0;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) v(k++) = m(r, c);
  }
  return v;
}

// Trace-proportional ridge keeps the spectrum away from zero while staying
// invariant to a global rescaling of the input. A zero-trace (hence zero)
// positive-semidefinite input falls back to the absolute floor.
inline SpdMatrix regularize_psd(const Eigen::MatrixXd& psd, const DescriptorConfig& cfg,
                                const std::string& what) {
  const double tr = psd.trace();
  if (!std::isfinite(tr)) throw NumericalError(what + ": non-finite trace");
  const double ridge = tr > 0.0 ? cfg.lambda * tr : cfg.abs_floor;
  Eigen::MatrixXd reg = psd;
  reg.diagonal().array() += ridge;
  return SpdMatrix(SymMatrix(std::move(reg)));
}

}  // namespace detail_desc

// Sample covariance of the row-major vectorized images, with the divisor n
// (not n-1), plus the trace-proportional ridge from `cfg`.
inline SpdMatrix covariance_descriptor(const ImageSet& set, const DescriptorConfig& cfg = {}) {
  const Eigen::Index dim = set.height() * set.width();
  const Eigen::Index n = set.size();
  Eigen::MatrixXd samples(dim, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    samples.col(i) = detail_desc::flatten_row_major(set.images()[i].pixels);
  }
  const Eigen::VectorXd mean = samples.rowwise().mean();
  samples.colwise() -= mean;
  const Eigen::MatrixXd cov =
      (samples * samples.transpose()) / static_cast<double>(n);
  return detail_desc::regularize_psd(cov, cfg, "covariance_descriptor('" + set.set_id() + "')");
}

// Splits every image of the set into the grid's blocks; block b (row-major
// over the grid) becomes its own image set with id "<set_id>#<b>".
inline std::vector<ImageSet> partition(const ImageSet& set, const BlockGrid& grid) {
  if (grid.d < 2 || set.height() % grid.d != 0 || set.width() % grid.d != 0) {
    BlockGrid::for_image(set, grid.d);  // throws with a precise message
  }
  const Eigen::Index bh = set.height() / grid.d;
  const Eigen::Index bw = set.width() / grid.d;
  std::vector<ImageSet> blocks;
  blocks.reserve(static_cast<std::size_t>(grid.block_count()));
  for (int by = 0; by < grid.d; ++by) {
    for (int bx = 0; bx < grid.d; ++bx) {
      std::vector<Image> block_images;
      block_images.reserve(static_cast<std::size_t>(set.size()));
      for (const Image& img : set.images()) {
        block_images.emplace_back(
            Eigen::MatrixXd(img.pixels.block(by * bh, bx * bw, bh, bw)));
      }
      const int b = by * grid.d + bx;
      blocks.emplace_back(set.set_id() + "#" + std::to_string(b), set.label(),
                          std::move(block_images));
    }
  }
  return blocks;
}

// Block-kernel descriptor: per-block covariance descriptors C_1..C_{d*d},
// then M[i][j] = tr(log C_i log C_j) (each log computed once), and the same
// trace-proportional ridge applied to M. M is a Gram matrix of the matrix
// logs under the Frobenius inner product, hence positive semidefinite.
inline SpdMatrix cspd_descriptor(const ImageSet& set, const DescriptorConfig& cfg) {
  const BlockGrid grid = BlockGrid::for_image(set, cfg.grid);
  const std::vector<ImageSet> blocks = partition(set, grid);
  DescriptorConfig block_cfg = cfg;
  block_cfg.grid = 0;
  std::vector<SymMatrix> logs;
  logs.reserve(blocks.size());
  for (const ImageSet& block : blocks) {
    logs.push_back(matrix_log(covariance_descriptor(block, block_cfg)));
  }
  const Eigen::Index m = static_cast<Eigen::Index>(logs.size());
  Eigen::MatrixXd gram(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i; j < m; ++j) {
      const double v = trace_product(logs[static_cast<std::size_t>(i)],
                                     logs[static_cast<std::size_t>(j)]);
      gram(i, j) = v;
      gram(j, i) = v;
    }
  }
  return detail_desc::regularize_psd(gram, cfg, "cspd_descriptor('" + set.set_id() + "')");
}

// Dispatch on cfg.grid: 0 -> whole-image covariance, d -> block-kernel.
inline SpdMatrix extract_descriptor(const ImageSet& set, const DescriptorConfig& cfg = {}) {
  return cfg.grid == 0 ? covariance_descriptor(set, cfg) : cspd_descriptor(set, cfg);
}

}  // namespace spdkit

#endif  // SPDKIT_DESCRIPTORS_HPP_
