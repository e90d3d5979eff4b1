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

#ifndef SPDKIT_CLASSIFIERS_HPP_
#define SPDKIT_CLASSIFIERS_HPP_

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "spdkit/error.hpp"
#include "spdkit/kernels.hpp"
#include "spdkit/matrix.hpp"
#include "spdkit/metrics.hpp"

namespace spdkit {

enum class ClassifierVariant { nn_airm, nn_loged, cdl_lda, logeksr };

inline std::string variant_token(ClassifierVariant v) {
  switch (v) {
    case ClassifierVariant::nn_airm: return "nn-airm";
    case ClassifierVariant::nn_loged: return "nn-loged";
    case ClassifierVariant::cdl_lda: return "cdl";
    case ClassifierVariant::logeksr: return "logeksr";
  }
  return "?";
}

inline ClassifierVariant parse_variant(const std::string& tok) {
  if (tok == "nn-airm") return ClassifierVariant::nn_airm;
  if (tok == "nn-loged") return ClassifierVariant::nn_loged;
  if (tok == "cdl") return ClassifierVariant::cdl_lda;
  if (tok == "logeksr") return ClassifierVariant::logeksr;
  throw Error("unknown classifier '" + tok + "' (expected nn-airm, nn-loged, cdl, logeksr)");
}

struct HyperParams {
  double lda_ridge_scale = 1e-4;  // ridge on within-class scatter, scaled by tr/m
  int sparsity = 0;               // sparse-code budget; 0 = min(10, train size - 1)
};

// Training or evaluation data: one SPD point per image set, with its class
// label and set id.
struct LabeledDescriptors {
  std::vector<SpdMatrix> points;
  std::vector<std::string> labels;
  std::vector<std::string> ids;

  void validate_for_training() const {
    if (points.size() != labels.size() || points.size() != ids.size()) {
      throw DimensionError("LabeledDescriptors: points/labels/ids length mismatch");
    }
    if (points.empty()) throw DimensionError("LabeledDescriptors: empty training set");
    const Eigen::Index dim = points.front().dim();
    for (const SpdMatrix& p : points) {
      if (p.dim() != dim) throw DimensionError("LabeledDescriptors: mixed point dimensions");
    }
    std::vector<std::string> distinct;
    for (const std::string& l : labels) {
      if (std::find(distinct.begin(), distinct.end(), l) == distinct.end()) distinct.push_back(l);
    }
    if (distinct.size() < 2) {
      throw DegeneracyError("training needs at least 2 distinct classes, got " +
                            std::to_string(distinct.size()));
    }
  }
};

namespace detail_clf {

// Class names in order of first appearance (keeps label renaming equivariant),
// plus each point's index into that list.
inline std::vector<std::string> class_order(const std::vector<std::string>& labels,
                                            std::vector<int>* point_class) {
  std::vector<std::string> classes;
  point_class->clear();
  point_class->reserve(labels.size());
  for (const std::string& l : labels) {
    auto it = std::find(classes.begin(), classes.end(), l);
    if (it == classes.end()) {
      classes.push_back(l);
      it = classes.end() - 1;
    }
    point_class->push_back(static_cast<int>(it - classes.begin()));
  }
  return classes;
}

}  // namespace detail_clf

// Nearest-neighbor state for both the affine-invariant and log-Euclidean
// distance variants; the latter caches training-point logs.
struct NnState {
  bool use_airm = true;
  std::vector<SpdMatrix> points;
  std::vector<SymMatrix> logs;  // filled only for the log-Euclidean variant
  std::vector<std::string> ids;
  std::vector<int> point_class;
  std::vector<std::string> classes;
};

// Kernel discriminant analysis state: training Gram statistics for centering
// test kernel vectors, discriminant coefficients, and per-class means of the
// projected training points.
struct CdlState {
  KernelSpec kernel;
  double ridge_scale = 0.0;
  std::vector<SpdMatrix> points;
  std::vector<SymMatrix> logs;
  std::vector<std::string> ids;
  Eigen::VectorXd gram_col_means;
  double gram_grand_mean = 0.0;
  Eigen::MatrixXd alphas;       // m x (classes-1) discriminant coefficients
  Eigen::MatrixXd class_means;  // (classes-1) x classes projected class means
  std::vector<int> point_class;
  std::vector<std::string> classes;
};

// Kernel sparse-coding state: the dictionary is the training set itself;
// everything needed at inference is expressible through Gram entries.
struct LogeksrState {
  KernelSpec kernel;
  std::vector<SpdMatrix> points;
  std::vector<SymMatrix> logs;
  std::vector<std::string> ids;
  Eigen::MatrixXd gram;
  std::vector<int> point_class;
  std::vector<std::string> classes;
  int sparsity = 0;
};

struct TrainedModel {
  ClassifierVariant variant;
  std::variant<NnState, CdlState, LogeksrState> state;

  Eigen::Index dim() const {
    return std::visit([](const auto& s) { return s.points.front().dim(); }, state);
  }
  const std::vector<std::string>& classes() const {
    return std::visit([](const auto& s) -> const std::vector<std::string>& { return s.classes; },
                      state);
  }
};

namespace detail_clf {

inline TrainedModel train_nn(ClassifierVariant variant, const LabeledDescriptors& data) {
  NnState s;
  s.use_airm = variant == ClassifierVariant::nn_airm;
  s.points = data.points;
  s.ids = data.ids;
  s.classes = class_order(data.labels, &s.point_class);
  if (!s.use_airm) s.logs = log_points(s.points);
  return TrainedModel{variant, std::move(s)};
}

// Double-centers a Gram matrix: K~ = H K H with H = I - (1/m) 1 1^T.
inline Eigen::MatrixXd double_center(const Eigen::MatrixXd& k, Eigen::VectorXd* col_means,
                                     double* grand_mean) {
  const Eigen::Index m = k.rows();
  *col_means = k.colwise().mean();
  *grand_mean = col_means->mean();
  Eigen::MatrixXd kt = k;
  kt.rowwise() -= col_means->transpose();
  kt.colwise() -= *col_means;
  kt.array() += *grand_mean;
  return kt;
}

inline TrainedModel train_cdl(const LabeledDescriptors& data, const KernelSpec& spec,
                              const HyperParams& hyper) {
  CdlState s;
  s.kernel = spec;
  s.ridge_scale = hyper.lda_ridge_scale;
  s.points = data.points;
  s.logs = log_points(s.points);
  s.ids = data.ids;
  s.classes = class_order(data.labels, &s.point_class);
  const Eigen::Index m = static_cast<Eigen::Index>(s.points.size());
  const int n_classes = static_cast<int>(s.classes.size());

  const GramMatrix gram = gram_from_logs(spec, s.logs, data.ids);
  const Eigen::MatrixXd kt =
      double_center(gram.entries(), &s.gram_col_means, &s.gram_grand_mean);

  // W averages within each class: W[i][j] = 1/m_c when i, j share class c.
  std::vector<double> class_count(static_cast<std::size_t>(n_classes), 0.0);
  for (int c : s.point_class) class_count[static_cast<std::size_t>(c)] += 1.0;
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      if (s.point_class[static_cast<std::size_t>(i)] == s.point_class[static_cast<std::size_t>(j)]) {
        w(i, j) = 1.0 / class_count[static_cast<std::size_t>(s.point_class[static_cast<std::size_t>(i)])];
      }
    }
  }

  // Between-class scatter B = K~ W K~ and within-class V = K~ (I - W) K~,
  // both positive semidefinite since W and I - W are projections.
  Eigen::MatrixXd between = kt * w * kt;
  Eigen::MatrixXd within = kt * (Eigen::MatrixXd::Identity(m, m) - w) * kt;
  between = 0.5 * (between + between.transpose()).eval();
  within = 0.5 * (within + within.transpose()).eval();

  const double tr_within = within.trace();
  double ridge = hyper.lda_ridge_scale * tr_within / static_cast<double>(m);
  if (!(ridge > 0.0)) {
    // Zero within-class scatter (e.g. singleton classes): fall back to a
    // floor that keeps the regularized scatter positive definite.
    ridge = 1e-12 * std::max(1.0, between.trace());
  }
  within.diagonal().array() += ridge;

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(between, within);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("kernel discriminant training: generalized eigensolver failed");
  }
  const int q = n_classes - 1;
  // Eigenvalues come out ascending; the top q directions are the last columns.
  s.alphas.resize(m, q);
  for (int j = 0; j < q; ++j) {
    s.alphas.col(j) = solver.eigenvectors().col(m - 1 - j);
  }
  if (!s.alphas.allFinite()) {
    throw NumericalError("kernel discriminant training: non-finite discriminant directions");
  }

  // Column i of K~ is the centered kernel vector of training point i, so the
  // projected training points are alphas^T K~.
  const Eigen::MatrixXd projections = s.alphas.transpose() * kt;
  s.class_means = Eigen::MatrixXd::Zero(q, n_classes);
  for (Eigen::Index i = 0; i < m; ++i) {
    s.class_means.col(s.point_class[static_cast<std::size_t>(i)]) += projections.col(i);
  }
  for (int c = 0; c < n_classes; ++c) {
    s.class_means.col(c) /= class_count[static_cast<std::size_t>(c)];
  }
  return TrainedModel{ClassifierVariant::cdl_lda, std::move(s)};
}

inline TrainedModel train_logeksr(const LabeledDescriptors& data, const KernelSpec& spec,
                                  const HyperParams& hyper) {
  LogeksrState s;
  s.kernel = spec;
  s.points = data.points;
  s.logs = log_points(s.points);
  s.ids = data.ids;
  s.classes = class_order(data.labels, &s.point_class);
  const GramMatrix gram = gram_from_logs(spec, s.logs, data.ids);
  s.gram = gram.entries();

  const Eigen::Index m = s.gram.rows();
  const double diag_floor = 1e-12 * std::max(1.0, s.gram.diagonal().maxCoeff());
  for (Eigen::Index i = 0; i < m; ++i) {
    if (s.gram(i, i) <= diag_floor) {
      throw DegeneracyError("sparse-coding dictionary atom '" +
                            data.ids[static_cast<std::size_t>(i)] +
                            "' has (near-)zero kernel norm; sparse coding undefined");
    }
  }
  s.sparsity = hyper.sparsity > 0
                   ? std::min<int>(hyper.sparsity, static_cast<int>(m))
                   : std::min<int>(10, static_cast<int>(m) - 1);
  return TrainedModel{ClassifierVariant::logeksr, std::move(s)};
}

inline int nn_predict_class(const NnState& s, const SpdMatrix& x) {
  double best = std::numeric_limits<double>::infinity();
  int best_idx = 0;
  if (s.use_airm) {
    const SpdMatrix factor = airm_factor(x);
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      const double d = airm_distance_with_factor(factor, s.points[i]);
      if (d < best) {
        best = d;
        best_idx = static_cast<int>(i);
      }
    }
  } else {
    const SymMatrix lx = matrix_log(x);
    for (std::size_t i = 0; i < s.logs.size(); ++i) {
      const double d = (s.logs[i].mat() - lx.mat()).norm();
      if (d < best) {
        best = d;
        best_idx = static_cast<int>(i);
      }
    }
  }
  return s.point_class[static_cast<std::size_t>(best_idx)];
}

inline int cdl_predict_class(const CdlState& s, const SpdMatrix& x) {
  const SymMatrix lx = matrix_log(x);
  const Eigen::Index m = static_cast<Eigen::Index>(s.logs.size());
  Eigen::VectorXd kx(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    kx(i) = kernel_from_logs(s.kernel, s.logs[static_cast<std::size_t>(i)], lx);
  }
  // Center the test kernel vector consistently with the training Gram:
  // kx~[i] = kx[i] - mean(kx) - colmean_i(K) + grandmean(K).
  const double kx_mean = kx.mean();
  const Eigen::VectorXd kx_centered =
      kx.array() - kx_mean - s.gram_col_means.array() + s.gram_grand_mean;
  const Eigen::VectorXd z = s.alphas.transpose() * kx_centered;

  double best = std::numeric_limits<double>::infinity();
  int best_class = 0;
  for (Eigen::Index c = 0; c < s.class_means.cols(); ++c) {
    const double d = (z - s.class_means.col(c)).norm();
    if (d < best) {
      best = d;
      best_class = static_cast<int>(c);
    }
  }
  return best_class;
}

struct SparseCode {
  std::vector<int> support;
  Eigen::VectorXd coeffs;
  double kxx = 0.0;
  Eigen::VectorXd kx;
};

// Kernel orthogonal matching pursuit against the training dictionary: greedy
// atom selection by squared correlation over kernel norm, with a full
// least-squares re-solve on the support each round.
inline SparseCode solve_sparse_code(const LogeksrState& s, const SymMatrix& lx) {
  const Eigen::Index m = s.gram.rows();
  SparseCode code;
  code.kx.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    code.kx(i) = kernel_from_logs(s.kernel, s.logs[static_cast<std::size_t>(i)], lx);
  }
  code.kxx = kernel_from_logs(s.kernel, lx, lx);

  const double tol = 1e-12 * std::max(code.kxx, 1.0);
  std::vector<bool> active(static_cast<std::size_t>(m), false);
  double residual_sq = code.kxx;

  while (static_cast<int>(code.support.size()) < s.sparsity && residual_sq > tol) {
    // Correlation of each unused atom with the current residual, from Gram
    // entries alone: c_i = k(x, d_i) - sum_j alpha_j G(i, j).
    double best_score = 0.0;
    int best_atom = -1;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (active[static_cast<std::size_t>(i)]) continue;
      double corr = code.kx(i);
      for (std::size_t j = 0; j < code.support.size(); ++j) {
        corr -= code.coeffs(static_cast<Eigen::Index>(j)) * s.gram(i, code.support[j]);
      }
      const double score = corr * corr / s.gram(i, i);
      if (score > best_score) {
        best_score = score;
        best_atom = static_cast<int>(i);
      }
    }
    if (best_atom < 0 || best_score <= tol) break;

    code.support.push_back(best_atom);
    active[static_cast<std::size_t>(best_atom)] = true;

    const Eigen::Index k = static_cast<Eigen::Index>(code.support.size());
    Eigen::MatrixXd gss(k, k);
    Eigen::VectorXd kxs(k);
    for (Eigen::Index a = 0; a < k; ++a) {
      kxs(a) = code.kx(code.support[static_cast<std::size_t>(a)]);
      for (Eigen::Index b = 0; b < k; ++b) {
        gss(a, b) = s.gram(code.support[static_cast<std::size_t>(a)],
                           code.support[static_cast<std::size_t>(b)]);
      }
    }
    code.coeffs = gss.ldlt().solve(kxs);
    if (!code.coeffs.allFinite()) {
      throw NumericalError("sparse coding: least-squares solve on support failed");
    }
    residual_sq = code.kxx - 2.0 * code.coeffs.dot(kxs) + code.coeffs.dot(gss * code.coeffs);
  }
  return code;
}

inline int logeksr_predict_class(const LogeksrState& s, const SpdMatrix& x) {
  const SymMatrix lx = matrix_log(x);
  const SparseCode code = solve_sparse_code(s, lx);

  double best = std::numeric_limits<double>::infinity();
  int best_class = 0;
  for (int c = 0; c < static_cast<int>(s.classes.size()); ++c) {
    // Residual with the code restricted to class-c atoms:
    // ||phi(x) - Phi alpha_c||^2 from Gram entries.
    double lin = 0.0;
    double quad = 0.0;
    for (std::size_t a = 0; a < code.support.size(); ++a) {
      const int ia = code.support[a];
      if (s.point_class[static_cast<std::size_t>(ia)] != c) continue;
      lin += code.coeffs(static_cast<Eigen::Index>(a)) * code.kx(ia);
      for (std::size_t b = 0; b < code.support.size(); ++b) {
        const int ib = code.support[b];
        if (s.point_class[static_cast<std::size_t>(ib)] != c) continue;
        quad += code.coeffs(static_cast<Eigen::Index>(a)) *
                code.coeffs(static_cast<Eigen::Index>(b)) * s.gram(ia, ib);
      }
    }
    const double residual = code.kxx - 2.0 * lin + quad;
    if (residual < best) {
      best = residual;
      best_class = c;
    }
  }
  return best_class;
}

}  // namespace detail_clf

inline TrainedModel train(ClassifierVariant variant, const LabeledDescriptors& data,
                          const std::optional<KernelSpec>& spec = std::nullopt,
                          const HyperParams& hyper = {}) {
  data.validate_for_training();
  switch (variant) {
    case ClassifierVariant::nn_airm:
    case ClassifierVariant::nn_loged:
      return detail_clf::train_nn(variant, data);
    case ClassifierVariant::cdl_lda:
      if (!spec) throw Error("cdl training requires a kernel spec");
      return detail_clf::train_cdl(data, *spec, hyper);
    case ClassifierVariant::logeksr:
      if (!spec) throw Error("logeksr training requires a kernel spec");
      return detail_clf::train_logeksr(data, *spec, hyper);
  }
  throw Error("unknown classifier variant");
}

inline std::string predict(const TrainedModel& model, const SpdMatrix& x) {
  if (x.dim() != model.dim()) {
    throw DimensionError("predict: query dim " + std::to_string(x.dim()) +
                         " vs training dim " + std::to_string(model.dim()));
  }
  int c = 0;
  if (const auto* nn = std::get_if<NnState>(&model.state)) {
    c = detail_clf::nn_predict_class(*nn, x);
  } else if (const auto* cdl = std::get_if<CdlState>(&model.state)) {
    c = detail_clf::cdl_predict_class(*cdl, x);
  } else {
    c = detail_clf::logeksr_predict_class(std::get<LogeksrState>(model.state), x);
  }
  return model.classes()[static_cast<std::size_t>(c)];
}

// RKHS reconstruction residual ||phi(x) - sum_i coeffs[i] phi(d_support[i])||^2
// for a sparse-coding model, computed from kernel evaluations alone.
inline double rkhs_residual(const TrainedModel& model, const SpdMatrix& x,
                            const std::vector<int>& support, const Eigen::VectorXd& coeffs) {
  const auto* s = std::get_if<LogeksrState>(&model.state);
  if (s == nullptr) throw Error("rkhs_residual: model is not a sparse-coding model");
  if (static_cast<Eigen::Index>(support.size()) != coeffs.size()) {
    throw DimensionError("rkhs_residual: support/coeffs length mismatch");
  }
  const SymMatrix lx = matrix_log(x);
  const double kxx = kernel_from_logs(s->kernel, lx, lx);
  double lin = 0.0;
  double quad = 0.0;
  for (std::size_t a = 0; a < support.size(); ++a) {
    const int ia = support[a];
    if (ia < 0 || ia >= static_cast<int>(s->points.size())) {
      throw DimensionError("rkhs_residual: support index out of range");
    }
    lin += coeffs(static_cast<Eigen::Index>(a)) *
           kernel_from_logs(s->kernel, s->logs[static_cast<std::size_t>(ia)], lx);
    for (std::size_t b = 0; b < support.size(); ++b) {
      quad += coeffs(static_cast<Eigen::Index>(a)) * coeffs(static_cast<Eigen::Index>(b)) *
              s->gram(ia, support[b]);
    }
  }
  return kxx - 2.0 * lin + quad;
}

}  // namespace spdkit

#endif  // SPDKIT_CLASSIFIERS_HPP_
