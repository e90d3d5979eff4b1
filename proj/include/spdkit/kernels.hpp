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

#ifndef SPDKIT_KERNELS_HPP_
#define SPDKIT_KERNELS_HPP_

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "spdkit/error.hpp"
#include "spdkit/matrix.hpp"
#include "spdkit/metrics.hpp"

namespace spdkit {

// Relative positive-semidefiniteness slack for Gram certification: the most
// negative eigenvalue may not fall below -psd_tol * max|eigenvalue|.
inline constexpr double psd_tol = 1e-8;

enum class KernelKind { linear, poly, exp, gauss };

// A kernel on SPD matrices built from the log-matrix inner product
// <x,y> = tr(log x . log y):
//   linear  k(x,y) = <x,y>
//   poly    k(x,y) = p(<x,y>),        p(t) = sum_k coeffs[k-1] * t^k
//   exp     k(x,y) = exp(p(<x,y>))
//   gauss   k(x,y) = exp(-beta * ||log x - log y||_F^2)
// The polynomial has no constant term and strictly positive coefficients,
// which keeps every kind positive semidefinite.
struct KernelSpec {
  KernelKind kind = KernelKind::linear;
  std::vector<double> coeffs;  // poly/exp: coefficient of t^k at index k-1
  double beta = 0.0;           // gauss only

  static KernelSpec linear() { return KernelSpec{}; }
  static KernelSpec poly(std::vector<double> c) {
    KernelSpec s{KernelKind::poly, std::move(c), 0.0};
    s.validate();
    return s;
  }
  static KernelSpec exp_poly(std::vector<double> c) {
    KernelSpec s{KernelKind::exp, std::move(c), 0.0};
    s.validate();
    return s;
  }
  static KernelSpec gauss(double beta) {
    KernelSpec s{KernelKind::gauss, {}, beta};
    s.validate();
    return s;
  }

  int degree() const { return static_cast<int>(coeffs.size()); }

  void validate() const {
    if (kind == KernelKind::poly || kind == KernelKind::exp) {
      if (coeffs.empty()) throw Error("kernel " + kind_token() + ": needs at least degree 1");
      for (double c : coeffs) {
        if (!(c > 0.0) || !std::isfinite(c)) {
          throw Error("kernel " + kind_token() + ": coefficients must be positive finite");
        }
      }
    } else if (!coeffs.empty()) {
      throw Error("kernel " + kind_token() + ": takes no polynomial coefficients");
    }
    if (kind == KernelKind::gauss) {
      if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw Error("kernel loge_gauss: beta must be positive finite");
      }
    } else if (beta != 0.0) {
      throw Error("kernel " + kind_token() + ": takes no beta");
    }
  }

  std::string kind_token() const {
    switch (kind) {
      case KernelKind::linear: return "loge_linear";
      case KernelKind::poly: return "loge_poly";
      case KernelKind::exp: return "loge_exp";
      case KernelKind::gauss: return "loge_gauss";
    }
    return "?";
  }

  // Parameter string: "-" for linear, comma-joined coefficients for
  // poly/exp, beta for gauss. Round-trips through parse_params below.
  std::string params_token() const {
    auto fmt = [](double v) {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      return std::string(buf);
    };
    switch (kind) {
      case KernelKind::linear: return "-";
      case KernelKind::poly:
      case KernelKind::exp: {
        std::string out;
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
          if (i) out += ",";
          out += fmt(coeffs[i]);
        }
        return out;
      }
      case KernelKind::gauss: return fmt(beta);
    }
    return "?";
  }

  std::string describe() const {
    return kind == KernelKind::linear ? kind_token() : kind_token() + "[" + params_token() + "]";
  }

  static KernelSpec parse(const std::string& kind_tok, const std::string& params_tok) {
    auto parse_list = [&] {
      std::vector<double> c;
      std::stringstream ss(params_tok);
      std::string item;
      while (std::getline(ss, item, ',')) {
        std::size_t pos = 0;
        double v = 0.0;
        try {
          v = std::stod(item, &pos);
        } catch (const std::exception&) {
          throw IoError("kernel params: bad number '" + item + "'");
        }
        if (pos != item.size()) throw IoError("kernel params: bad number '" + item + "'");
        c.push_back(v);
      }
      return c;
    };
    if (kind_tok == "loge_linear") {
      if (params_tok != "-") throw IoError("kernel loge_linear: unexpected params '" + params_tok + "'");
      return linear();
    }
    if (kind_tok == "loge_poly") return poly(parse_list());
    if (kind_tok == "loge_exp") return exp_poly(parse_list());
    if (kind_tok == "loge_gauss") {
      auto c = parse_list();
      if (c.size() != 1) throw IoError("kernel loge_gauss: expected one beta value");
      return gauss(c[0]);
    }
    throw IoError("unknown kernel kind '" + kind_tok + "'");
  }
};

namespace detail_kernel {

inline double poly_eval(const std::vector<double>& coeffs, double t) {
  // p(t) = t*(c1 + t*(c2 + ... )) — Horner with no constant term.
  double acc = 0.0;
  for (std::size_t i = coeffs.size(); i-- > 0;) acc = coeffs[i] + t * acc;
  return t * acc;
}

}  // namespace detail_kernel

// Kernel value from precomputed matrix logs. All Gram/cross-Gram/eval paths
// funnel through here so identical inputs give bit-identical values.
inline double kernel_from_logs(const KernelSpec& spec, const SymMatrix& lx, const SymMatrix& ly) {
  if (lx.dim() != ly.dim()) {
    throw DimensionError("kernel_from_logs: dimension mismatch " + std::to_string(lx.dim()) +
                         " vs " + std::to_string(ly.dim()));
  }
  double v = 0.0;
  switch (spec.kind) {
    case KernelKind::linear:
      v = trace_product(lx, ly);
      break;
    case KernelKind::poly:
      v = detail_kernel::poly_eval(spec.coeffs, trace_product(lx, ly));
      break;
    case KernelKind::exp: {
      const double arg = detail_kernel::poly_eval(spec.coeffs, trace_product(lx, ly));
      if (arg > exp_arg_cap) {
        throw NumericalError("kernel " + spec.describe() + ": exp argument " +
                             std::to_string(arg) + " overflows");
      }
      v = std::exp(arg);
      break;
    }
    case KernelKind::gauss: {
      const double lem_sq = std::max(0.0, (lx.mat() - ly.mat()).squaredNorm());
      v = std::exp(-spec.beta * lem_sq);
      break;
    }
  }
  if (!std::isfinite(v)) {
    throw NumericalError("kernel " + spec.describe() + ": non-finite value");
  }
  return v;
}

inline double kernel_eval(const KernelSpec& spec, const SpdMatrix& x, const SpdMatrix& y) {
  spec.validate();
  return kernel_from_logs(spec, matrix_log(x), matrix_log(y));
}

inline std::vector<SymMatrix> log_points(const std::vector<SpdMatrix>& points) {
  std::vector<SymMatrix> logs;
  logs.reserve(points.size());
  for (const SpdMatrix& p : points) logs.push_back(matrix_log(p));
  return logs;
}

// Certified kernel matrix over a point list. Entries are exactly symmetric;
// min_eig is recorded from the certification eigendecomposition and must not
// fall below -psd_tol * max|eigenvalue| (all four kernel kinds are provably
// positive semidefinite, so a violation signals a numerical defect).
class GramMatrix {
 public:
  GramMatrix(Eigen::MatrixXd entries, std::vector<std::string> point_ids, KernelSpec kernel)
      : entries_(std::move(entries)), point_ids_(std::move(point_ids)), kernel_(std::move(kernel)) {
    if (entries_.rows() != entries_.cols()) {
      throw DimensionError("GramMatrix: entries not square");
    }
    if (static_cast<Eigen::Index>(point_ids_.size()) != entries_.rows()) {
      throw DimensionError("GramMatrix: " + std::to_string(point_ids_.size()) + " ids for " +
                           std::to_string(entries_.rows()) + " rows");
    }
    const Eigen::VectorXd ev = sym_eigenvalues(SymMatrix(entries_));
    min_eig_ = ev(0);
    const double max_abs = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
    if (min_eig_ < -psd_tol * max_abs) {
      throw NumericalError("kernel " + kernel_.describe() +
                           ": Gram matrix failed positive-semidefiniteness check (min eig " +
                           std::to_string(min_eig_) + ", max |eig| " + std::to_string(max_abs) + ")");
    }
  }

  Eigen::Index size() const { return entries_.rows(); }
  const Eigen::MatrixXd& entries() const { return entries_; }
  const std::vector<std::string>& point_ids() const { return point_ids_; }
  const KernelSpec& kernel() const { return kernel_; }
  double min_eig() const { return min_eig_; }

 private:
  Eigen::MatrixXd entries_;
  std::vector<std::string> point_ids_;
  KernelSpec kernel_;
  double min_eig_ = 0.0;
};

namespace detail_kernel {

inline std::vector<std::string> default_ids(std::size_t m) {
  std::vector<std::string> ids;
  ids.reserve(m);
  for (std::size_t i = 0; i < m; ++i) ids.push_back(std::to_string(i));
  return ids;
}

}  // namespace detail_kernel

inline GramMatrix gram_from_logs(const KernelSpec& spec, const std::vector<SymMatrix>& logs,
                                 std::vector<std::string> ids = {}) {
  spec.validate();
  if (logs.empty()) throw DimensionError("gram_from_logs: no points");
  if (ids.empty()) ids = detail_kernel::default_ids(logs.size());
  const Eigen::Index m = static_cast<Eigen::Index>(logs.size());
  Eigen::MatrixXd entries(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i; j < m; ++j) {
      const double v = kernel_from_logs(spec, logs[static_cast<std::size_t>(i)],
                                        logs[static_cast<std::size_t>(j)]);
      entries(i, j) = v;
      entries(j, i) = v;
    }
  }
  return GramMatrix(std::move(entries), std::move(ids), spec);
}

inline GramMatrix gram_matrix(const KernelSpec& spec, const std::vector<SpdMatrix>& points,
                              std::vector<std::string> ids = {}) {
  return gram_from_logs(spec, log_points(points), std::move(ids));
}

// Rectangular kernel matrix: entry (i, j) = k(train[i], test[j]). Logs are
// computed once per point, as in gram_matrix, so concatenated inputs agree
// with gram_matrix bit-for-bit.
inline Eigen::MatrixXd cross_gram_from_logs(const KernelSpec& spec,
                                            const std::vector<SymMatrix>& train_logs,
                                            const std::vector<SymMatrix>& test_logs) {
  spec.validate();
  Eigen::MatrixXd entries(static_cast<Eigen::Index>(train_logs.size()),
                          static_cast<Eigen::Index>(test_logs.size()));
  for (Eigen::Index i = 0; i < entries.rows(); ++i) {
    for (Eigen::Index j = 0; j < entries.cols(); ++j) {
      entries(i, j) = kernel_from_logs(spec, train_logs[static_cast<std::size_t>(i)],
                                       test_logs[static_cast<std::size_t>(j)]);
    }
  }
  return entries;
}

inline Eigen::MatrixXd cross_gram(const KernelSpec& spec, const std::vector<SpdMatrix>& train,
                                  const std::vector<SpdMatrix>& test) {
  return cross_gram_from_logs(spec, log_points(train), log_points(test));
}

// Median heuristic for the gauss bandwidth: 1 / median of pairwise squared
// log-Euclidean distances over the given points.
inline double suggest_gauss_beta(const std::vector<SpdMatrix>& points) {
  if (points.size() < 2) {
    throw DimensionError("suggest_gauss_beta: needs at least 2 points");
  }
  const std::vector<SymMatrix> logs = log_points(points);
  std::vector<double> sq;
  sq.reserve(points.size() * (points.size() - 1) / 2);
  for (std::size_t i = 0; i < logs.size(); ++i) {
    for (std::size_t j = i + 1; j < logs.size(); ++j) {
      sq.push_back((logs[i].mat() - logs[j].mat()).squaredNorm());
    }
  }
  std::sort(sq.begin(), sq.end());
  const std::size_t m = sq.size();
  const double median = (m % 2 == 1) ? sq[m / 2] : 0.5 * (sq[m / 2 - 1] + sq[m / 2]);
  if (!(median > 0.0)) {
    throw DegeneracyError("suggest_gauss_beta: median pairwise distance is zero");
  }
  return 1.0 / median;
}

}  // namespace spdkit

#endif  // SPDKIT_KERNELS_HPP_
