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

#ifndef SPDKIT_METRICS_HPP_
#define SPDKIT_METRICS_HPP_

#include <cmath>
#include <string>
#include <utility>

#include "spdkit/matrix.hpp"

namespace spdkit {

// Two tangent vectors live at the same base point when their base matrices
// agree entrywise within this absolute tolerance. Nearly-equal base points
// are a caller bug worth catching, not averaging over.
inline constexpr double base_point_tol = 1e-12;

// A tangent vector u at base point P of the SPD manifold.
class TangentVector {
 public:
  TangentVector(SpdMatrix at, SymMatrix vec)
      : at_(std::move(at)), vec_(std::move(vec)) {
    if (at_.dim() != vec_.dim()) {
      throw DimensionError("TangentVector: base point dim " + std::to_string(at_.dim()) +
                           " != vector dim " + std::to_string(vec_.dim()));
    }
  }

  const SpdMatrix& at() const { return at_; }
  const SymMatrix& vec() const { return vec_; }
  Eigen::Index dim() const { return at_.dim(); }

 private:
  SpdMatrix at_;
  SymMatrix vec_;
};

// Affine-invariant inner product <u, v>_P = tr(P^-1 u P^-1 v).
inline double airm_inner(const TangentVector& u, const TangentVector& v) {
  if (u.dim() != v.dim()) {
    throw DimensionError("airm_inner: dimension mismatch " + std::to_string(u.dim()) +
                         " vs " + std::to_string(v.dim()));
  }
  const double base_gap =
      (u.at().mat() - v.at().mat()).cwiseAbs().maxCoeff();
  if (base_gap > base_point_tol) {
    throw Error("airm_inner: tangent vectors live at different base points "
                "(max entry gap " + std::to_string(base_gap) + ")");
  }
  const Eigen::MatrixXd p_inv = matrix_pow(u.at(), -1.0).mat();
  return (p_inv * u.vec().mat() * p_inv * v.vec().mat()).trace();
}

// Inverse square root of x, the factor both AIRM formulas congruence by.
// Callers evaluating many distances from one fixed x should compute this
// once and use airm_distance_with_factor.
inline SpdMatrix airm_factor(const SpdMatrix& x) { return matrix_pow(x, -0.5); }

// d_AIRM(x, y) given r = x^(-1/2): the Frobenius norm of log(r y r), taken
// from the eigenvalues of the congruence product directly.
inline double airm_distance_with_factor(const SpdMatrix& x_inv_sqrt,
                                        const SpdMatrix& y) {
  if (x_inv_sqrt.dim() != y.dim()) {
    throw DimensionError("airm_distance: dimension mismatch " +
                         std::to_string(x_inv_sqrt.dim()) + " vs " +
                         std::to_string(y.dim()));
  }
  const Eigen::MatrixXd& r = x_inv_sqrt.mat();
  Eigen::MatrixXd m = r * y.mat() * r;
  Eigen::VectorXd ev = sym_eigenvalues(SymMatrix(m));
  detail::apply_singular_policy(ev, SingularPolicy::clamp, "airm_distance");
  return std::sqrt(ev.array().log().square().sum());
}

// Geodesic distance of the affine-invariant metric,
// d(x, y) = ||log(x^(-1/2) y x^(-1/2))||_F. One eigendecomposition for the
// inverse square root plus one for the congruence product.
inline double airm_distance(const SpdMatrix& x, const SpdMatrix& y) {
  return airm_distance_with_factor(airm_factor(x), y);
}

// Log-Euclidean distance d(x, y) = ||log x - log y||_F; a genuine Euclidean
// distance on the log images, so the triangle inequality is exact.
inline double lem_distance(const SpdMatrix& x, const SpdMatrix& y) {
  if (x.dim() != y.dim()) {
    throw DimensionError("lem_distance: dimension mismatch " + std::to_string(x.dim()) +
                         " vs " + std::to_string(y.dim()));
  }
  return (matrix_log(x).mat() - matrix_log(y).mat()).norm();
}

// Log-Euclidean group multiplication x (.) y = exp(log x + log y).
// Commutative, with the identity matrix as neutral element.
inline SpdMatrix lie_multiply(const SpdMatrix& x, const SpdMatrix& y) {
  if (x.dim() != y.dim()) {
    throw DimensionError("lie_multiply: dimension mismatch " + std::to_string(x.dim()) +
                         " vs " + std::to_string(y.dim()));
  }
  return matrix_exp(SymMatrix(matrix_log(x).mat() + matrix_log(y).mat()));
}

// Log-Euclidean scalar multiplication t (*) x = exp(t log x) = x^t.
inline SpdMatrix lie_scale(double t, const SpdMatrix& x) { return matrix_pow(x, t); }

// Log-Euclidean inner product <x, y> = tr(log x log y); the kernel the whole
// kernel family is built from.
inline double loge_inner(const SpdMatrix& x, const SpdMatrix& y) {
  if (x.dim() != y.dim()) {
    throw DimensionError("loge_inner: dimension mismatch " + std::to_string(x.dim()) +
                         " vs " + std::to_string(y.dim()));
  }
  return trace_product(matrix_log(x), matrix_log(y));
}

}  // namespace spdkit

#endif  // SPDKIT_METRICS_HPP_
