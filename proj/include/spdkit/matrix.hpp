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

#ifndef SPDKIT_MATRIX_HPP_
#define SPDKIT_MATRIX_HPP_

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "spdkit/error.hpp"

namespace spdkit {

// Tolerances for the dense symmetric kernel of the library. All relative.
inline constexpr double reconstruction_tol = 1e-10;
inline constexpr double orth_tol = 1e-10;
inline constexpr double roundtrip_tol = 1e-8;
// Eigenvalues below eig_clamp_rel * lambda_max are clamped (or rejected) by
// matrix_log and friends; regularized descriptors stay far above this, but
// floating-point cancellation may not.
inline constexpr double eig_clamp_rel = 1e-12;
// exp(x) overflows double precision past ~709; reject rather than saturate.
inline constexpr double exp_arg_cap = 700.0;

// Dense real symmetric matrix. Exactly symmetric by construction: the
// constructor averages m and m^T entrywise, which is bitwise symmetric.
class SymMatrix {
 public:
  explicit SymMatrix(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols() || m.rows() < 1) {
      throw DimensionError("SymMatrix: input must be square and non-empty, got " +
                           std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
    if (!m.allFinite()) {
      throw NumericalError("SymMatrix: input contains non-finite entries");
    }
    mat_ = 0.5 * (m + m.transpose());
  }

  static SymMatrix zero(Eigen::Index dim) {
    return SymMatrix(Eigen::MatrixXd::Zero(dim, dim), trusted_tag{});
  }
  static SymMatrix identity(Eigen::Index dim) {
    return SymMatrix(Eigen::MatrixXd::Identity(dim, dim), trusted_tag{});
  }

  Eigen::Index dim() const { return mat_.rows(); }
  const Eigen::MatrixXd& mat() const { return mat_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return mat_(i, j); }

 private:
  struct trusted_tag {};
  SymMatrix(Eigen::MatrixXd m, trusted_tag) : mat_(std::move(m)) {}
  Eigen::MatrixXd mat_;

  friend struct detail_trusted;
};

struct EigenDecomposition {
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXd eigenvectors;  // orthogonal, columns match eigenvalues
};

// Spectral decomposition of a symmetric matrix (tridiagonalization + implicit
// QL, via Eigen's selfadjoint solver). Real spectrum and orthogonal vectors
// are structural here, never approximated through a general solver.
inline EigenDecomposition sym_eig(const SymMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.mat());
  if (solver.info() != Eigen::Success) {
    throw NumericalError("sym_eig: eigensolver failed to converge on a " +
                         std::to_string(m.dim()) + "x" + std::to_string(m.dim()) +
                         " matrix");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

// Eigenvalues only (ascending); roughly twice as fast as sym_eig when the
// vectors are not needed (PD certification, AIRM distances).
inline Eigen::VectorXd sym_eigenvalues(const SymMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.mat(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("sym_eigenvalues: eigensolver failed to converge on a " +
                         std::to_string(m.dim()) + "x" + std::to_string(m.dim()) +
                         " matrix");
  }
  return solver.eigenvalues();
}

// Symmetric positive definite matrix, the manifold point type. Construction
// certifies the smallest eigenvalue is strictly positive; semidefinite inputs
// must be regularized upstream, never accepted silently.
class SpdMatrix {
 public:
  explicit SpdMatrix(SymMatrix s) : base_(std::move(s)) {
    const Eigen::VectorXd ev = sym_eigenvalues(base_);
    min_eig_ = ev(0);
    if (!(min_eig_ > 0.0)) {
      throw NotPositiveDefiniteError(
          "SpdMatrix: smallest eigenvalue " + std::to_string(min_eig_) +
          " is not strictly positive (dim " + std::to_string(base_.dim()) + ")");
    }
  }
  explicit SpdMatrix(const Eigen::MatrixXd& m) : SpdMatrix(SymMatrix(m)) {}

  static SpdMatrix identity(Eigen::Index dim);

  const SymMatrix& sym() const { return base_; }
  const Eigen::MatrixXd& mat() const { return base_.mat(); }
  Eigen::Index dim() const { return base_.dim(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return base_(i, j); }

  // Smallest eigenvalue observed when this matrix was validated.
  double min_eig_certified() const { return min_eig_; }

 private:
  struct trusted_tag {};
  SpdMatrix(SymMatrix s, double min_eig, trusted_tag)
      : base_(std::move(s)), min_eig_(min_eig) {}

  SymMatrix base_;
  double min_eig_ = 0.0;

  friend struct detail_trusted;
};

// Internal: construction paths where positivity is already known from an
// eigendecomposition performed by the caller (matrix_exp, matrix_pow, ...).
// The spectrum transform itself is the validation; re-certifying would just
// repeat the same solve.
struct detail_trusted {
  static SymMatrix sym(Eigen::MatrixXd m) {
    return SymMatrix(std::move(m), SymMatrix::trusted_tag{});
  }
  static SpdMatrix spd(SymMatrix s, double min_eig) {
    return SpdMatrix(std::move(s), min_eig, SpdMatrix::trusted_tag{});
  }
};

inline SpdMatrix SpdMatrix::identity(Eigen::Index dim) {
  return detail_trusted::spd(SymMatrix::identity(dim), 1.0);
}

// What matrix_log (and fractional matrix_pow) does with eigenvalues at or
// below the clamp floor.
enum class SingularPolicy { clamp, reject };

namespace detail {

// Exact symmetrization of V * diag(f) * V^T without forming the asymmetric
// intermediate roundoff: average with the transpose entrywise.
inline SymMatrix compose_spectral(const Eigen::MatrixXd& vectors,
                                  const Eigen::VectorXd& values) {
  Eigen::MatrixXd m = vectors * values.asDiagonal() * vectors.transpose();
  Eigen::MatrixXd s = 0.5 * (m + m.transpose());
  return detail_trusted::sym(std::move(s));
}

inline double clamp_floor(const Eigen::VectorXd& eigenvalues) {
  return eig_clamp_rel * eigenvalues(eigenvalues.size() - 1);
}

inline void apply_singular_policy(Eigen::VectorXd& eigenvalues, SingularPolicy policy,
                                  const char* op) {
  const double floor = clamp_floor(eigenvalues);
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    if (eigenvalues(i) < floor) {
      if (policy == SingularPolicy::reject) {
        throw NumericalError(std::string(op) + ": eigenvalue " +
                             std::to_string(eigenvalues(i)) + " below clamp floor " +
                             std::to_string(floor));
      }
      eigenvalues(i) = floor;
    } else {
      break;  // ascending order
    }
  }
}

}  // namespace detail

// Principal matrix logarithm of an SPD matrix; the logarithm mapping from the
// manifold to the symmetric tangent space.
inline SymMatrix matrix_log(const SpdMatrix& p,
                            SingularPolicy policy = SingularPolicy::clamp) {
  EigenDecomposition d = sym_eig(p.sym());
  detail::apply_singular_policy(d.eigenvalues, policy, "matrix_log");
  const Eigen::VectorXd logs = d.eigenvalues.array().log();
  return detail::compose_spectral(d.eigenvectors, logs);
}

// Matrix exponential of a symmetric matrix; always lands on the SPD manifold.
inline SpdMatrix matrix_exp(const SymMatrix& m) {
  EigenDecomposition d = sym_eig(m);
  if (d.eigenvalues(d.eigenvalues.size() - 1) > exp_arg_cap) {
    throw NumericalError("matrix_exp: eigenvalue " +
                         std::to_string(d.eigenvalues(d.eigenvalues.size() - 1)) +
                         " exceeds overflow cap " + std::to_string(exp_arg_cap));
  }
  const Eigen::VectorXd exps = d.eigenvalues.array().exp();
  return detail_trusted::spd(detail::compose_spectral(d.eigenvectors, exps), exps(0));
}

// Real matrix power p^t through the spectrum. Fractional exponents share
// matrix_log's clamp-or-reject handling of near-zero eigenvalues; integer
// exponents are exact powers and never clamp.
inline SpdMatrix matrix_pow(const SpdMatrix& p, double t,
                            SingularPolicy policy = SingularPolicy::clamp) {
  if (!std::isfinite(t)) {
    throw NumericalError("matrix_pow: exponent must be finite");
  }
  EigenDecomposition d = sym_eig(p.sym());
  const bool integer_exponent = t == std::floor(t);
  if (!integer_exponent) {
    detail::apply_singular_policy(d.eigenvalues, policy, "matrix_pow");
  }
  Eigen::VectorXd powers(d.eigenvalues.size());
  double min_pow = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < powers.size(); ++i) {
    const double v = std::pow(d.eigenvalues(i), t);
    if (!std::isfinite(v) || v <= 0.0) {
      throw NumericalError("matrix_pow: eigenvalue " + std::to_string(d.eigenvalues(i)) +
                           " raised to " + std::to_string(t) + " is not representable");
    }
    powers(i) = v;
    min_pow = std::min(min_pow, v);
  }
  return detail_trusted::spd(detail::compose_spectral(d.eigenvectors, powers), min_pow);
}

inline double frob_norm(const SymMatrix& m) { return m.mat().norm(); }

// tr(a * b) for symmetric a, b; equals the entrywise product sum, so this is
// O(n^2), not a matrix product.
inline double trace_product(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim()) {
    throw DimensionError("trace_product: dimension mismatch " +
                         std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
  }
  return a.mat().cwiseProduct(b.mat()).sum();
}

}  // namespace spdkit

#endif  // SPDKIT_MATRIX_HPP_
