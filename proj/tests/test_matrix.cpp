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

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <limits>

#include "spdkit/matrix.hpp"
#include "test_support.hpp"

using namespace spdkit;
using testsupport::random_spd;
using testsupport::random_sym;
using Catch::Matchers::WithinAbs;

TEST_CASE("SymMatrix rejects non-square and non-finite input") {
  CHECK_THROWS_AS(SymMatrix(Eigen::MatrixXd::Zero(2, 3)), DimensionError);
  Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(2, 2);
  bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(SymMatrix(bad), NumericalError);
  bad(0, 1) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(SymMatrix(bad), NumericalError);
}

TEST_CASE("SymMatrix symmetrizes as the exact average of m and its transpose") {
  Eigen::MatrixXd m(2, 2);
  m << 1.0, 3.0, 1.0, 2.0;
  const SymMatrix s(m);
  CHECK(s.mat()(0, 1) == 2.0);
  CHECK(s.mat()(1, 0) == 2.0);
  CHECK(s.mat()(0, 0) == 1.0);
}

TEST_CASE("SpdMatrix certifies strict positive definiteness") {
  CHECK_NOTHROW(SpdMatrix(SymMatrix(Eigen::MatrixXd::Identity(3, 3))));
  CHECK_THROWS_AS(SpdMatrix(SymMatrix(Eigen::Vector2d(1.0, -1.0).asDiagonal().toDenseMatrix())),
                  NotPositiveDefiniteError);
  // Singular (one zero eigenvalue) is rejected: the floor is strictly zero.
  CHECK_THROWS_AS(SpdMatrix(SymMatrix(Eigen::Vector2d(1.0, 0.0).asDiagonal().toDenseMatrix())),
                  NotPositiveDefiniteError);
  // Tiny but positive eigenvalues are accepted.
  CHECK_NOTHROW(SpdMatrix(SymMatrix(Eigen::Vector2d(1.0, 1e-14).asDiagonal().toDenseMatrix())));
}

TEST_CASE("sym_eig reconstructs, is orthogonal, and sorts ascending") {
  Xoshiro256ss rng(11);
  for (Eigen::Index dim : {1, 2, 3, 5, 8, 12}) {
    const SymMatrix s = random_sym(rng, dim, 2.0);
    const EigenDecomposition d = sym_eig(s);
    const Eigen::MatrixXd recon =
        d.eigenvectors * d.eigenvalues.asDiagonal() * d.eigenvectors.transpose();
    CHECK((recon - s.mat()).cwiseAbs().maxCoeff() < reconstruction_tol * (1.0 + s.mat().cwiseAbs().maxCoeff()));
    const Eigen::MatrixXd ortho =
        d.eigenvectors.transpose() * d.eigenvectors - Eigen::MatrixXd::Identity(dim, dim);
    CHECK(ortho.cwiseAbs().maxCoeff() < orth_tol);
    for (Eigen::Index i = 0; i + 1 < dim; ++i) CHECK(d.eigenvalues(i) <= d.eigenvalues(i + 1));
  }
}

TEST_CASE("sym_eig on a diagonal matrix returns its diagonal") {
  Eigen::MatrixXd m = Eigen::Vector3d(3.0, -1.0, 2.0).asDiagonal();
  const EigenDecomposition d = sym_eig(SymMatrix(m));
  CHECK_THAT(d.eigenvalues(0), WithinAbs(-1.0, 1e-12));
  CHECK_THAT(d.eigenvalues(1), WithinAbs(2.0, 1e-12));
  CHECK_THAT(d.eigenvalues(2), WithinAbs(3.0, 1e-12));
}

TEST_CASE("matrix_log of diag(e, e^2) is diag(1, 2)") {
  Eigen::MatrixXd m = Eigen::Vector2d(std::exp(1.0), std::exp(2.0)).asDiagonal();
  const SymMatrix l = matrix_log(SpdMatrix(SymMatrix(m)));
  CHECK_THAT(l.mat()(0, 0), WithinAbs(1.0, 1e-12));
  CHECK_THAT(l.mat()(1, 1), WithinAbs(2.0, 1e-12));
  CHECK_THAT(l.mat()(0, 1), WithinAbs(0.0, 1e-12));
}

TEST_CASE("matrix_log of [[2,1],[1,2]] is (ln 3 / 2) times the all-ones matrix") {
  Eigen::MatrixXd m(2, 2);
  m << 2.0, 1.0, 1.0, 2.0;
  const SymMatrix l = matrix_log(SpdMatrix(SymMatrix(m)));
  const double v = std::log(3.0) / 2.0;
  CHECK_THAT(l.mat()(0, 0), WithinAbs(v, 1e-12));
  CHECK_THAT(l.mat()(0, 1), WithinAbs(v, 1e-12));
  CHECK_THAT(l.mat()(1, 0), WithinAbs(v, 1e-12));
  CHECK_THAT(l.mat()(1, 1), WithinAbs(v, 1e-12));
}

TEST_CASE("matrix_log of the identity is zero") {
  const SymMatrix l = matrix_log(SpdMatrix::identity(4));
  CHECK(l.mat().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("matrix_exp of zero is the identity and matches diagonal arithmetic") {
  const SpdMatrix e = matrix_exp(SymMatrix::zero(3));
  CHECK((e.mat() - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-14);
  Eigen::MatrixXd m = Eigen::Vector2d(1.0, 2.0).asDiagonal();
  const SpdMatrix d = matrix_exp(SymMatrix(m));
  CHECK_THAT(d.mat()(0, 0), WithinAbs(std::exp(1.0), 1e-12));
  CHECK_THAT(d.mat()(1, 1), WithinAbs(std::exp(2.0), 1e-12));
}

TEST_CASE("matrix_exp rejects arguments that would overflow") {
  Eigen::MatrixXd m = Eigen::Vector2d(800.0, 0.0).asDiagonal();
  CHECK_THROWS_AS(matrix_exp(SymMatrix(m)), NumericalError);
}

TEST_CASE("log and exp are mutual inverses on random input") {
  Xoshiro256ss rng(12);
  for (int rep = 0; rep < 20; ++rep) {
    const Eigen::Index dim = 1 + static_cast<Eigen::Index>(rng.bounded(8));
    const SpdMatrix x = random_spd(rng, dim, 0.2, 5.0);
    const SpdMatrix back = matrix_exp(matrix_log(x));
    CHECK((back.mat() - x.mat()).cwiseAbs().maxCoeff() <
          roundtrip_tol * (1.0 + x.mat().cwiseAbs().maxCoeff()));
    const SymMatrix s = random_sym(rng, dim, 1.5);
    const SymMatrix back2 = matrix_log(matrix_exp(s));
    CHECK((back2.mat() - s.mat()).cwiseAbs().maxCoeff() <
          roundtrip_tol * (1.0 + s.mat().cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("matrix_pow handles identity, inverse, and square root") {
  Xoshiro256ss rng(13);
  const SpdMatrix x = random_spd(rng, 4, 0.3, 3.0);
  CHECK((matrix_pow(x, 1.0).mat() - x.mat()).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((matrix_pow(x, 0.0).mat() - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() <
        1e-12);
  CHECK((matrix_pow(x, -1.0).mat() * x.mat() - Eigen::MatrixXd::Identity(4, 4))
            .cwiseAbs()
            .maxCoeff() < 1e-10);
  const SpdMatrix r = matrix_pow(x, 0.5);
  CHECK((r.mat() * r.mat() - x.mat()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("matrix_pow of diag(4, 9) to the 1/2 is diag(2, 3)") {
  Eigen::MatrixXd m = Eigen::Vector2d(4.0, 9.0).asDiagonal();
  const SpdMatrix r = matrix_pow(SpdMatrix(SymMatrix(m)), 0.5);
  CHECK_THAT(r.mat()(0, 0), WithinAbs(2.0, 1e-12));
  CHECK_THAT(r.mat()(1, 1), WithinAbs(3.0, 1e-12));
}

TEST_CASE("matrix_pow singular policy: reject throws on spectrum below the relative floor") {
  // Eigenvalue ratio 1e-14 is below the 1e-12 relative floor.
  Eigen::MatrixXd m = Eigen::Vector2d(1.0, 1e-14).asDiagonal();
  const SpdMatrix x{SymMatrix(m)};
  CHECK_THROWS_AS(matrix_pow(x, 0.5, SingularPolicy::reject), NumericalError);
  // Clamping lifts the tiny eigenvalue to the floor instead.
  const SpdMatrix r = matrix_pow(x, 0.5, SingularPolicy::clamp);
  CHECK_THAT(r.mat()(1, 1), WithinAbs(1e-6, 1e-8));
  // Integer exponents are computed on the raw spectrum without clamping.
  const SpdMatrix inv = matrix_pow(x, -1.0, SingularPolicy::reject);
  CHECK((inv.mat() * x.mat() - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("frob_norm and trace_product match hand arithmetic") {
  Eigen::MatrixXd a(2, 2);
  a << 3.0, 4.0, 4.0, 3.0;
  CHECK_THAT(frob_norm(SymMatrix(a)), WithinAbs(std::sqrt(50.0), 1e-12));

  Xoshiro256ss rng(14);
  for (int rep = 0; rep < 10; ++rep) {
    const SymMatrix x = random_sym(rng, 5);
    const SymMatrix y = random_sym(rng, 5);
    CHECK_THAT(trace_product(x, y), WithinAbs((x.mat() * y.mat()).trace(), 1e-12));
  }
  CHECK_THROWS_AS(trace_product(random_sym(rng, 2), random_sym(rng, 3)), DimensionError);
}

TEST_CASE("trace_product is symmetric bit for bit") {
  Xoshiro256ss rng(15);
  const SymMatrix x = random_sym(rng, 6);
  const SymMatrix y = random_sym(rng, 6);
  CHECK(trace_product(x, y) == trace_product(y, x));
}
