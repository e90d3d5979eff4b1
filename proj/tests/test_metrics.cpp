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

#include "spdkit/metrics.hpp"
#include "test_support.hpp"

using namespace spdkit;
using testsupport::random_invertible;
using testsupport::random_spd;
using Catch::Matchers::WithinAbs;

TEST_CASE("airm distance between I and e*I is sqrt(2)") {
  const SpdMatrix x = SpdMatrix::identity(2);
  const SpdMatrix y(SymMatrix(std::exp(1.0) * Eigen::MatrixXd::Identity(2, 2)));
  CHECK_THAT(airm_distance(x, y), WithinAbs(std::sqrt(2.0), 1e-10));
}

TEST_CASE("airm distance is symmetric and zero at equal points") {
  Xoshiro256ss rng(21);
  for (int rep = 0; rep < 25; ++rep) {
    const Eigen::Index dim = 1 + static_cast<Eigen::Index>(rng.bounded(6));
    const SpdMatrix x = random_spd(rng, dim, 0.3, 4.0);
    const SpdMatrix y = random_spd(rng, dim, 0.3, 4.0);
    CHECK(std::abs(airm_distance(x, y) - airm_distance(y, x)) < 1e-10);
    CHECK(airm_distance(x, x) < 1e-8);
  }
}

TEST_CASE("airm distance is invariant under congruence transforms") {
  Xoshiro256ss rng(22);
  for (int rep = 0; rep < 25; ++rep) {
    const Eigen::Index dim = 2 + static_cast<Eigen::Index>(rng.bounded(5));
    const SpdMatrix x = random_spd(rng, dim, 0.3, 4.0);
    const SpdMatrix y = random_spd(rng, dim, 0.3, 4.0);
    const Eigen::MatrixXd m = random_invertible(rng, dim);
    const SpdMatrix xt(SymMatrix(m.transpose() * x.mat() * m));
    const SpdMatrix yt(SymMatrix(m.transpose() * y.mat() * m));
    const double d = airm_distance(x, y);
    CHECK(std::abs(airm_distance(xt, yt) - d) < 1e-8 * std::max(1.0, d));
  }
}

TEST_CASE("airm_factor produces the inverse square root") {
  Xoshiro256ss rng(23);
  const SpdMatrix x = random_spd(rng, 5, 0.4, 3.0);
  const SpdMatrix f = airm_factor(x);
  CHECK((f.mat() * x.mat() * f.mat() - Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff() <
        1e-10);
}

TEST_CASE("airm_distance_with_factor equals airm_distance") {
  Xoshiro256ss rng(24);
  const SpdMatrix x = random_spd(rng, 4);
  const SpdMatrix y = random_spd(rng, 4);
  CHECK(airm_distance_with_factor(airm_factor(x), y) == airm_distance(x, y));
}

TEST_CASE("lem distance between diag(e,e) and I is sqrt(2)") {
  const SpdMatrix x(SymMatrix(std::exp(1.0) * Eigen::MatrixXd::Identity(2, 2)));
  CHECK_THAT(lem_distance(x, SpdMatrix::identity(2)), WithinAbs(std::sqrt(2.0), 1e-10));
}

TEST_CASE("lem distance satisfies the triangle inequality") {
  Xoshiro256ss rng(25);
  for (int rep = 0; rep < 50; ++rep) {
    const Eigen::Index dim = 1 + static_cast<Eigen::Index>(rng.bounded(6));
    const SpdMatrix x = random_spd(rng, dim, 0.2, 5.0);
    const SpdMatrix y = random_spd(rng, dim, 0.2, 5.0);
    const SpdMatrix z = random_spd(rng, dim, 0.2, 5.0);
    CHECK(lem_distance(x, z) <= lem_distance(x, y) + lem_distance(y, z) + 1e-10);
  }
}

TEST_CASE("airm and lem agree on commuting (diagonal) matrices") {
  Xoshiro256ss rng(26);
  for (int rep = 0; rep < 10; ++rep) {
    Eigen::VectorXd a(4), b(4);
    for (int i = 0; i < 4; ++i) {
      a(i) = rng.uniform(0.2, 5.0);
      b(i) = rng.uniform(0.2, 5.0);
    }
    const SpdMatrix x(SymMatrix(a.asDiagonal().toDenseMatrix()));
    const SpdMatrix y(SymMatrix(b.asDiagonal().toDenseMatrix()));
    CHECK(std::abs(airm_distance(x, y) - lem_distance(x, y)) < 1e-10);
  }
}

TEST_CASE("lie_multiply squares [[2,1],[1,2]] to [[5,4],[4,5]]") {
  Eigen::MatrixXd m(2, 2);
  m << 2.0, 1.0, 1.0, 2.0;
  const SpdMatrix x{SymMatrix(m)};
  const SpdMatrix sq = lie_multiply(x, x);
  CHECK_THAT(sq.mat()(0, 0), WithinAbs(5.0, 1e-10));
  CHECK_THAT(sq.mat()(0, 1), WithinAbs(4.0, 1e-10));
  CHECK_THAT(sq.mat()(1, 0), WithinAbs(4.0, 1e-10));
  CHECK_THAT(sq.mat()(1, 1), WithinAbs(5.0, 1e-10));
}

TEST_CASE("lie_multiply is commutative and has the identity as unit") {
  Xoshiro256ss rng(27);
  const SpdMatrix x = random_spd(rng, 3);
  const SpdMatrix y = random_spd(rng, 3);
  CHECK((lie_multiply(x, y).mat() - lie_multiply(y, x).mat()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((lie_multiply(x, SpdMatrix::identity(3)).mat() - x.mat()).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("lie_scale matches powers: 2 is squaring, 0 is identity, -1 is inverse") {
  Xoshiro256ss rng(28);
  const SpdMatrix x = random_spd(rng, 3, 0.4, 3.0);
  CHECK((lie_scale(2.0, x).mat() - lie_multiply(x, x).mat()).cwiseAbs().maxCoeff() < 1e-8);
  CHECK((lie_scale(0.0, x).mat() - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() <
        1e-12);
  CHECK((lie_scale(-1.0, x).mat() * x.mat() - Eigen::MatrixXd::Identity(3, 3))
            .cwiseAbs()
            .maxCoeff() < 1e-10);
}

TEST_CASE("loge_inner of diag(e,e^2) and diag(e^3,e) is 5") {
  const SpdMatrix x(SymMatrix(
      Eigen::Vector2d(std::exp(1.0), std::exp(2.0)).asDiagonal().toDenseMatrix()));
  const SpdMatrix y(SymMatrix(
      Eigen::Vector2d(std::exp(3.0), std::exp(1.0)).asDiagonal().toDenseMatrix()));
  CHECK_THAT(loge_inner(x, y), WithinAbs(5.0, 1e-10));
}

TEST_CASE("loge_inner of a point with itself is its squared log norm") {
  Xoshiro256ss rng(29);
  const SpdMatrix x = random_spd(rng, 4);
  const SymMatrix l = matrix_log(x);
  CHECK_THAT(loge_inner(x, x), WithinAbs(l.mat().squaredNorm(), 1e-12));
}

TEST_CASE("airm_inner at the identity base point is the trace product") {
  Xoshiro256ss rng(30);
  const SpdMatrix base = SpdMatrix::identity(3);
  const SymMatrix u = testsupport::random_sym(rng, 3);
  const SymMatrix v = testsupport::random_sym(rng, 3);
  const TangentVector tu(base, u);
  const TangentVector tv(base, v);
  CHECK_THAT(airm_inner(tu, tv), WithinAbs(trace_product(u, v), 1e-10));
}

TEST_CASE("airm_inner rejects tangent vectors at different base points") {
  Xoshiro256ss rng(31);
  const SpdMatrix a = random_spd(rng, 3);
  const SpdMatrix b = random_spd(rng, 3);
  const SymMatrix u = testsupport::random_sym(rng, 3);
  CHECK_THROWS_AS(airm_inner(TangentVector(a, u), TangentVector(b, u)), Error);
}

TEST_CASE("metric operations reject dimension mismatches") {
  Xoshiro256ss rng(32);
  const SpdMatrix a = random_spd(rng, 2);
  const SpdMatrix b = random_spd(rng, 3);
  CHECK_THROWS_AS(airm_distance(a, b), DimensionError);
  CHECK_THROWS_AS(lem_distance(a, b), DimensionError);
  CHECK_THROWS_AS(lie_multiply(a, b), DimensionError);
  CHECK_THROWS_AS(loge_inner(a, b), DimensionError);
}
