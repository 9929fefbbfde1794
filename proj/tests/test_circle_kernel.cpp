//
// Copyright 2026 The gdpcurve Authors
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
//

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include <doctest.h>

#include "gdpcurve/circle_kernel.hpp"
#include "gdpcurve/rng.hpp"

using namespace gdpcurve;

namespace {
constexpr double kPi = std::numbers::pi;

PeriodicKernelParams<double> params(double rho, double alpha) {
  PeriodicKernelParams<double> p;
  p.rho = rho;
  p.alpha = alpha;
  return p;
}
}  // namespace

TEST_CASE("circle grid stores m distinct equispaced parameters") {
  const auto grid = make_circle_grid<double>(5);
  REQUIRE(grid.points.size() == 5);
  CHECK(grid.points[0] == 0.0);
  for (Eigen::Index i = 0; i < 5; ++i) {
    CHECK(grid.points[i] == doctest::Approx(i / 5.0).epsilon(1e-15));
    if (i > 0) CHECK(grid.points[i] > grid.points[i - 1]);
  }
  CHECK(grid.points[4] < 1.0);
  CHECK_THROWS_AS(make_circle_grid<double>(0), DomainError);
}

TEST_CASE("wrap maps the unit interval onto the circle") {
  const auto p0 = wrap(0.0);
  CHECK(p0[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p0[1] == doctest::Approx(0.0).scale(1).epsilon(1e-15));
  const auto p1 = wrap(1.0);
  CHECK(p1[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(p1[1]) < 1e-15);
  const auto pq = wrap(0.25);
  CHECK(std::abs(pq[0]) < 1e-15);
  CHECK(pq[1] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(wrap(-0.01), DomainError);
  CHECK_THROWS_AS(wrap(1.01), DomainError);
}

TEST_CASE("circle_distance is the arc length") {
  CHECK(circle_distance(wrap(0.0), wrap(0.0)) == 0.0);
  CHECK(circle_distance(wrap(0.0), wrap(0.5)) == doctest::Approx(kPi).epsilon(1e-14));
  CHECK(circle_distance(wrap(0.0), wrap(0.25)) == doctest::Approx(kPi / 2).epsilon(1e-14));
  CHECK(circle_distance(wrap(0.1), wrap(0.7)) ==
        doctest::Approx(circle_distance(wrap(0.7), wrap(0.1))).epsilon(1e-15));
  Vector2<double> off(2.0, 0.0);
  CHECK_THROWS_AS(circle_distance(off, wrap(0.0)), DomainError);
}

TEST_CASE("kernel_eval closed-form spot checks") {
  CHECK(kernel_eval(0.37, 0.37, params(2.0, 0.7)) == 1.0);
  CHECK(kernel_eval(0.0, 0.5, params(1.0, 1.0)) ==
        doctest::Approx(std::exp(-kPi)).epsilon(1e-13));
  CHECK(kernel_eval(0.0, 0.5, params(1.0, 1.0)) == doctest::Approx(0.043214).epsilon(1e-4));
  CHECK(kernel_eval(0.0, 1.0, params(0.5, 1.0)) == 1.0);
  CHECK_THROWS_AS(kernel_eval(0.1, 0.2, params(-1.0, 1.0)), DomainError);
  CHECK_THROWS_AS(kernel_eval(0.1, 0.2, params(1.0, 1.5)), DomainError);
}

TEST_CASE("kernel is positive, bounded, symmetric") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const double s = rng.uniform();
    const double t = rng.uniform();
    const double rho = 0.1 + 9.9 * rng.uniform();
    const double alpha = 0.05 + 0.95 * rng.uniform();
    const double k = kernel_eval(s, t, params(rho, alpha));
    CHECK(k > 0.0);
    CHECK(k <= 1.0);
    CHECK(k == doctest::Approx(kernel_eval(t, s, params(rho, alpha))).epsilon(1e-15));
  }
}

TEST_CASE("kernel is translation invariant on the circle") {
  Rng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    double s = rng.uniform();
    double t = rng.uniform();
    // keep the pair away from coincidence: arccos is ill-conditioned there
    // and the invariance statement is about the kernel, not about fp noise
    if (std::abs(s - t) < 1e-3 || std::abs(s - t) > 1.0 - 1e-3) continue;
    const double c = rng.uniform();
    const auto shift = [c](double v) {
      double w = v + c;
      if (w >= 1.0) w -= 1.0;
      return w;
    };
    const auto prm = params(0.2 + 5.0 * rng.uniform(), 0.3 + 0.7 * rng.uniform());
    CHECK(std::abs(kernel_eval(shift(s), shift(t), prm) - kernel_eval(s, t, prm)) <= 1e-12);
  }
}

TEST_CASE("build_kernel_matrix small cases") {
  const auto k1 = build_kernel_matrix(make_circle_grid<double>(1), params(1.0, 1.0));
  REQUIRE(k1.rows() == 1);
  CHECK(k1(0, 0) == 1.0);

  const auto k4 = build_kernel_matrix(make_circle_grid<double>(4), params(1.0, 1.0));
  CHECK(k4(0, 0) == 1.0);
  CHECK(k4(0, 1) == doctest::Approx(std::exp(-kPi / 2)).epsilon(1e-13));
  CHECK(k4(0, 2) == doctest::Approx(std::exp(-kPi)).epsilon(1e-13));
  CHECK(k4(0, 3) == doctest::Approx(std::exp(-kPi / 2)).epsilon(1e-13));
}

TEST_CASE("kernel matrix is exactly symmetric circulant with unit diagonal") {
  for (const Eigen::Index m : {2, 3, 7, 16, 81}) {
    const auto grid = make_circle_grid<double>(m);
    const auto K = build_kernel_matrix(grid, params(0.7, 0.6));
    for (Eigen::Index i = 0; i < m; ++i) {
      CHECK(K(i, i) == 1.0);
      for (Eigen::Index j = 0; j < m; ++j) {
        CHECK(K(i, j) == K(j, i));            // bitwise
        CHECK(K(i, j) == K(0, (j - i + m) % m));  // circulant rows
      }
    }
  }
}

TEST_CASE("kernel matrices are positive semidefinite up to noise") {
  Rng rng(13);
  for (int trial = 0; trial < 25; ++trial) {
    const Eigen::Index m = 2 + Eigen::Index(rng.uniform() * 150);
    const double rho = 0.1 + 9.9 * rng.uniform();
    const double alpha = 0.05 + 0.95 * rng.uniform();
    const auto K = build_kernel_matrix(make_circle_grid<double>(m), params(rho, alpha));
    Eigen::SelfAdjointEigenSolver<MatrixX<double>> solver(K);
    REQUIRE(solver.info() == Eigen::Success);
    const double lambda_max = solver.eigenvalues().maxCoeff();
    CHECK(solver.eigenvalues().minCoeff() >= -1e-10 * lambda_max);
  }
}

TEST_CASE("eigendecompose of the identity gives a flat spectrum") {
  const auto grid = make_circle_grid<double>(3);
  const MatrixX<double> K = MatrixX<double>::Identity(3, 3);
  const auto basis = eigendecompose(grid, K);
  REQUIRE(basis.modes() == 3);
  // operator eigenvalues: I acting under the (1/m)-weighted inner product
  for (Eigen::Index j = 0; j < 3; ++j) {
    CHECK(basis.eigenvalues[j] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  }
  for (Eigen::Index i = 0; i < 3; ++i) {
    for (Eigen::Index j = 0; j < 3; ++j) {
      const double inner = discrete_inner(basis.eigenvectors.col(i),
                                                  basis.eigenvectors.col(j));
      CHECK(inner == doctest::Approx(i == j ? 1.0 : 0.0).scale(1).epsilon(1e-13));
    }
  }
}

TEST_CASE("eigenvalues match the DFT of the circulant first row") {
  const Eigen::Index m = 8;
  const auto grid = make_circle_grid<double>(m);
  const auto K = build_kernel_matrix(grid, params(1.0, 1.0));
  const auto basis = eigendecompose(grid, K);
  // real DFT of the (symmetric) first row, scaled by the quadrature weight
  std::vector<double> dft;
  for (Eigen::Index k = 0; k < m; ++k) {
    double value = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) {
      value += K(0, j) * std::cos(2.0 * kPi * double(k) * double(j) / double(m));
    }
    dft.push_back(value / double(m));
  }
  std::sort(dft.begin(), dft.end(), std::greater<>());
  REQUIRE(basis.modes() == m);
  for (Eigen::Index j = 0; j < m; ++j) {
    CHECK(basis.eigenvalues[j] == doctest::Approx(dft[std::size_t(j)]).epsilon(1e-11));
  }
}

TEST_CASE("eigendecompose invariants across sizes") {
  for (const Eigen::Index m : {1, 2, 5, 40, 80}) {
    const auto grid = make_circle_grid<double>(m);
    const auto K = build_kernel_matrix(grid, params(1.0, 1.0));
    const auto basis = eigendecompose(grid, K);
    REQUIRE(basis.modes() >= 1);
    // sorted descending, strictly positive
    for (Eigen::Index j = 0; j < basis.modes(); ++j) {
      CHECK(basis.eigenvalues[j] > 0.0);
      if (j > 0) CHECK(basis.eigenvalues[j] <= basis.eigenvalues[j - 1]);
    }
    // trace identity under the weighted inner product: sum lambda = trace(K)/m = 1
    CHECK(basis.eigenvalues.sum() == doctest::Approx(1.0).epsilon(1e-8));
    // reconstruction
    MatrixX<double> rebuilt = MatrixX<double>::Zero(m, m);
    for (Eigen::Index j = 0; j < basis.modes(); ++j) {
      rebuilt += basis.eigenvalues[j] * basis.eigenvectors.col(j) *
                 basis.eigenvectors.col(j).transpose();
    }
    CHECK((rebuilt - K).norm() / K.norm() <= 1e-8);
    // orthonormality under the discrete inner product
    for (Eigen::Index i = 0; i < basis.modes(); ++i) {
      for (Eigen::Index j = i; j < basis.modes(); ++j) {
        const double inner = discrete_inner(basis.eigenvectors.col(i),
                                                    basis.eigenvectors.col(j));
        CHECK(std::abs(inner - (i == j ? 1.0 : 0.0)) <= 1e-10);
      }
    }
  }
}

TEST_CASE("eigendecompose rejects asymmetric input") {
  const auto grid = make_circle_grid<double>(2);
  MatrixX<double> K(2, 2);
  K << 1.0, 0.5, 0.2, 1.0;
  CHECK_THROWS_AS(eigendecompose(grid, K), DomainError);
}

TEST_CASE("clamped modes are dropped, never negated") {
  const auto grid = make_circle_grid<double>(3);
  // rank-1 symmetric matrix: two zero eigenvalues must be clamped away
  VectorX<double> v(3);
  v << 1.0, 2.0, 3.0;
  const MatrixX<double> K = v * v.transpose();
  const auto basis = eigendecompose(grid, K);
  CHECK(basis.modes() == 1);
  CHECK(basis.eigenvalues[0] > 0.0);
}

TEST_CASE("build_eigenbasis bundles grid, K, and the spectrum") {
  const auto grid = make_circle_grid<double>(6);
  const auto prm = params(1.3, 0.8);
  const auto basis = build_eigenbasis(grid, prm);
  CHECK(basis.grid.m == 6);
  CHECK((basis.kernel_matrix - build_kernel_matrix(grid, prm)).cwiseAbs().maxCoeff() == 0.0);
  CHECK(basis.modes() == basis.eigenvalues.size());
  CHECK(basis.eigenvectors.cols() == basis.modes());
  CHECK(basis.eigenvectors.rows() == 6);
}
