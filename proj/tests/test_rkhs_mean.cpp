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

#include <cmath>
#include <numbers>

#include <doctest.h>

#include "gdpcurve/rkhs_mean.hpp"
#include "gdpcurve/rng.hpp"

using namespace gdpcurve;

namespace {

KernelEigenbasis<double> default_basis(Eigen::Index m, double rho = 1.0, double alpha = 1.0) {
  PeriodicKernelParams<double> params;
  params.rho = rho;
  params.alpha = alpha;
  return build_eigenbasis(make_circle_grid<double>(m), params);
}

CurveSample<double> sample_of(const KernelEigenbasis<double>& basis,
                              const MatrixX<double>& curves) {
  CurveSample<double> sample;
  sample.grid = basis.grid;
  sample.curves = curves;
  return sample;
}

MatrixX<double> random_curves(Rng& rng, Eigen::Index m, Eigen::Index n) {
  MatrixX<double> curves(m, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < m; ++i) curves(i, j) = rng.normal();
  }
  return curves;
}

}  // namespace

TEST_CASE("ambient_norm closed forms") {
  const auto grid = make_circle_grid<double>(80);
  CHECK(ambient_norm<double>(VectorX<double>::Zero(80), grid) == 0.0);
  CHECK(ambient_norm<double>(VectorX<double>::Constant(80, 3.0), grid) ==
        doctest::Approx(3.0).epsilon(1e-14));
  VectorX<double> sine(80);
  for (Eigen::Index i = 0; i < 80; ++i) {
    sine[i] = std::sin(2.0 * std::numbers::pi * grid.points[i]);
  }
  CHECK(ambient_norm(sine, grid) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-13));
}

TEST_CASE("rkhs_mean of the zero sample is zero") {
  const auto basis = default_basis(16);
  const auto mean = rkhs_mean(sample_of(basis, MatrixX<double>::Zero(16, 3)), basis, 0.01);
  CHECK(mean.coefficients.cwiseAbs().maxCoeff() == 0.0);
  CHECK(mean.values.cwiseAbs().maxCoeff() == 0.0);
  CHECK(rkhs_norm(mean) == 0.0);
}

TEST_CASE("single eigenmode shrinks by lambda/(lambda+phi)") {
  const auto basis = default_basis(16);
  const double phi = 0.02;
  const double lambda1 = basis.eigenvalues[0];
  const auto mean =
      rkhs_mean(sample_of(basis, basis.eigenvectors.col(0)), basis, phi);
  CHECK(mean.coefficients[0] == doctest::Approx(lambda1 / (lambda1 + phi)).epsilon(1e-13));
  for (Eigen::Index j = 1; j < basis.modes(); ++j) {
    CHECK(std::abs(mean.coefficients[j]) <= 1e-12);
  }
  CHECK(rkhs_norm(mean) ==
        doctest::Approx(lambda1 / (lambda1 + phi) / std::sqrt(lambda1)).epsilon(1e-12));
}

TEST_CASE("opposite curves cancel exactly") {
  const auto basis = default_basis(12);
  Rng rng(3);
  MatrixX<double> curves(12, 2);
  curves.col(0) = random_curves(rng, 12, 1);
  curves.col(1) = -curves.col(0);
  const auto mean = rkhs_mean(sample_of(basis, curves), basis, 0.5);
  CHECK(mean.values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("values are the coefficient expansion by construction") {
  const auto basis = default_basis(20);
  Rng rng(4);
  const auto mean = rkhs_mean(sample_of(basis, random_curves(rng, 20, 5)), basis, 0.01);
  const VectorX<double> rebuilt = basis.eigenvectors * mean.coefficients;
  CHECK((rebuilt - mean.values).cwiseAbs().maxCoeff() == 0.0);
  CHECK(std::isfinite(rkhs_norm(mean)));
}

TEST_CASE("coefficients shrink monotonically in phi") {
  const auto basis = default_basis(24);
  Rng rng(5);
  const auto sample = sample_of(basis, random_curves(rng, 24, 7));
  const auto loose = rkhs_mean(sample, basis, 0.001);
  const auto tight = rkhs_mean(sample, basis, 0.3);
  for (Eigen::Index j = 0; j < basis.modes(); ++j) {
    CHECK(std::abs(tight.coefficients[j]) <= std::abs(loose.coefficients[j]) + 1e-18);
  }
}

TEST_CASE("pooled linearity of equal-size samples") {
  const auto basis = default_basis(18);
  Rng rng(6);
  const MatrixX<double> a = random_curves(rng, 18, 4);
  const MatrixX<double> b = random_curves(rng, 18, 4);
  MatrixX<double> pooled(18, 8);
  pooled << a, b;
  const double phi = 0.05;
  const auto mean_a = rkhs_mean(sample_of(basis, a), basis, phi);
  const auto mean_b = rkhs_mean(sample_of(basis, b), basis, phi);
  const auto mean_pooled = rkhs_mean(sample_of(basis, pooled), basis, phi);
  const VectorX<double> avg = 0.5 * (mean_a.values + mean_b.values);
  CHECK((mean_pooled.values - avg).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("phi -> 0 recovers the basis projection of the sample mean") {
  const auto basis = default_basis(30);
  Rng rng(7);
  const auto sample = sample_of(basis, random_curves(rng, 30, 6));
  const auto mean = rkhs_mean(sample, basis, 1e-10);
  const VectorX<double> sample_mean = sample.curves.rowwise().mean();
  VectorX<double> projection = VectorX<double>::Zero(30);
  for (Eigen::Index j = 0; j < basis.modes(); ++j) {
    projection += discrete_inner(sample_mean, basis.eigenvectors.col(j)) *
                  basis.eigenvectors.col(j);
  }
  CHECK((mean.values - projection).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("rkhs_distance satisfies the triangle inequality") {
  const auto basis = default_basis(14);
  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = rkhs_mean(sample_of(basis, random_curves(rng, 14, 2)), basis, 0.01);
    const auto b = rkhs_mean(sample_of(basis, random_curves(rng, 14, 2)), basis, 0.01);
    const auto c = rkhs_mean(sample_of(basis, random_curves(rng, 14, 2)), basis, 0.01);
    CHECK(rkhs_distance(a, c) <= rkhs_distance(a, b) + rkhs_distance(b, c) + 1e-12);
  }
}

TEST_CASE("adjacent samples move the mean at most 2 tau / (n sqrt(phi))") {
  const auto basis = default_basis(40);
  Rng rng(9);
  const Eigen::Index n = 50;
  const double tau = 1.0;
  const double phi = 0.01;
  const double bound = 2.0 * tau / (double(n) * std::sqrt(phi));
  for (int trial = 0; trial < 200; ++trial) {
    MatrixX<double> curves = random_curves(rng, 40, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      const double norm = ambient_norm<double>(curves.col(j), basis.grid);
      const double target = tau * (trial % 2 == 0 ? 1.0 : rng.uniform());
      if (norm > 0.0) curves.col(j) *= target / norm;
    }
    MatrixX<double> primed = curves;
    VectorX<double> replacement = random_curves(rng, 40, 1);
    replacement *= tau * rng.uniform() / ambient_norm(replacement, basis.grid);
    primed.col(Eigen::Index(trial) % n) = replacement;
    const auto mean = rkhs_mean(sample_of(basis, curves), basis, phi);
    const auto mean_primed = rkhs_mean(sample_of(basis, primed), basis, phi);
    CHECK(rkhs_distance(mean, mean_primed) <= bound * (1.0 + 1e-12));
  }
}

TEST_CASE("rkhs_mean argument validation") {
  const auto basis = default_basis(10);
  const auto sample = sample_of(basis, MatrixX<double>::Ones(10, 2));
  CHECK_THROWS_AS(rkhs_mean(sample, basis, 0.0), DomainError);
  CHECK_THROWS_AS(rkhs_mean(sample, basis, -1.0), DomainError);
  const auto other = default_basis(12);
  CHECK_THROWS_AS(rkhs_mean(sample, other, 0.1), DomainError);
  CurveSample<double> empty;
  empty.grid = basis.grid;
  empty.curves.resize(10, 0);
  CHECK_THROWS_AS(rkhs_mean(empty, basis, 0.1), DataError);
}
