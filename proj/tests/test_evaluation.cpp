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
#include <limits>

#include <doctest.h>

#include "gdpcurve/evaluation.hpp"
#include "gdpcurve/rng.hpp"

using namespace gdpcurve;

namespace {

PointCloud<double> cloud_of(std::initializer_list<double> xyz) {
  PointCloud<double> cloud;
  const Eigen::Index n = Eigen::Index(xyz.size()) / 3;
  cloud.points.resize(n, 3);
  Eigen::Index k = 0;
  for (const double v : xyz) {
    cloud.points(k / 3, k % 3) = v;
    ++k;
  }
  cloud.registered = true;
  return cloud;
}

PointCloud<double> random_cloud(Rng& rng, Eigen::Index n) {
  PointCloud<double> cloud;
  cloud.points.resize(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int w = 0; w < 3; ++w) cloud.points(i, w) = 2.0 * rng.normal();
  }
  cloud.registered = true;
  return cloud;
}

double brute_mse_pointwise(const PointCloud<double>& a, const PointCloud<double>& b) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    double d2 = 0.0;
    for (int w = 0; w < 3; ++w) {
      const double d = a.points(i, w) - b.points(i, w);
      d2 += d * d;
    }
    acc += d2;
  }
  return acc / double(a.size());
}

double brute_mse_nearest(const PointCloud<double>& ref, const PointCloud<double>& est) {
  double acc = 0.0;
  for (Eigen::Index j = 0; j < est.size(); ++j) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < ref.size(); ++i) {
      double d2 = 0.0;
      for (int w = 0; w < 3; ++w) {
        const double d = ref.points(i, w) - est.points(j, w);
        d2 += d * d;
      }
      best = std::min(best, d2);
    }
    acc += best;
  }
  return acc / double(est.size());
}

}  // namespace

TEST_CASE("mse_pointwise closed forms") {
  Rng rng(61);
  const auto a = random_cloud(rng, 20);
  CHECK(mse_pointwise(a, a) == 0.0);

  auto shifted = a;
  shifted.points.col(0).array() += 1.0;
  CHECK(mse_pointwise(a, shifted) == doctest::Approx(1.0).epsilon(1e-12));

  const auto b = random_cloud(rng, 20);
  CHECK(mse_pointwise(a, b) == doctest::Approx(brute_mse_pointwise(a, b)).epsilon(1e-14));
  CHECK(mse_pointwise(a, b) == doctest::Approx(mse_pointwise(b, a)).epsilon(1e-15));

  const auto c = random_cloud(rng, 21);
  CHECK_THROWS_AS(mse_pointwise(a, c), DomainError);
}

TEST_CASE("mse_nearest closed forms") {
  const auto reference = cloud_of({0, 0, 0, 2, 0, 0});
  const auto estimate = cloud_of({0.5, 0, 0});
  CHECK(mse_nearest(reference, estimate) == doctest::Approx(0.25).epsilon(1e-14));

  SUBCASE("subset of the reference scores zero") {
    const auto sub = cloud_of({2, 0, 0});
    CHECK(mse_nearest(reference, sub) == 0.0);
    CHECK(mse_nearest(reference, reference) == 0.0);
  }

  SUBCASE("asymmetric by definition") {
    const auto ref2 = cloud_of({0, 0, 0, 10, 0, 0});
    const auto est2 = cloud_of({0, 0, 0});
    CHECK(mse_nearest(ref2, est2) == 0.0);
    CHECK(mse_nearest(est2, ref2) == doctest::Approx(50.0).epsilon(1e-14));
  }

  SUBCASE("matches the all-pairs oracle on random clouds") {
    Rng rng(62);
    for (int trial = 0; trial < 5; ++trial) {
      const auto ref = random_cloud(rng, 100 + 80 * trial);
      const auto est = random_cloud(rng, 60 + 90 * trial);
      CHECK(mse_nearest(ref, est) ==
            doctest::Approx(brute_mse_nearest(ref, est)).epsilon(1e-14));
    }
  }

  SUBCASE("empty clouds are rejected") {
    PointCloud<double> empty;
    empty.points.resize(0, 3);
    CHECK_THROWS(mse_nearest(empty, reference));
    CHECK_THROWS(mse_nearest(reference, empty));
  }
}

TEST_CASE("align_scale recovers planted scales") {
  Rng rng(63);
  const auto reference = random_cloud(rng, 50);

  SUBCASE("identity when the estimate equals the reference") {
    const auto result = align_scale(reference, reference);
    CHECK(result.scale == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(result.objective <= 1e-18);
  }

  SUBCASE("inverse of a registered shrink") {
    auto half = reference;
    half.points *= 0.5;
    const auto result = align_scale(reference, half);
    CHECK(result.scale == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(result.objective <= 1e-12);
  }

  SUBCASE("objective never exceeds the unscaled objective") {
    for (int trial = 0; trial < 20; ++trial) {
      const auto ref = random_cloud(rng, 40);
      auto est = random_cloud(rng, 25);
      est.points *= 0.2 + 3.0 * rng.uniform();
      const auto result = align_scale(ref, est);
      CHECK(result.objective <= mse_nearest(ref, est) + 1e-12);
      CHECK(result.iterations >= 1);
      CHECK(result.iterations <= 50);
    }
  }

  SUBCASE("objective trace is monotone nonincreasing") {
    for (int trial = 0; trial < 20; ++trial) {
      const auto ref = random_cloud(rng, 30);
      auto est = random_cloud(rng, 30);
      est.points *= 0.1 + 5.0 * rng.uniform();
      const auto result = align_scale(ref, est);
      REQUIRE(!result.objective_trace.empty());
      for (std::size_t i = 1; i < result.objective_trace.size(); ++i) {
        CHECK(result.objective_trace[i] <= result.objective_trace[i - 1] + 1e-12);
      }
      CHECK(result.objective == result.objective_trace.back());
    }
  }

  SUBCASE("all-zero estimate is rejected") {
    PointCloud<double> zero;
    zero.points = MatrixX3<double>::Zero(4, 3);
    CHECK_THROWS_AS(align_scale(reference, zero), DomainError);
  }
}
