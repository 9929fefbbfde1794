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

#ifndef GDPCURVE_BASELINE_POINTWISE_HPP
#define GDPCURVE_BASELINE_POINTWISE_HPP

#include <cstdint>
#include <vector>

#include "gdpcurve/common.hpp"
#include "gdpcurve/rng.hpp"
#include "gdpcurve/surface.hpp"

// Point-wise GDP baseline: every coordinate of every registered point is
// released independently with budget mu_p = sqrt(mu_T^2 / (3P)) and noise
// scale Delta_{k,l} / mu_p, where Delta_{k,l} is the per-entry max difference
// across the dataset. Like the functional mechanism's tau, that sensitivity
// is data-driven and must be flagged as such in release reports.

namespace gdpcurve {

template <typename Scalar>
struct PointwiseSensitivity {
  MatrixX3<Scalar> deltas;  // P x 3, entrywise max_{i,j} |X_i - X_j|
};

namespace detail {

template <typename Scalar>
void require_registered_dataset(const std::vector<PointCloud<Scalar>>& dataset) {
  if (dataset.empty()) throw DomainError("point cloud dataset is empty");
  const Eigen::Index p = dataset.front().size();
  for (const PointCloud<Scalar>& cloud : dataset) {
    validate(cloud);
    if (cloud.size() != p) {
      throw DomainError("point clouds are not registered: sizes differ");
    }
  }
}

}  // namespace detail

template <typename Scalar>
PointCloud<Scalar> pointwise_mean(const std::vector<PointCloud<Scalar>>& dataset) {
  detail::require_registered_dataset(dataset);
  PointCloud<Scalar> mean;
  mean.registered = true;
  mean.points = MatrixX3<Scalar>::Zero(dataset.front().size(), 3);
  for (const PointCloud<Scalar>& cloud : dataset) mean.points += cloud.points;
  mean.points /= static_cast<Scalar>(dataset.size());
  return mean;
}

// Delta_{k,l} = max_{i,j} |X_i[k,l] - X_j[k,l]| = entrywise max - min.
template <typename Scalar>
PointwiseSensitivity<Scalar> pointwise_sensitivity(
    const std::vector<PointCloud<Scalar>>& dataset) {
  detail::require_registered_dataset(dataset);
  MatrixX3<Scalar> lo = dataset.front().points;
  MatrixX3<Scalar> hi = dataset.front().points;
  for (const PointCloud<Scalar>& cloud : dataset) {
    lo = lo.cwiseMin(cloud.points);
    hi = hi.cwiseMax(cloud.points);
  }
  PointwiseSensitivity<Scalar> sens;
  sens.deltas = hi - lo;
  return sens;
}

// mu_p = sqrt(mu_total^2 / (3P)); composing the 3P releases recovers mu_total.
template <typename Scalar>
Scalar split_budget(Scalar mu_total, Eigen::Index points) {
  if (!(mu_total > Scalar(0))) throw DomainError("split_budget: mu_total must be positive");
  if (points < 1) throw DomainError("split_budget: need at least one point");
  using std::sqrt;
  return sqrt(mu_total * mu_total / (Scalar(3) * static_cast<Scalar>(points)));
}

template <typename Scalar>
PointCloud<Scalar> pointwise_sanitize(const PointCloud<Scalar>& mean,
                                      const PointwiseSensitivity<Scalar>& sens,
                                      Scalar mu_p, std::uint64_t seed,
                                      int threads = 1) {
  validate(mean);
  if (sens.deltas.rows() != mean.size()) {
    throw DomainError("pointwise_sanitize: sensitivity shape does not match mean");
  }
  if (!(mu_p > Scalar(0))) throw DomainError("pointwise_sanitize: mu_p must be positive");
  PointCloud<Scalar> out;
  out.registered = mean.registered;
  out.points.resize(mean.size(), 3);
  parallel_for(static_cast<std::size_t>(mean.size()), threads, [&](std::size_t k) {
    for (Eigen::Index l = 0; l < 3; ++l) {
      Rng rng(derive_seed(seed, 0x5057ULL, static_cast<std::uint64_t>(k),
                          static_cast<std::uint64_t>(l)));
      const Eigen::Index row = static_cast<Eigen::Index>(k);
      out.points(row, l) = mean.points(row, l) +
                           sens.deltas(row, l) / mu_p *
                               static_cast<Scalar>(rng.normal());
    }
  });
  return out;
}

}  // namespace gdpcurve

#endif  // GDPCURVE_BASELINE_POINTWISE_HPP
