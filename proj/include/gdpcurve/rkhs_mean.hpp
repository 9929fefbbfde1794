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

#ifndef GDPCURVE_RKHS_MEAN_HPP
#define GDPCURVE_RKHS_MEAN_HPP

#include <cmath>

#include "gdpcurve/circle_kernel.hpp"
#include "gdpcurve/common.hpp"

// Smoothness-regularized mean of a sample of closed scalar curves:
//
//   h(D) = (1/n) sum_i sum_j lambda_j / (lambda_j + phi) <f_i, b_j> b_j
//
// the closed-form solution of the penalized least-squares problem in the
// RKHS of the kernel eigenbasis. The penalty phi also controls the
// sensitivity bound 4 tau^2 / (n^2 phi) used by the privacy layer, which is
// why phi = 0 is rejected here.

namespace gdpcurve {

template <typename Scalar>
struct CurveSample {
  CircleGrid<Scalar> grid;
  MatrixX<Scalar> curves;  // m x n, one curve per column

  Eigen::Index n() const { return curves.cols(); }
};

template <typename Scalar>
void validate(const CurveSample<Scalar>& sample) {
  if (sample.curves.cols() < 1) {
    throw DataError("curve sample is empty");
  }
  if (sample.curves.rows() != sample.grid.m) {
    throw DomainError("curve sample does not match its grid");
  }
  if (!sample.curves.allFinite()) {
    throw DataError("curve sample contains non-finite values");
  }
}

// Discrete L2 norm sqrt((1/m) sum_i f(t_i)^2); the norm bounded by tau.
template <typename Scalar>
Scalar ambient_norm(const VectorX<Scalar>& curve, const CircleGrid<Scalar>& grid) {
  if (curve.size() != grid.m) {
    throw DomainError("ambient_norm: curve does not match grid");
  }
  using std::sqrt;
  return sqrt(discrete_inner(curve, curve));
}

template <typename Scalar>
struct RkhsMean {
  VectorX<Scalar> coefficients;  // c_j per retained mode
  VectorX<Scalar> values;        // sum_j c_j b_j on the grid
  VectorX<Scalar> eigenvalues;   // copied from the basis, for the RKHS norm
  Scalar phi = Scalar(0);
};

template <typename Scalar>
RkhsMean<Scalar> rkhs_mean(const CurveSample<Scalar>& sample,
                           const KernelEigenbasis<Scalar>& basis, Scalar phi) {
  validate(sample);
  if (!(phi > Scalar(0))) {
    throw DomainError("rkhs_mean: phi must be positive");
  }
  if (sample.grid.m != basis.grid.m) {
    throw DomainError("rkhs_mean: sample grid does not match basis grid");
  }
  const VectorX<Scalar> mean_curve = sample.curves.rowwise().mean();
  RkhsMean<Scalar> out;
  out.phi = phi;
  out.eigenvalues = basis.eigenvalues;
  const Eigen::Index p = basis.modes();
  out.coefficients.resize(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    const Scalar lambda = basis.eigenvalues[j];
    const Scalar projection = discrete_inner(mean_curve, basis.eigenvectors.col(j));
    out.coefficients[j] = lambda / (lambda + phi) * projection;
  }
  out.values = basis.eigenvectors * out.coefficients;
  return out;
}

// ||h||_H = sqrt(sum_j c_j^2 / lambda_j).
template <typename Scalar>
Scalar rkhs_norm(const RkhsMean<Scalar>& mean) {
  using std::sqrt;
  Scalar total = Scalar(0);
  for (Eigen::Index j = 0; j < mean.coefficients.size(); ++j) {
    total += mean.coefficients[j] * mean.coefficients[j] / mean.eigenvalues[j];
  }
  return sqrt(total);
}

// RKHS distance between two means computed in the same eigenbasis.
template <typename Scalar>
Scalar rkhs_distance(const RkhsMean<Scalar>& a, const RkhsMean<Scalar>& b) {
  if (a.coefficients.size() != b.coefficients.size()) {
    throw DomainError("rkhs_distance: means use different bases");
  }
  using std::sqrt;
  Scalar total = Scalar(0);
  for (Eigen::Index j = 0; j < a.coefficients.size(); ++j) {
    const Scalar d = a.coefficients[j] - b.coefficients[j];
    total += d * d / a.eigenvalues[j];
  }
  return sqrt(total);
}

}  // namespace gdpcurve

#endif  // GDPCURVE_RKHS_MEAN_HPP
