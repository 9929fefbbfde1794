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

#ifndef GDPCURVE_CIRCLE_KERNEL_HPP
#define GDPCURVE_CIRCLE_KERNEL_HPP

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "gdpcurve/common.hpp"

// Periodic kernel on the unit circle, its Gram matrix on a uniform grid, and
// the eigenbasis shared by the RKHS mean and the Gaussian-process noise.
//
// Conventions fixed here and used by every downstream module:
//   * The grid stores m distinct parameters t_i = i/m; t = 1 is identified
//     with t = 0, so no endpoint is duplicated and K stays nonsingular. The
//     closing point is re-added only when curves are exported.
//   * The inner product on grid functions is uniform quadrature on the
//     circle, <f,g> = (1/m) sum_i f(t_i) g(t_i).
//   * Eigenpairs are normalized against that inner product: eigenvalues are
//     the matrix eigenvalues divided by m and eigenvectors are scaled by
//     sqrt(m), so that <b_i,b_j> = delta_ij and sum_j lambda_j b_j b_j^T = K.

namespace gdpcurve {

template <typename Scalar>
struct CircleGrid {
  Eigen::Index m = 0;
  VectorX<Scalar> points;  // t_i = i/m, i = 0..m-1
};

template <typename Scalar>
CircleGrid<Scalar> make_circle_grid(Eigen::Index m) {
  if (m < 1) throw DomainError("circle grid needs at least one point");
  CircleGrid<Scalar> grid;
  grid.m = m;
  grid.points.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    grid.points[i] = static_cast<Scalar>(i) / static_cast<Scalar>(m);
  }
  return grid;
}

template <typename Scalar>
struct PeriodicKernelParams {
  Scalar rho = Scalar(1);    // range
  Scalar alpha = Scalar(1);  // smoothness, in (0, 1]
};

template <typename Scalar>
void validate(const PeriodicKernelParams<Scalar>& params) {
  if (!(params.rho > Scalar(0))) {
    throw DomainError("kernel range rho must be positive");
  }
  if (!(params.alpha > Scalar(0)) || !(params.alpha <= Scalar(1))) {
    throw DomainError("kernel smoothness alpha must lie in (0, 1]");
  }
}

// omega(t) = (cos 2 pi t, sin 2 pi t); omega(0) = omega(1).
template <typename Scalar>
Vector2<Scalar> wrap(Scalar t) {
  if (!(t >= Scalar(0)) || !(t <= Scalar(1))) {
    throw DomainError("wrap: parameter must lie in [0, 1]");
  }
  using std::cos;
  using std::sin;
  const Scalar angle = Scalar(2) * std::numbers::pi_v<Scalar> * t;
  return Vector2<Scalar>(cos(angle), sin(angle));
}

// Geodesic distance arccos<a, b>, in [0, pi].
template <typename Scalar>
Scalar circle_distance(const Vector2<Scalar>& a, const Vector2<Scalar>& b) {
  using std::abs;
  using std::acos;
  if (abs(a.norm() - Scalar(1)) > Scalar(1e-9) ||
      abs(b.norm() - Scalar(1)) > Scalar(1e-9)) {
    throw DomainError("circle_distance: inputs must be unit vectors");
  }
  Scalar c = a.dot(b);
  if (c > Scalar(1)) c = Scalar(1);
  if (c < Scalar(-1)) c = Scalar(-1);
  return acos(c);
}

// k(s,t) = exp(-[d(omega(s), omega(t)) / rho]^alpha).
//
// The inner product is evaluated through the angle difference,
// <omega(s), omega(t)> = cos(2 pi (s - t)). This is the same number in exact
// arithmetic, but it keeps k(s,s) = 1 exact: forming cos^2 + sin^2 can land
// one ulp below 1, and arccos followed by the fractional power turns that
// ulp into a visible dent on the diagonal.
template <typename Scalar>
Scalar kernel_eval(Scalar s, Scalar t, const PeriodicKernelParams<Scalar>& params) {
  validate(params);
  if (!(s >= Scalar(0)) || !(s <= Scalar(1)) || !(t >= Scalar(0)) ||
      !(t <= Scalar(1))) {
    throw DomainError("kernel_eval: parameters must lie in [0, 1]");
  }
  using std::exp;
  using std::pow;
  Scalar diff = s - t;
  if (diff < Scalar(0)) diff += Scalar(1);
  const Scalar d =
      circle_distance<Scalar>(wrap(diff), Vector2<Scalar>(Scalar(1), Scalar(0)));
  return exp(-pow(d / params.rho, params.alpha));
}

// Gram matrix on the uniform grid. Entries depend only on (i - j) mod m, so
// the matrix is assembled from its first row; the row is mirrored about m/2
// to make symmetry and the circulant structure exact rather than within
// rounding of the trigonometry.
template <typename Scalar>
MatrixX<Scalar> build_kernel_matrix(const CircleGrid<Scalar>& grid,
                                    const PeriodicKernelParams<Scalar>& params) {
  validate(params);
  if (grid.m < 1 || grid.points.size() != grid.m) {
    throw DomainError("build_kernel_matrix: invalid grid");
  }
  const Eigen::Index m = grid.m;
  VectorX<Scalar> row0(m);
  for (Eigen::Index k = 0; k <= m / 2; ++k) {
    row0[k] = kernel_eval<Scalar>(Scalar(0), grid.points[k], params);
  }
  for (Eigen::Index k = m / 2 + 1; k < m; ++k) row0[k] = row0[m - k];
  MatrixX<Scalar> K(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      K(i, j) = row0[(j - i + m) % m];
    }
  }
  return K;
}

template <typename Scalar>
struct KernelEigenbasis {
  CircleGrid<Scalar> grid;
  VectorX<Scalar> eigenvalues;   // descending, strictly positive
  MatrixX<Scalar> eigenvectors;  // m x p, columns orthonormal under <.,.>
  MatrixX<Scalar> kernel_matrix;

  Eigen::Index modes() const { return eigenvalues.size(); }
};

// Inner product <f,g> = (1/m) sum_i f_i g_i that the eigenbasis is
// orthonormal under.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar discrete_inner(const Eigen::MatrixBase<DerivedA>& f,
                                         const Eigen::MatrixBase<DerivedB>& g) {
  if (f.size() != g.size() || f.size() == 0) {
    throw DomainError("discrete_inner: size mismatch");
  }
  using Scalar = typename DerivedA::Scalar;
  return f.derived().dot(g.derived()) / static_cast<Scalar>(f.size());
}

// Spectral decomposition of K with eigenvalues below 1e-12 * lambda_max
// dropped; such modes carry no signal and would destabilize the shrinkage
// ratios lambda / (lambda + phi).
template <typename Scalar>
KernelEigenbasis<Scalar> eigendecompose(const CircleGrid<Scalar>& grid,
                                        const MatrixX<Scalar>& K) {
  const Eigen::Index m = grid.m;
  if (K.rows() != m || K.cols() != m || m < 1) {
    throw DomainError("eigendecompose: matrix does not match grid");
  }
  if (!K.isApprox(K.transpose(), Scalar(1e-12))) {
    throw DomainError("eigendecompose: matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> solver(K);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigendecompose: eigen-solver did not converge");
  }
  const VectorX<Scalar>& values = solver.eigenvalues();  // ascending
  const Scalar lambda_max = values[m - 1];
  const Scalar cutoff = Scalar(1e-12) * lambda_max;
  Eigen::Index p = 0;
  while (p < m && values[m - 1 - p] >= cutoff) ++p;
  KernelEigenbasis<Scalar> basis;
  basis.grid = grid;
  basis.kernel_matrix = K;
  basis.eigenvalues.resize(p);
  basis.eigenvectors.resize(m, p);
  using std::sqrt;
  const Scalar scale = sqrt(static_cast<Scalar>(m));
  for (Eigen::Index j = 0; j < p; ++j) {
    const Scalar lambda = values[m - 1 - j] / static_cast<Scalar>(m);
    if (!(lambda > Scalar(0))) {
      throw NumericalError("eigendecompose: retained eigenvalue is not positive");
    }
    basis.eigenvalues[j] = lambda;
    basis.eigenvectors.col(j) = scale * solver.eigenvectors().col(m - 1 - j);
  }
  return basis;
}

template <typename Scalar>
KernelEigenbasis<Scalar> build_eigenbasis(const CircleGrid<Scalar>& grid,
                                          const PeriodicKernelParams<Scalar>& params) {
  return eigendecompose(grid, build_kernel_matrix(grid, params));
}

}  // namespace gdpcurve

#endif  // GDPCURVE_CIRCLE_KERNEL_HPP
