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

#ifndef GDPCURVE_SURFACE_HPP
#define GDPCURVE_SURFACE_HPP

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <cstdint>
#include <vector>

#include "gdpcurve/circle_kernel.hpp"
#include "gdpcurve/common.hpp"
#include "gdpcurve/rng.hpp"

// Disk-parameterized surfaces f : D -> R^3 on a polar grid, their unit-area
// normalization, rigid alignment, and the radial curves handed to the
// functional mechanism. Radii live in (0, 1]; the degenerate center r = 0 is
// not stored (every stored circle has m distinct points) but the quadrature
// integrates from r = 0.

namespace gdpcurve {

template <typename Scalar>
struct DiskSurface {
  VectorX<Scalar> radii;      // increasing values in (0, 1]
  CircleGrid<Scalar> angles;  // m angle parameters t_j = j/m
  MatrixX<Scalar> x, y, z;    // coordinate fields, n_r x m

  Eigen::Index n_r() const { return radii.size(); }
  Eigen::Index m() const { return angles.m; }
};

template <typename Scalar>
void validate(const DiskSurface<Scalar>& surface) {
  const Eigen::Index nr = surface.n_r();
  const Eigen::Index m = surface.m();
  if (nr < 1 || m < 1) throw DomainError("surface grid is empty");
  if (surface.angles.points.size() != m) throw DomainError("surface angle grid is inconsistent");
  for (Eigen::Index i = 0; i < nr; ++i) {
    if (!(surface.radii[i] > Scalar(0)) || !(surface.radii[i] <= Scalar(1))) {
      throw DomainError("surface radii must lie in (0, 1]");
    }
    if (i > 0 && !(surface.radii[i] > surface.radii[i - 1])) {
      throw DomainError("surface radii must increase strictly");
    }
  }
  for (const MatrixX<Scalar>* field : {&surface.x, &surface.y, &surface.z}) {
    if (field->rows() != nr || field->cols() != m) {
      throw DomainError("surface coordinate field has wrong shape");
    }
    if (!field->allFinite()) throw DataError("surface contains non-finite coordinates");
  }
}

template <typename Scalar>
struct PointCloud {
  MatrixX3<Scalar> points;
  bool registered = false;

  Eigen::Index size() const { return points.rows(); }
};

template <typename Scalar>
void validate(const PointCloud<Scalar>& cloud) {
  if (cloud.size() < 1) throw DataError("point cloud is empty");
  if (!cloud.points.allFinite()) throw DataError("point cloud contains non-finite values");
}

namespace detail {

// d/dtheta with periodic wrap; fourth-order central stencil once the circle
// has five points (the second-order stencil leaves an O((2pi/m)^2) bias that
// is visible in the unit-disk area check), second-order below that.
template <typename Scalar>
MatrixX<Scalar> theta_derivative(const MatrixX<Scalar>& F, Eigen::Index m) {
  MatrixX<Scalar> out(F.rows(), m);
  if (m >= 5) {
    const Scalar scale = static_cast<Scalar>(m) / Scalar(12);
    for (Eigen::Index j = 0; j < m; ++j) {
      const Eigen::Index jp1 = (j + 1) % m, jp2 = (j + 2) % m;
      const Eigen::Index jm1 = (j + m - 1) % m, jm2 = (j + m - 2) % m;
      out.col(j) = (-F.col(jp2) + Scalar(8) * F.col(jp1) -
                    Scalar(8) * F.col(jm1) + F.col(jm2)) *
                   scale;
    }
  } else if (m >= 3) {
    const Scalar scale = static_cast<Scalar>(m) / Scalar(2);
    for (Eigen::Index j = 0; j < m; ++j) {
      const Eigen::Index jp1 = (j + 1) % m, jm1 = (j + m - 1) % m;
      out.col(j) = (F.col(jp1) - F.col(jm1)) * scale;
    }
  } else {
    throw DomainError("theta derivative needs at least three angle points");
  }
  return out;
}

template <typename Scalar>
MatrixX<Scalar> radial_derivative(const MatrixX<Scalar>& F, const VectorX<Scalar>& radii) {
  const Eigen::Index nr = radii.size();
  if (nr < 2) throw DomainError("radial derivative needs at least two radii");
  MatrixX<Scalar> out(nr, F.cols());
  out.row(0) = (F.row(1) - F.row(0)) / (radii[1] - radii[0]);
  out.row(nr - 1) = (F.row(nr - 1) - F.row(nr - 2)) / (radii[nr - 1] - radii[nr - 2]);
  for (Eigen::Index i = 1; i < nr - 1; ++i) {
    out.row(i) = (F.row(i + 1) - F.row(i - 1)) / (radii[i + 1] - radii[i - 1]);
  }
  return out;
}

// Midpoint-rule radial weights; the first cell extends down to r = 0, the
// last ends at the outermost stored radius.
template <typename Scalar>
VectorX<Scalar> radial_weights(const VectorX<Scalar>& radii) {
  const Eigen::Index nr = radii.size();
  VectorX<Scalar> edges(nr + 1);
  edges[0] = Scalar(0);
  for (Eigen::Index i = 0; i + 1 < nr; ++i) {
    edges[i + 1] = (radii[i] + radii[i + 1]) / Scalar(2);
  }
  edges[nr] = radii[nr - 1];
  VectorX<Scalar> w(nr);
  for (Eigen::Index i = 0; i < nr; ++i) w[i] = edges[i + 1] - edges[i];
  return w;
}

// ||f_r x f_theta|| on the grid.
template <typename Scalar>
MatrixX<Scalar> cross_norm(const DiskSurface<Scalar>& surface) {
  const Eigen::Index m = surface.m();
  const MatrixX<Scalar> xr = radial_derivative(surface.x, surface.radii);
  const MatrixX<Scalar> yr = radial_derivative(surface.y, surface.radii);
  const MatrixX<Scalar> zr = radial_derivative(surface.z, surface.radii);
  const MatrixX<Scalar> xt = theta_derivative(surface.x, m);
  const MatrixX<Scalar> yt = theta_derivative(surface.y, m);
  const MatrixX<Scalar> zt = theta_derivative(surface.z, m);
  const auto cx = (yr.array() * zt.array() - zr.array() * yt.array());
  const auto cy = (zr.array() * xt.array() - xr.array() * zt.array());
  const auto cz = (xr.array() * yt.array() - yr.array() * xt.array());
  return (cx.square() + cy.square() + cz.square()).sqrt().matrix();
}

}  // namespace detail

// Quadrature of ||f_r x f_theta|| over the disk.
template <typename Scalar>
Scalar surface_area(const DiskSurface<Scalar>& surface) {
  validate(surface);
  if (surface.n_r() < 2 || surface.m() < 3) {
    throw DomainError("surface_area: grid too coarse (need n_r >= 2, m >= 3)");
  }
  const MatrixX<Scalar> integrand = detail::cross_norm(surface);
  const VectorX<Scalar> w = detail::radial_weights(surface.radii);
  return (w.transpose() * integrand).sum() / static_cast<Scalar>(surface.m());
}

// Area-weighted centroid (1/area) integral of f ||f_r x f_theta||.
template <typename Scalar>
Vector3<Scalar> surface_centroid(const DiskSurface<Scalar>& surface) {
  validate(surface);
  if (surface.n_r() < 2 || surface.m() < 3) {
    throw DomainError("surface_centroid: grid too coarse (need n_r >= 2, m >= 3)");
  }
  const MatrixX<Scalar> integrand = detail::cross_norm(surface);
  const VectorX<Scalar> w = detail::radial_weights(surface.radii);
  const Scalar area = (w.transpose() * integrand).sum() / static_cast<Scalar>(surface.m());
  if (!(area > Scalar(0))) throw DomainError("surface_centroid: surface has zero area");
  Vector3<Scalar> c;
  const MatrixX<Scalar>* fields[3] = {&surface.x, &surface.y, &surface.z};
  for (int k = 0; k < 3; ++k) {
    c[k] = (w.transpose() * (fields[k]->array() * integrand.array()).matrix()).sum() /
           (static_cast<Scalar>(surface.m()) * area);
  }
  return c;
}

template <typename Scalar>
DiskSurface<Scalar> scaled(DiskSurface<Scalar> surface, Scalar c) {
  surface.x *= c;
  surface.y *= c;
  surface.z *= c;
  return surface;
}

template <typename Scalar>
DiskSurface<Scalar> translated(DiskSurface<Scalar> surface, const Vector3<Scalar>& v) {
  surface.x.array() += v[0];
  surface.y.array() += v[1];
  surface.z.array() += v[2];
  return surface;
}

template <typename Scalar>
DiskSurface<Scalar> rotated(const DiskSurface<Scalar>& surface, const Matrix3<Scalar>& rotation) {
  DiskSurface<Scalar> out = surface;
  for (Eigen::Index i = 0; i < surface.n_r(); ++i) {
    for (Eigen::Index j = 0; j < surface.m(); ++j) {
      const Vector3<Scalar> p(surface.x(i, j), surface.y(i, j), surface.z(i, j));
      const Vector3<Scalar> q = rotation * p;
      out.x(i, j) = q[0];
      out.y(i, j) = q[1];
      out.z(i, j) = q[2];
    }
  }
  return out;
}

// Unit area and centered: divide by sqrt(area), then subtract the area
// weighted centroid. Dividing by the area itself (rather than its square
// root) would rescale the area quadratically and miss the unit-area target.
template <typename Scalar>
DiskSurface<Scalar> normalize(const DiskSurface<Scalar>& surface) {
  using std::isfinite;
  using std::sqrt;
  const Scalar area = surface_area(surface);
  if (!(area > Scalar(0)) || !isfinite(area)) {
    throw DomainError("normalize: surface area must be positive and finite");
  }
  DiskSurface<Scalar> out = scaled(surface, Scalar(1) / sqrt(area));
  const Vector3<Scalar> centroid = surface_centroid(out);
  return translated(out, Vector3<Scalar>(-centroid));
}

template <typename Scalar>
struct ProcrustesResult {
  Matrix3<Scalar> rotation;
  PointCloud<Scalar> aligned;
};

// Orthogonal Procrustes restricted to proper rotations about the origin
// (Kabsch): O = argmin ||cloud O^T - template||_F with det(O) = 1.
template <typename Scalar>
ProcrustesResult<Scalar> procrustes_align(const PointCloud<Scalar>& cloud,
                                          const PointCloud<Scalar>& reference) {
  validate(cloud);
  validate(reference);
  if (cloud.size() != reference.size()) {
    throw DomainError("procrustes_align: clouds must be registered with equal sizes");
  }
  if (cloud.size() < 3) {
    throw NumericalError("procrustes_align: need at least three points");
  }
  const Matrix3<Scalar> cross = cloud.points.transpose() * reference.points;
  Eigen::JacobiSVD<Matrix3<Scalar>> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vector3<Scalar>& s = svd.singularValues();
  if (!(s[0] > Scalar(0)) || s[1] <= Scalar(1e-12) * s[0]) {
    throw NumericalError(
        "procrustes_align: cross-covariance is rank deficient; the rotation "
        "is not determined by these clouds");
  }
  const Matrix3<Scalar>& u = svd.matrixU();
  const Matrix3<Scalar>& v = svd.matrixV();
  Vector3<Scalar> d(Scalar(1), Scalar(1), (v * u.transpose()).determinant());
  ProcrustesResult<Scalar> result;
  result.rotation = v * d.asDiagonal() * u.transpose();
  result.aligned.points = cloud.points * result.rotation.transpose();
  result.aligned.registered = cloud.registered;
  return result;
}

template <typename Scalar>
struct RadialCurveSet {
  Eigen::Index J = 0;
  VectorX<Scalar> radii_selected;  // J radii, subset of the surface's radii
  CircleGrid<Scalar> grid;         // shared angle grid
  MatrixX<Scalar> x, y, z;         // J x m coordinate curves
};

// Picks the stored circle nearest each target radius j/J (j = 1..J), keeping
// indices strictly increasing so the J circles are distinct. The outermost
// target sits at the disk boundary; r = 0 is a point, not a curve.
template <typename Scalar>
RadialCurveSet<Scalar> extract_radial_curves(const DiskSurface<Scalar>& surface,
                                             Eigen::Index J) {
  validate(surface);
  if (J < 1) throw DomainError("extract_radial_curves: J must be positive");
  if (J > surface.n_r()) {
    throw DomainError("extract_radial_curves: J exceeds the number of stored circles");
  }
  const Eigen::Index nr = surface.n_r();
  RadialCurveSet<Scalar> set;
  set.J = J;
  set.grid = surface.angles;
  set.radii_selected.resize(J);
  set.x.resize(J, surface.m());
  set.y.resize(J, surface.m());
  set.z.resize(J, surface.m());
  Eigen::Index prev = -1;
  for (Eigen::Index j = 1; j <= J; ++j) {
    const Scalar target = static_cast<Scalar>(j) / static_cast<Scalar>(J);
    Eigen::Index best = prev + 1;
    using std::abs;
    for (Eigen::Index i = prev + 1; i < nr; ++i) {
      if (abs(surface.radii[i] - target) < abs(surface.radii[best] - target)) best = i;
    }
    const Eigen::Index slack = nr - (J - j);  // leave room for the remaining picks
    if (best > slack - 1) best = slack - 1;
    set.radii_selected[j - 1] = surface.radii[best];
    set.x.row(j - 1) = surface.x.row(best);
    set.y.row(j - 1) = surface.y.row(best);
    set.z.row(j - 1) = surface.z.row(best);
    prev = best;
  }
  return set;
}

// J x (m+1) points, closing point duplicated exactly, curve-major rows.
template <typename Scalar>
PointCloud<Scalar> curves_to_point_cloud(const RadialCurveSet<Scalar>& set) {
  const Eigen::Index m = set.grid.m;
  if (set.J < 1 || set.x.rows() != set.J || set.x.cols() != m) {
    throw DomainError("curves_to_point_cloud: invalid curve set");
  }
  PointCloud<Scalar> cloud;
  cloud.registered = true;
  cloud.points.resize(set.J * (m + 1), 3);
  for (Eigen::Index j = 0; j < set.J; ++j) {
    const Eigen::Index base = j * (m + 1);
    for (Eigen::Index i = 0; i <= m; ++i) {
      const Eigen::Index col = i % m;
      cloud.points(base + i, 0) = set.x(j, col);
      cloud.points(base + i, 1) = set.y(j, col);
      cloud.points(base + i, 2) = set.z(j, col);
    }
  }
  return cloud;
}

// Registered grid view of a surface: row i*m + j holds f(r_i, t_j).
template <typename Scalar>
PointCloud<Scalar> surface_to_point_cloud(const DiskSurface<Scalar>& surface) {
  validate(surface);
  PointCloud<Scalar> cloud;
  cloud.registered = true;
  cloud.points.resize(surface.n_r() * surface.m(), 3);
  for (Eigen::Index i = 0; i < surface.n_r(); ++i) {
    for (Eigen::Index j = 0; j < surface.m(); ++j) {
      const Eigen::Index row = i * surface.m() + j;
      cloud.points(row, 0) = surface.x(i, j);
      cloud.points(row, 1) = surface.y(i, j);
      cloud.points(row, 2) = surface.z(i, j);
    }
  }
  return cloud;
}

template <typename Scalar>
struct SyntheticConfig {
  Eigen::Index n_surfaces = 50;
  Eigen::Index n_r = 40;
  Eigen::Index m = 80;
  Scalar perturbation = Scalar(0.05);    // bump amplitude of individual variation
  Scalar scale_jitter = Scalar(0);       // log-scale spread of per-face size
  Scalar rotation_jitter = Scalar(0);    // radians; random-axis pose noise
};

template <typename Scalar>
void validate(const SyntheticConfig<Scalar>& config) {
  if (config.n_surfaces < 1) throw DomainError("synthetic config: need at least one surface");
  if (config.n_r < 2 || config.m < 3) {
    throw DomainError("synthetic config: grid too coarse (need n_r >= 2, m >= 3)");
  }
  if (!(config.perturbation >= Scalar(0)) || !(config.scale_jitter >= Scalar(0)) ||
      !(config.rotation_jitter >= Scalar(0))) {
    throw DomainError("synthetic config: jitter amplitudes must be nonnegative");
  }
}

// Shared face-like height field: a dome carrying a nose bump at the center,
// two eye bumps, and a mouth ridge.
template <typename Scalar>
DiskSurface<Scalar> template_surface(Eigen::Index n_r, Eigen::Index m) {
  if (n_r < 2 || m < 3) throw DomainError("template_surface: grid too coarse");
  DiskSurface<Scalar> surface;
  surface.radii.resize(n_r);
  for (Eigen::Index i = 0; i < n_r; ++i) {
    surface.radii[i] = static_cast<Scalar>(i + 1) / static_cast<Scalar>(n_r);
  }
  surface.angles = make_circle_grid<Scalar>(m);
  surface.x.resize(n_r, m);
  surface.y.resize(n_r, m);
  surface.z.resize(n_r, m);
  using std::cos;
  using std::exp;
  using std::sin;
  const Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
  for (Eigen::Index i = 0; i < n_r; ++i) {
    const Scalar r = surface.radii[i];
    for (Eigen::Index j = 0; j < m; ++j) {
      const Scalar t = surface.angles.points[j];
      const Scalar px = r * cos(two_pi * t);
      const Scalar py = r * sin(two_pi * t);
      Scalar h = Scalar(0.25) * (Scalar(1) - r * r);
      h += Scalar(0.35) * exp(-(px * px + py * py) / Scalar(0.0324));
      const Scalar eyl = (px - Scalar(0.35)) * (px - Scalar(0.35)) +
                         (py - Scalar(0.3)) * (py - Scalar(0.3));
      const Scalar eyr = (px + Scalar(0.35)) * (px + Scalar(0.35)) +
                         (py - Scalar(0.3)) * (py - Scalar(0.3));
      h += Scalar(0.15) * (exp(-eyl / Scalar(0.0144)) + exp(-eyr / Scalar(0.0144)));
      h += Scalar(0.12) * exp(-(py + Scalar(0.35)) * (py + Scalar(0.35)) / Scalar(0.006)) *
           exp(-px * px / Scalar(0.08));
      surface.x(i, j) = px;
      surface.y(i, j) = py;
      surface.z(i, j) = h;
    }
  }
  return surface;
}

namespace detail {

template <typename Scalar>
Matrix3<Scalar> random_rotation(Rng& rng, Scalar angle_scale) {
  using std::cos;
  using std::sin;
  using std::sqrt;
  Vector3<Scalar> axis(static_cast<Scalar>(rng.normal()),
                       static_cast<Scalar>(rng.normal()),
                       static_cast<Scalar>(rng.normal()));
  const Scalar norm = axis.norm();
  const Scalar angle = angle_scale * static_cast<Scalar>(rng.normal());
  if (!(norm > Scalar(0))) return Matrix3<Scalar>::Identity();
  axis /= norm;
  Matrix3<Scalar> k;
  k << Scalar(0), -axis[2], axis[1], axis[2], Scalar(0), -axis[0], -axis[1],
      axis[0], Scalar(0);
  return Matrix3<Scalar>::Identity() + sin(angle) * k +
         (Scalar(1) - cos(angle)) * (k * k);
}

}  // namespace detail

// n faces sharing the template shape plus smooth zero-mean height bumps,
// optional per-face scale and pose jitter. Per-face subseeds keep the output
// independent of generation order.
template <typename Scalar>
std::vector<DiskSurface<Scalar>> generate_synthetic_dataset(
    const SyntheticConfig<Scalar>& config, std::uint64_t seed) {
  validate(config);
  const DiskSurface<Scalar> base = template_surface<Scalar>(config.n_r, config.m);
  std::vector<DiskSurface<Scalar>> faces;
  faces.reserve(static_cast<std::size_t>(config.n_surfaces));
  using std::exp;
  using std::sqrt;
  const Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
  for (Eigen::Index idx = 0; idx < config.n_surfaces; ++idx) {
    Rng rng(derive_seed(seed, 0x5359ULL, static_cast<std::uint64_t>(idx)));
    DiskSurface<Scalar> face = base;
    constexpr int kBumps = 4;
    for (int b = 0; b < kBumps; ++b) {
      const Scalar angle = two_pi * static_cast<Scalar>(rng.uniform());
      const Scalar rad = Scalar(0.7) * sqrt(static_cast<Scalar>(rng.uniform()));
      const Scalar cx = rad * std::cos(angle);
      const Scalar cy = rad * std::sin(angle);
      const Scalar amplitude = config.perturbation * static_cast<Scalar>(rng.normal());
      const Scalar width = Scalar(0.18) + Scalar(0.1) * static_cast<Scalar>(rng.uniform());
      const Scalar inv_w2 = Scalar(1) / (width * width);
      for (Eigen::Index i = 0; i < config.n_r; ++i) {
        for (Eigen::Index j = 0; j < config.m; ++j) {
          const Scalar dx = base.x(i, j) - cx;
          const Scalar dy = base.y(i, j) - cy;
          face.z(i, j) += amplitude * exp(-(dx * dx + dy * dy) * inv_w2);
        }
      }
    }
    if (config.scale_jitter > Scalar(0)) {
      face = scaled(face, exp(config.scale_jitter * static_cast<Scalar>(rng.normal())));
    }
    if (config.rotation_jitter > Scalar(0)) {
      face = rotated(face, detail::random_rotation<Scalar>(rng, config.rotation_jitter));
    }
    faces.push_back(std::move(face));
  }
  return faces;
}

}  // namespace gdpcurve

#endif  // GDPCURVE_SURFACE_HPP
