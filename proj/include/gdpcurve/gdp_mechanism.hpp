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

#ifndef GDPCURVE_GDP_MECHANISM_HPP
#define GDPCURVE_GDP_MECHANISM_HPP

#include <cmath>
#include <cstdint>
#include <vector>

#include "gdpcurve/circle_kernel.hpp"
#include "gdpcurve/common.hpp"
#include "gdpcurve/normal.hpp"
#include "gdpcurve/rkhs_mean.hpp"
#include "gdpcurve/rng.hpp"

// mu-GDP Gaussian-process mechanism. The release is
//
//   h~(D) = h(D) + sigma Z,   Z = sum_j sqrt(lambda_j) xi_j b_j,
//
// with sigma = Delta / mu at equality; noise lives in the retained eigenbasis
// of K so it is compatible with the summary. Budgets compose by the
// Pythagorean rule and convert to (epsilon, delta) through the Gaussian
// trade-off curve. A Monte-Carlo verifier replays the privacy-loss analysis
// on concrete adjacent datasets.

namespace gdpcurve {

template <typename Scalar>
struct GdpParams {
  Scalar mu = Scalar(0);
  Scalar delta_bound = Scalar(0);
  Scalar sigma = Scalar(0);
};

template <typename Scalar>
GdpParams<Scalar> calibrate_sigma(Scalar delta_bound, Scalar mu) {
  if (!(mu > Scalar(0))) throw DomainError("calibrate_sigma: mu must be positive");
  if (!(delta_bound >= Scalar(0))) {
    throw DomainError("calibrate_sigma: sensitivity must be nonnegative");
  }
  GdpParams<Scalar> params;
  params.mu = mu;
  params.delta_bound = delta_bound;
  params.sigma = delta_bound / mu;
  return params;
}

// Delta = 2 tau / (n sqrt(phi)), from Delta^2 <= 4 tau^2 / (n^2 phi).
template <typename Scalar>
Scalar sensitivity_bound(Scalar tau, Eigen::Index n, Scalar phi) {
  if (!(tau >= Scalar(0))) throw DomainError("sensitivity_bound: tau must be nonnegative");
  if (n < 1) throw DomainError("sensitivity_bound: n must be positive");
  if (!(phi > Scalar(0))) throw DomainError("sensitivity_bound: phi must be positive");
  using std::sqrt;
  return Scalar(2) * tau / (static_cast<Scalar>(n) * sqrt(phi));
}

// Data-driven bound tau = max_i ||f_i||; callers must flag releases that use
// it, since the bound itself leaks a little about the sample.
template <typename Scalar>
Scalar tau_from_sample(const CurveSample<Scalar>& sample) {
  if (sample.curves.cols() < 1) {
    throw DomainError("tau_from_sample: sample is empty");
  }
  validate(sample);
  Scalar tau = Scalar(0);
  for (Eigen::Index i = 0; i < sample.n(); ++i) {
    using std::max;
    const VectorX<Scalar> curve = sample.curves.col(i);
    tau = max(tau, ambient_norm(curve, sample.grid));
  }
  return tau;
}

template <typename Scalar>
struct PrivacyBudget {
  Scalar mu_x = Scalar(0);
  Scalar mu_y = Scalar(0);
  Scalar mu_z = Scalar(0);
  Eigen::Index J = 0;
  Scalar mu_total = Scalar(0);  // sqrt(J (mu_x^2 + mu_y^2 + mu_z^2))
};

template <typename Scalar>
PrivacyBudget<Scalar> make_privacy_budget(Scalar mu_x, Scalar mu_y, Scalar mu_z,
                                          Eigen::Index J) {
  if (!(mu_x > Scalar(0)) || !(mu_y > Scalar(0)) || !(mu_z > Scalar(0))) {
    throw DomainError("privacy budget: per-coordinate budgets must be positive");
  }
  if (J < 1) throw DomainError("privacy budget: J must be positive");
  PrivacyBudget<Scalar> budget;
  budget.mu_x = mu_x;
  budget.mu_y = mu_y;
  budget.mu_z = mu_z;
  budget.J = J;
  using std::sqrt;
  budget.mu_total =
      sqrt(static_cast<Scalar>(J) * (mu_x * mu_x + mu_y * mu_y + mu_z * mu_z));
  return budget;
}

// Composition of independent mu_i-GDP releases: sqrt(sum mu_i^2).
template <typename Scalar>
Scalar compose(const std::vector<Scalar>& budgets) {
  if (budgets.empty()) throw DomainError("compose: empty budget list");
  Scalar total = Scalar(0);
  for (const Scalar mu : budgets) {
    if (!(mu > Scalar(0))) throw DomainError("compose: budgets must be positive");
    total += mu * mu;
  }
  using std::sqrt;
  return sqrt(total);
}

// delta(epsilon) = Phi(-eps/mu + mu/2) - e^eps Phi(-eps/mu - mu/2).
inline double gdp_to_dp_delta(double mu, double epsilon) {
  if (!(mu > 0.0)) throw DomainError("gdp_to_dp_delta: mu must be positive");
  if (!(epsilon >= 0.0)) throw DomainError("gdp_to_dp_delta: epsilon must be nonnegative");
  return normal_cdf(-epsilon / mu + 0.5 * mu) -
         std::exp(epsilon) * normal_cdf(-epsilon / mu - 0.5 * mu);
}

// G_mu(alpha) = Phi(Phi^{-1}(1 - alpha) - mu), the Gaussian trade-off curve.
inline double gaussian_tradeoff(double mu, double alpha) {
  if (!(mu >= 0.0)) throw DomainError("gaussian_tradeoff: mu must be nonnegative");
  if (!(alpha >= 0.0) || !(alpha <= 1.0)) {
    throw DomainError("gaussian_tradeoff: alpha must lie in [0, 1]");
  }
  return normal_cdf(normal_quantile(1.0 - alpha) - mu);
}

// One draw of the standard Gaussian process Z = sum_j sqrt(lambda_j) xi_j b_j.
// Covariance of Z on the grid is K (restricted to the retained modes).
template <typename Scalar>
VectorX<Scalar> sample_gp_noise(const KernelEigenbasis<Scalar>& basis,
                                std::uint64_t seed) {
  Rng rng(seed);
  const Eigen::Index p = basis.modes();
  VectorX<Scalar> scaled(p);
  using std::sqrt;
  for (Eigen::Index j = 0; j < p; ++j) {
    scaled[j] = sqrt(basis.eigenvalues[j]) * static_cast<Scalar>(rng.normal());
  }
  return basis.eigenvectors * scaled;
}

template <typename Scalar>
struct SanitizedCurve {
  VectorX<Scalar> values;
  GdpParams<Scalar> params;
  std::uint64_t seed = 0;
};

namespace detail {

template <typename Scalar>
void require_same_basis(const RkhsMean<Scalar>& mean,
                        const KernelEigenbasis<Scalar>& basis) {
  if (mean.eigenvalues.size() != basis.eigenvalues.size() ||
      (mean.eigenvalues.array() != basis.eigenvalues.array()).any()) {
    throw DomainError("mean was not computed in the supplied eigenbasis");
  }
}

}  // namespace detail

template <typename Scalar>
SanitizedCurve<Scalar> sanitize(const RkhsMean<Scalar>& mean,
                                const KernelEigenbasis<Scalar>& basis,
                                const GdpParams<Scalar>& params,
                                std::uint64_t seed) {
  detail::require_same_basis(mean, basis);
  SanitizedCurve<Scalar> out;
  out.params = params;
  out.seed = seed;
  if (params.sigma == Scalar(0)) {
    out.values = mean.values;
  } else {
    out.values = mean.values + params.sigma * sample_gp_noise(basis, seed);
  }
  return out;
}

template <typename Scalar>
struct PrivacyLossReport {
  Scalar delta_realized = Scalar(0);  // ||h(D) - h(D')||_H
  Scalar mu_realized = Scalar(0);     // delta_realized / sigma
  std::size_t n_samples = 0;
  // Moments of the linear statistic <Z, h(D) - h(D')>_H over the noise;
  // target N(0, delta_realized^2).
  Scalar stat_mean = Scalar(0);
  Scalar stat_variance = Scalar(0);
  // Tail of the privacy loss under D against the closed form
  // Phi(-sigma eps / delta + delta / (2 sigma)).
  VectorX<Scalar> epsilons;
  VectorX<Scalar> tail_empirical;
  VectorX<Scalar> tail_expected;
  // Empirical power study of the Neyman-Pearson test vs G_mu.
  VectorX<Scalar> alphas;
  VectorX<Scalar> beta_empirical;
  VectorX<Scalar> beta_expected;
};

// Replays the privacy-loss analysis on a concrete adjacent pair. Draws
// sanitize outputs under D in fixed logical batches (so results do not
// depend on how work is partitioned), evaluates the log likelihood ratio
// through the RKHS inner product, and compares tails and test power with the
// Gaussian closed forms.
template <typename Scalar>
PrivacyLossReport<Scalar> verify_privacy_loss(
    const RkhsMean<Scalar>& mean_d, const RkhsMean<Scalar>& mean_dprime,
    const KernelEigenbasis<Scalar>& basis, const GdpParams<Scalar>& params,
    std::size_t n_samples, std::uint64_t seed,
    const VectorX<Scalar>& epsilons, const VectorX<Scalar>& alphas,
    int threads = 1) {
  detail::require_same_basis(mean_d, basis);
  detail::require_same_basis(mean_dprime, basis);
  if (n_samples < 10000) {
    throw DomainError("verify_privacy_loss: need at least 1e4 samples");
  }
  if (!(params.sigma > Scalar(0))) {
    throw DomainError("verify_privacy_loss: sigma must be positive");
  }

  PrivacyLossReport<Scalar> report;
  report.n_samples = n_samples;
  report.epsilons = epsilons;
  report.alphas = alphas;
  report.delta_realized = rkhs_distance(mean_d, mean_dprime);
  report.mu_realized = report.delta_realized / params.sigma;

  const Scalar delta = report.delta_realized;
  const Scalar mu = report.mu_realized;
  const Eigen::Index p = basis.modes();
  // Coefficients of g = h(D) - h(D') weighted for <x, g>_H = sum x_j g_j / lambda_j.
  VectorX<Scalar> g_weighted(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    g_weighted[j] = (mean_d.coefficients[j] - mean_dprime.coefficients[j]) /
                    basis.eigenvalues[j];
  }
  // Recovers eigenbasis coefficients of a grid curve: x_j = <x, b_j>.
  const MatrixX<Scalar> project =
      basis.eigenvectors.transpose() / static_cast<Scalar>(basis.grid.m);

  VectorX<Scalar> thresholds(alphas.size());
  for (Eigen::Index a = 0; a < alphas.size(); ++a) {
    thresholds[a] =
        mu * static_cast<Scalar>(normal_quantile(1.0 - static_cast<double>(alphas[a]))) -
        mu * mu / Scalar(2);
  }

  constexpr std::size_t kBatch = 4096;
  const std::size_t n_batches = (n_samples + kBatch - 1) / kBatch;
  std::vector<double> sum_stat(n_batches, 0.0);
  std::vector<double> sum_stat2(n_batches, 0.0);
  std::vector<std::vector<std::size_t>> tail_counts(
      n_batches, std::vector<std::size_t>(static_cast<std::size_t>(epsilons.size()), 0));
  std::vector<std::vector<std::size_t>> beta_counts(
      n_batches, std::vector<std::size_t>(static_cast<std::size_t>(alphas.size()), 0));

  parallel_for(n_batches, threads, [&](std::size_t b) {
    Rng rng(derive_seed(seed, 0x504cULL, b));
    const std::size_t begin = b * kBatch;
    const std::size_t end = std::min(begin + kBatch, n_samples);
    VectorX<Scalar> scaled(p);
    for (std::size_t i = begin; i < end; ++i) {
      using std::sqrt;
      for (Eigen::Index j = 0; j < p; ++j) {
        scaled[j] = sqrt(basis.eigenvalues[j]) * static_cast<Scalar>(rng.normal());
      }
      const VectorX<Scalar> release =
          mean_d.values + params.sigma * (basis.eigenvectors * scaled);
      const VectorX<Scalar> coeffs = project * release;
      // Privacy loss log dP_D/dP_D' at the release.
      Scalar centered = Scalar(0);
      Scalar stat = Scalar(0);
      for (Eigen::Index j = 0; j < p; ++j) {
        const Scalar mid =
            (mean_d.coefficients[j] + mean_dprime.coefficients[j]) / Scalar(2);
        centered += (coeffs[j] - mid) * g_weighted[j];
        stat += (coeffs[j] - mean_d.coefficients[j]) * g_weighted[j];
      }
      const Scalar pl = centered / (params.sigma * params.sigma);
      const Scalar noise_stat = stat / params.sigma;  // <Z, g>_H ~ N(0, delta^2)
      sum_stat[b] += static_cast<double>(noise_stat);
      sum_stat2[b] += static_cast<double>(noise_stat) * static_cast<double>(noise_stat);
      for (Eigen::Index e = 0; e < epsilons.size(); ++e) {
        if (pl >= epsilons[e]) ++tail_counts[b][static_cast<std::size_t>(e)];
      }
      for (Eigen::Index a = 0; a < alphas.size(); ++a) {
        if (pl < thresholds[a]) ++beta_counts[b][static_cast<std::size_t>(a)];
      }
    }
  });

  double total_stat = 0.0, total_stat2 = 0.0;
  for (std::size_t b = 0; b < n_batches; ++b) {
    total_stat += sum_stat[b];
    total_stat2 += sum_stat2[b];
  }
  const double inv_n = 1.0 / static_cast<double>(n_samples);
  report.stat_mean = static_cast<Scalar>(total_stat * inv_n);
  report.stat_variance = static_cast<Scalar>(
      total_stat2 * inv_n - (total_stat * inv_n) * (total_stat * inv_n));

  report.tail_empirical.resize(epsilons.size());
  report.tail_expected.resize(epsilons.size());
  for (Eigen::Index e = 0; e < epsilons.size(); ++e) {
    std::size_t count = 0;
    for (std::size_t b = 0; b < n_batches; ++b) {
      count += tail_counts[b][static_cast<std::size_t>(e)];
    }
    report.tail_empirical[e] = static_cast<Scalar>(count * inv_n);
    if (delta > Scalar(0)) {
      report.tail_expected[e] = static_cast<Scalar>(normal_cdf(
          static_cast<double>(-params.sigma * epsilons[e] / delta +
                              delta / (Scalar(2) * params.sigma))));
    } else {
      report.tail_expected[e] = epsilons[e] > Scalar(0) ? Scalar(0) : Scalar(1);
    }
  }

  report.beta_empirical.resize(alphas.size());
  report.beta_expected.resize(alphas.size());
  for (Eigen::Index a = 0; a < alphas.size(); ++a) {
    report.beta_expected[a] = static_cast<Scalar>(gaussian_tradeoff(
        static_cast<double>(mu), static_cast<double>(alphas[a])));
    if (delta > Scalar(0)) {
      std::size_t count = 0;
      for (std::size_t b = 0; b < n_batches; ++b) {
        count += beta_counts[b][static_cast<std::size_t>(a)];
      }
      report.beta_empirical[a] = static_cast<Scalar>(count * inv_n);
    } else {
      // Identical means: the hypotheses coincide and any alpha-level test has
      // power alpha, so the trade-off bound holds with equality by definition.
      report.beta_empirical[a] = report.beta_expected[a];
    }
  }
  return report;
}

template <typename Scalar>
PrivacyLossReport<Scalar> verify_privacy_loss(
    const RkhsMean<Scalar>& mean_d, const RkhsMean<Scalar>& mean_dprime,
    const KernelEigenbasis<Scalar>& basis, const GdpParams<Scalar>& params,
    std::size_t n_samples, std::uint64_t seed, int threads = 1) {
  VectorX<Scalar> epsilons(13);
  for (Eigen::Index e = 0; e < 13; ++e) {
    epsilons[e] = Scalar(e) * Scalar(0.25);
  }
  VectorX<Scalar> alphas(5);
  alphas << Scalar(0.01), Scalar(0.05), Scalar(0.1), Scalar(0.25), Scalar(0.5);
  return verify_privacy_loss(mean_d, mean_dprime, basis, params, n_samples, seed,
                             epsilons, alphas, threads);
}

}  // namespace gdpcurve

#endif  // GDPCURVE_GDP_MECHANISM_HPP
