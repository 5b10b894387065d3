// Copyright 2026, The ldpgnn Authors.
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

#include "ldpgnn/freq_est.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ldpgnn {
namespace {

void check_observed(std::span<const double> observed, std::size_t expected) {
  if (observed.size() != expected) {
    throw std::invalid_argument("frequency estimate: observed size mismatch");
  }
  double sum = 0.0;
  for (double v : observed) {
    if (!(v >= 0.0)) {
      throw std::invalid_argument("frequency estimate: observed proportions must be >= 0");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-6) {
    throw std::invalid_argument("frequency estimate: observed proportions must sum to 1");
  }
}

}  // namespace

AffineEstimator grr_fs_affine(std::size_t d, std::uint32_t m, std::uint32_t gamma,
                              double p, double q) {
  if (gamma < 2) throw std::invalid_argument("grr_fs_affine: gamma must be >= 2");
  if (m < 1 || m > d) throw std::invalid_argument("grr_fs_affine: need 1 <= m <= d");
  if (!(p > q)) throw std::invalid_argument("grr_fs_affine: requires p > q");
  const double dd = static_cast<double>(d);
  const double dm = static_cast<double>(m);
  const double dg = static_cast<double>(gamma);
  AffineEstimator est;
  est.slope = dd / (dm * (p - q));
  est.intercept = (dm - dd - dm * dg * q) / (dm * dg * (p - q));
  return est;
}

FrequencyEstimate estimate_grr_fs(std::span<const double> observed, std::size_t d,
                                  std::uint32_t m, std::uint32_t gamma, double p,
                                  double q, std::size_t n) {
  check_observed(observed, gamma);
  if (n < 2) throw std::invalid_argument("estimate_grr_fs: need n >= 2");
  const AffineEstimator est = grr_fs_affine(d, m, gamma, p, q);

  const double dd = static_cast<double>(d);
  const double dm = static_cast<double>(m);
  const double dg = static_cast<double>(gamma);
  FrequencyEstimate out;
  out.sample_size = n;
  out.proportions.resize(gamma);
  out.variances.resize(gamma);
  for (std::uint32_t j = 0; j < gamma; ++j) {
    const double pi = est.slope * observed[j] + est.intercept;
    out.proportions[j] = pi;
    // Model-implied observation probability of category j at pi; equals
    // observed[j] exactly because the estimate inverts the forward map.
    const double lambda = (pi * dm * dg * (p - q) + dm * (q * dg - 1.0) + dd) / (dd * dg);
    out.variances[j] = dd * dd * lambda * (1.0 - lambda) /
                       (dm * dm * static_cast<double>(n - 1) * (p - q) * (p - q));
  }
  return out;
}

double true_variance_grr_fs(double lambda, std::size_t d, std::uint32_t m, double p,
                            double q, std::size_t n) {
  if (m < 1 || m > d) throw std::invalid_argument("true_variance_grr_fs: need 1 <= m <= d");
  if (!(p > q)) throw std::invalid_argument("true_variance_grr_fs: requires p > q");
  if (n < 1) throw std::invalid_argument("true_variance_grr_fs: need n >= 1");
  if (lambda < 0.0 || lambda > 1.0) {
    throw std::invalid_argument("true_variance_grr_fs: lambda must lie in [0, 1]");
  }
  const double dd = static_cast<double>(d);
  const double dm = static_cast<double>(m);
  return dd * dd * lambda * (1.0 - lambda) /
         (static_cast<double>(n) * dm * dm * (p - q) * (p - q));
}

std::vector<double> apply_channel_inverse(std::span<const double> observed,
                                          const TransitionMatrix& channel) {
  check_observed(observed, channel.size);
  if (channel.p == channel.q) {
    throw std::invalid_argument("apply_channel_inverse: singular channel (p == q)");
  }
  const std::size_t c = channel.size;
  const double p = channel.p;
  const double q = channel.q;
  const double a = 1.0 / (p - q);
  const double b = -q / ((p - q) * (p + (static_cast<double>(c) - 1.0) * q));
  const double total = std::accumulate(observed.begin(), observed.end(), 0.0);
  std::vector<double> out(c);
  for (std::size_t j = 0; j < c; ++j) out[j] = a * observed[j] + b * total;
  return out;
}

FrequencyEstimate estimate_matrix_inverse(std::span<const double> observed,
                                          const TransitionMatrix& channel,
                                          std::size_t n) {
  if (n < 2) throw std::invalid_argument("estimate_matrix_inverse: need n >= 2");
  const std::size_t c = channel.size;
  const double p = channel.p;
  const double q = channel.q;
  const double a = 1.0 / (p - q);
  const double b = -q / ((p - q) * (p + (static_cast<double>(c) - 1.0) * q));

  FrequencyEstimate out;
  out.sample_size = n;
  out.proportions = apply_channel_inverse(observed, channel);

  // Diagonal of P^{-1} (diag(l) - l l^T) P^{-T} / (n - 1), with
  // P^{-1} row_j = b + a * e_j.
  out.variances.resize(c);
  for (std::size_t j = 0; j < c; ++j) {
    double acc = 0.0;
    for (std::size_t k = 0; k < c; ++k) {
      const double rj_k = b + (k == j ? a : 0.0);
      // (diag(l) - l l^T) row k dotted with P^{-1} row j.
      double inner = 0.0;
      for (std::size_t l = 0; l < c; ++l) {
        const double m_kl = (k == l ? observed[k] : 0.0) - observed[k] * observed[l];
        inner += m_kl * (b + (l == j ? a : 0.0));
      }
      acc += rj_k * inner;
    }
    out.variances[j] = acc / static_cast<double>(n - 1);
  }
  return out;
}

}  // namespace ldpgnn
