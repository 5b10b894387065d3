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
//
// Debiasing layer.  Under GRR-FS the probability of observing category j of
// a column with domain gamma is the affine forward map
//     lambda_j = (m*pi_j*gamma*(p - q) + m*q*gamma + d - m) / (d * gamma),
// so the unbiased estimate inverts it:
//     pi_j = lambda'_j * d / (m*(p - q)) + (m - d - m*gamma*q) / (m*gamma*(p - q)).
// Estimates are raw inversions: they may leave [0, 1] and consumers decide
// how to project (no clipping here).

#ifndef LDPGNN_FREQ_EST_HPP_
#define LDPGNN_FREQ_EST_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "ldpgnn/ldp.hpp"

namespace ldpgnn {

struct FrequencyEstimate {
  std::vector<double> proportions;  // pi_hat, sums to 1 when the input does
  std::vector<double> variances;    // var_hat(pi_hat_j)
  std::size_t sample_size = 0;
};

// Slope/intercept of the estimator's affine inverse for one column.
struct AffineEstimator {
  double slope = 1.0;
  double intercept = 0.0;
};

// p > q required; with m == d and q == 0 this degenerates to the identity
// (the bypass path).
AffineEstimator grr_fs_affine(std::size_t d, std::uint32_t m, std::uint32_t gamma,
                              double p, double q);

// Frequency estimate for one column from observed proportions `observed`
// (length gamma, entries >= 0, sum within 1e-6 of 1).  n >= 2 reporting
// nodes.  The variance estimate plugs the model-implied observation
// probability lambda_tilde_j (the forward map of pi_hat_j, which equals the
// observed proportion exactly) into
//     var_hat_j = d^2 * lambda_tilde_j * (1 - lambda_tilde_j)
//                 / (m^2 * (n - 1) * (p - q)^2).
FrequencyEstimate estimate_grr_fs(std::span<const double> observed, std::size_t d,
                                  std::uint32_t m, std::uint32_t gamma, double p,
                                  double q, std::size_t n);

// Sampling variance of the estimator at true proportion lambda of the
// observed category:
//     var = d^2 * lambda * (1 - lambda) / (n * m^2 * (p - q)^2).
double true_variance_grr_fs(double lambda, std::size_t d, std::uint32_t m, double p,
                            double q, std::size_t n);

// P^{-1} lambda' for a symmetric GRR channel P (diagonal p, off-diagonal q),
// applied in closed form
//     P^{-1} = a*I + b*1*1^T,  a = 1/(p - q),  b = -q / ((p - q) * (p + (c-1)*q)),
// never by generic matrix inversion.  Identity channels pass through
// unchanged.  Throws when p == q (singular).
std::vector<double> apply_channel_inverse(std::span<const double> observed,
                                          const TransitionMatrix& channel);

// Matrix-inversion estimator pi_hat = P^{-1} lambda' with variances from the
// diagonal of the dispersion estimate
//     (n-1)^{-1} P^{-1} (diag(lambda') - lambda' lambda'^T) P^{-T}.
FrequencyEstimate estimate_matrix_inverse(std::span<const double> observed,
                                          const TransitionMatrix& channel,
                                          std::size_t n);

}  // namespace ldpgnn

#endif  // LDPGNN_FREQ_EST_HPP_
