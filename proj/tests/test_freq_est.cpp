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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "ldpgnn/freq_est.hpp"
#include "ldpgnn/ldp.hpp"
#include "ldpgnn/rng.hpp"

using namespace ldpgnn;

namespace {

struct TrialStats {
  std::vector<double> estimates;   // pi_hat_1 per trial
  std::vector<double> var_hats;    // var_hat(pi_hat_1) per trial
};

// Monte Carlo of the whole mechanism: n users hold a d-column row whose first
// column follows the exact composition `counts` (one value per category);
// each row is GRR-FS perturbed, the first column's observed frequencies are
// estimated, and pi_hat_1 collected over `trials` repetitions.
TrialStats run_trials(const std::vector<std::size_t>& counts, std::size_t d,
                      std::uint32_t m, std::uint32_t gamma, double eps,
                      std::size_t trials, std::uint64_t seed) {
  const std::size_t n = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
  const TransitionMatrix t = TransitionMatrix::grr(gamma, eps);
  std::vector<std::uint32_t> domains(d, gamma);

  TrialStats stats;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    Rng rng = derive_rng(seed, trial, "freq-trial");
    std::vector<double> observed(gamma, 0.0);
    std::vector<std::uint32_t> row(d, 1);
    for (std::uint32_t value = 1; value <= gamma; ++value) {
      for (std::size_t i = 0; i < counts[value - 1]; ++i) {
        row[0] = value;
        const auto out = grr_fs_perturb(row, domains, m, eps, rng);
        observed[out[0] - 1] += 1.0;
      }
    }
    for (double& o : observed) o /= static_cast<double>(n);
    const FrequencyEstimate est = estimate_grr_fs(observed, d, m, gamma, t.p, t.q, n);
    stats.estimates.push_back(est.proportions[0]);
    stats.var_hats.push_back(est.variances[0]);
  }
  return stats;
}

double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double variance(const std::vector<double>& v) {
  const double mu = mean(v);
  double acc = 0.0;
  for (double x : v) acc += (x - mu) * (x - mu);
  return acc / static_cast<double>(v.size() - 1);
}

// Forward observation probability implied by the mechanism.
double forward_lambda(double pi, std::size_t d, std::uint32_t m, std::uint32_t gamma,
                      double p, double q) {
  const double md = static_cast<double>(m);
  const double dd = static_cast<double>(d);
  return (md * pi * gamma * (p - q) + md * q * gamma + dd - md) / (dd * gamma);
}

}  // namespace

TEST_CASE("frozen estimator example inverts the forward map") {
  // d=4, m=2, gamma=2, p=0.75, q=0.25, lambda'=(0.575, 0.425) -> (0.8, 0.2).
  const std::vector<double> observed = {0.575, 0.425};
  const FrequencyEstimate est = estimate_grr_fs(observed, 4, 2, 2, 0.75, 0.25, 100);
  REQUIRE(est.proportions.size() == 2);
  CHECK(est.proportions[0] == doctest::Approx(0.8).epsilon(1e-9));
  CHECK(est.proportions[1] == doctest::Approx(0.2).epsilon(1e-9));
  CHECK(est.sample_size == 100);
}

TEST_CASE("estimates preserve total mass") {
  Rng rng(61);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t d = 2 + rng.below(8);
    const std::uint32_t m = 1 + static_cast<std::uint32_t>(rng.below(d));
    const std::uint32_t gamma = 2 + static_cast<std::uint32_t>(rng.below(4));
    const TransitionMatrix t = TransitionMatrix::grr(gamma, 0.3 + 2 * rng.unit());
    std::vector<double> observed(gamma);
    double total = 0;
    for (double& o : observed) total += (o = rng.unit() + 0.01);
    for (double& o : observed) o /= total;
    const auto est = estimate_grr_fs(observed, d, m, gamma, t.p, t.q, 50);
    const double sum =
        std::accumulate(est.proportions.begin(), est.proportions.end(), 0.0);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("affine inverse composed with the forward map is the identity") {
  Rng rng(71);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t d = 2 + rng.below(6);
    const std::uint32_t m = 1 + static_cast<std::uint32_t>(rng.below(d));
    const std::uint32_t gamma = 2 + static_cast<std::uint32_t>(rng.below(3));
    const TransitionMatrix t = TransitionMatrix::grr(gamma, 0.5 + rng.unit());
    const double pi = rng.unit();
    const double lambda = forward_lambda(pi, d, m, gamma, t.p, t.q);
    const AffineEstimator aff = grr_fs_affine(d, m, gamma, t.p, t.q);
    CHECK(aff.slope * lambda + aff.intercept == doctest::Approx(pi).epsilon(1e-10));
    CHECK(aff.slope > 0.0);
  }
}

TEST_CASE("argmax is invariant under the affine estimate (equal domains)") {
  Rng rng(81);
  for (int trial = 0; trial < 50; ++trial) {
    const std::uint32_t gamma = 2 + static_cast<std::uint32_t>(rng.below(4));
    const std::size_t d = 3 + rng.below(5);
    const std::uint32_t m = 1 + static_cast<std::uint32_t>(rng.below(d));
    const TransitionMatrix t = TransitionMatrix::grr(gamma, 0.4 + rng.unit());
    std::vector<double> observed(gamma);
    double total = 0;
    for (double& o : observed) total += (o = rng.unit());
    for (double& o : observed) o /= total;
    const auto est = estimate_grr_fs(observed, d, m, gamma, t.p, t.q, 10);
    const auto obs_arg = std::max_element(observed.begin(), observed.end());
    const auto est_arg =
        std::max_element(est.proportions.begin(), est.proportions.end());
    CHECK(obs_arg - observed.begin() == est_arg - est.proportions.begin());
  }
}

TEST_CASE("frozen matrix-inverse example") {
  // c=2, p=0.75: P^{-1} = [[1.5, -0.5], [-0.5, 1.5]].
  const TransitionMatrix t = TransitionMatrix::grr(2, std::log(3.0));
  const std::vector<double> observed = {0.575, 0.425};
  const auto inv = apply_channel_inverse(observed, t);
  REQUIRE(inv.size() == 2);
  CHECK(inv[0] == doctest::Approx(0.65).epsilon(1e-9));
  CHECK(inv[1] == doctest::Approx(0.35).epsilon(1e-9));

  const FrequencyEstimate est = estimate_matrix_inverse(observed, t, 200);
  CHECK(est.proportions[0] == doctest::Approx(0.65).epsilon(1e-9));
  CHECK(est.proportions[1] == doctest::Approx(0.35).epsilon(1e-9));
}

TEST_CASE("channel inverse: identity passes through, singular throws") {
  const std::vector<double> v = {0.3, 0.7};
  const auto out = apply_channel_inverse(v, TransitionMatrix::identity(2));
  CHECK(out == v);

  TransitionMatrix singular;
  singular.size = 2;
  singular.p = 0.5;
  singular.q = 0.5;
  CHECK_THROWS_AS(apply_channel_inverse(v, singular), std::invalid_argument);
}

TEST_CASE("matrix-inverse argmax invariance for nonnegative inputs") {
  Rng rng(91);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t c = 2 + rng.below(5);
    const TransitionMatrix t = TransitionMatrix::grr(c, 0.3 + 1.5 * rng.unit());
    std::vector<double> observed(c);
    double total = 0;
    for (double& o : observed) total += (o = rng.unit());
    for (double& o : observed) o /= total;
    const auto inv = apply_channel_inverse(observed, t);
    const auto a = std::max_element(observed.begin(), observed.end()) - observed.begin();
    const auto b = std::max_element(inv.begin(), inv.end()) - inv.begin();
    CHECK(a == b);
  }
}

TEST_CASE("matrix-inverse estimator equals the affine estimator when m equals d") {
  Rng rng(97);
  for (int trial = 0; trial < 20; ++trial) {
    const std::uint32_t gamma = 2 + static_cast<std::uint32_t>(rng.below(4));
    const TransitionMatrix t = TransitionMatrix::grr(gamma, 0.4 + rng.unit());
    std::vector<double> observed(gamma);
    double total = 0;
    for (double& o : observed) total += (o = rng.unit() + 0.05);
    for (double& o : observed) o /= total;

    const auto a = estimate_grr_fs(observed, gamma, gamma, gamma, t.p, t.q, 123);
    const auto b = estimate_matrix_inverse(observed, t, 123);
    REQUIRE(a.proportions.size() == b.proportions.size());
    for (std::size_t j = 0; j < a.proportions.size(); ++j) {
      CHECK(a.proportions[j] == doctest::Approx(b.proportions[j]).epsilon(1e-12));
      CHECK(a.variances[j] == doctest::Approx(b.variances[j]).epsilon(1e-12));
    }
  }
}

TEST_CASE("estimate_grr_fs validates its inputs") {
  const std::vector<double> ok = {0.5, 0.5};
  CHECK_THROWS_AS(estimate_grr_fs(ok, 4, 0, 2, 0.75, 0.25, 10), std::invalid_argument);
  CHECK_THROWS_AS(estimate_grr_fs(ok, 4, 5, 2, 0.75, 0.25, 10), std::invalid_argument);
  CHECK_THROWS_AS(estimate_grr_fs(ok, 4, 2, 2, 0.25, 0.25, 10), std::invalid_argument);
  CHECK_THROWS_AS(estimate_grr_fs(ok, 4, 2, 2, 0.75, 0.25, 1), std::invalid_argument);
  const std::vector<double> bad_sum = {0.5, 0.2};
  CHECK_THROWS_AS(estimate_grr_fs(bad_sum, 4, 2, 2, 0.75, 0.25, 10),
                  std::invalid_argument);
  const std::vector<double> wrong_len = {0.5, 0.3, 0.2};
  CHECK_THROWS_AS(estimate_grr_fs(wrong_len, 4, 2, 2, 0.75, 0.25, 10),
                  std::invalid_argument);
}

TEST_CASE("unbiasedness and variance across a configuration grid") {
  struct Config {
    std::size_t d;
    std::uint32_t m;
    std::uint32_t gamma;
    double eps;
    double pi1;
  };
  const std::vector<Config> grid = {
      {4, 2, 2, std::log(3.0), 0.8},
      {6, 3, 3, 1.0, 0.5},
      {5, 5, 2, 0.5, 0.65},
  };
  for (const auto& cfg : grid) {
    const std::size_t n = 2000;
    const std::size_t trials = 300;
    std::vector<std::size_t> counts(cfg.gamma, 0);
    counts[0] = static_cast<std::size_t>(std::llround(cfg.pi1 * n));
    // Spread the remainder over the other categories.
    std::size_t left = n - counts[0];
    for (std::uint32_t j = 1; j < cfg.gamma; ++j) {
      counts[j] = left / (cfg.gamma - 1);
    }
    counts[cfg.gamma - 1] += left - (left / (cfg.gamma - 1)) * (cfg.gamma - 1);
    const double pi_exact = counts[0] / static_cast<double>(n);

    const TrialStats stats =
        run_trials(counts, cfg.d, cfg.m, cfg.gamma, cfg.eps, trials, 1234);
    const TransitionMatrix t = TransitionMatrix::grr(cfg.gamma, cfg.eps);
    const double lambda = forward_lambda(pi_exact, cfg.d, cfg.m, cfg.gamma, t.p, t.q);
    const double true_var = true_variance_grr_fs(lambda, cfg.d, cfg.m, t.p, t.q, n);

    // Mean within 3 standard errors of the truth.
    const double se = std::sqrt(true_var / static_cast<double>(trials));
    CHECK(std::abs(mean(stats.estimates) - pi_exact) < 3 * se);

    // Empirical variance and the mean estimated variance both within 20%.
    const double emp_var = variance(stats.estimates);
    CHECK(emp_var == doctest::Approx(true_var).epsilon(0.2));
    CHECK(mean(stats.var_hats) == doctest::Approx(true_var).epsilon(0.2));
  }
}

TEST_CASE("true_variance_grr_fs matches the closed form") {
  const double v = true_variance_grr_fs(0.575, 4, 2, 0.75, 0.25, 5000);
  const double expect = 16.0 * 0.575 * 0.425 / (5000.0 * 4.0 * 0.25);
  CHECK(v == doctest::Approx(expect).epsilon(1e-12));
}
