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

#include "ldpgnn/audit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ldpgnn/ldp.hpp"

namespace ldpgnn {
namespace {

void check_vector(std::span<const std::uint32_t> v,
                  std::span<const std::uint32_t> domains, const char* name) {
  if (v.size() != domains.size()) {
    throw std::invalid_argument(std::string("audit: ") + name + " shape mismatch");
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] < 1 || v[i] > domains[i]) {
      throw std::invalid_argument(std::string("audit: ") + name + " value out of range");
    }
  }
}

}  // namespace

double grr_fs_output_prob(std::span<const std::uint32_t> x,
                          std::span<const std::uint32_t> o,
                          std::span<const std::uint32_t> domains, std::uint32_t m,
                          double eps_x) {
  const std::size_t d = domains.size();
  check_vector(x, domains, "input");
  check_vector(o, domains, "output");
  if (m < 1 || m > d) throw std::invalid_argument("audit: need 1 <= m <= d");

  // Conditioned on the subset S, coordinates are independent: a sampled
  // coordinate contributes its GRR mass g_i, an unsampled one the uniform
  // mass u_i = 1/gamma_i.  Averaging over the C(d, m) subsets is the m-th
  // coefficient of prod_i (u_i + g_i * t), accumulated by this DP.
  std::vector<double> coeff(m + 1, 0.0);
  coeff[0] = 1.0;
  for (std::size_t i = 0; i < d; ++i) {
    const TransitionMatrix t = TransitionMatrix::grr(domains[i], eps_x);
    const double g = o[i] == x[i] ? t.p : t.q;
    const double u = 1.0 / static_cast<double>(domains[i]);
    for (std::size_t k = std::min<std::size_t>(m, i + 1); k > 0; --k) {
      coeff[k] = coeff[k] * u + coeff[k - 1] * g;
    }
    coeff[0] *= u;
  }

  // Divide by C(d, m), in log space to stay stable for larger d.
  double log_binom = 0.0;
  for (std::uint32_t k = 1; k <= m; ++k) {
    log_binom += std::log(static_cast<double>(d - m + k)) -
                 std::log(static_cast<double>(k));
  }
  return coeff[m] / std::exp(log_binom);
}

AuditReport audit_pair(std::span<const std::uint32_t> x,
                       std::span<const std::uint32_t> xprime,
                       std::span<const std::uint32_t> domains, std::uint32_t m,
                       double eps_x, std::size_t cap) {
  const std::size_t d = domains.size();
  check_vector(x, domains, "x");
  check_vector(xprime, domains, "x'");
  if (m < 1 || m > d) throw std::invalid_argument("audit: need 1 <= m <= d");

  std::size_t space = 1;
  for (std::uint32_t g : domains) {
    if (g < 2) throw std::invalid_argument("audit: domain size must be >= 2");
    if (space > cap / g) {
      throw std::invalid_argument("audit: output space exceeds cap");
    }
    space *= g;
  }

  AuditReport report;
  report.hamming_distance = 0;
  for (std::size_t i = 0; i < d; ++i) {
    if (x[i] != xprime[i]) ++report.hamming_distance;
  }
  report.eps_amplified = amplified_budget(eps_x, m, d);
  report.eps_per_vector = static_cast<double>(m) * eps_x;

  std::vector<std::uint32_t> o(d, 1);
  report.rows.reserve(space);
  for (std::size_t count = 0; count < space; ++count) {
    AuditRow row;
    row.output = o;
    row.pr_x = grr_fs_output_prob(x, o, domains, m, eps_x);
    row.pr_xprime = grr_fs_output_prob(xprime, o, domains, m, eps_x);
    row.ratio = row.pr_x / row.pr_xprime;
    const double worst = std::max(row.ratio, row.pr_xprime / row.pr_x);
    if (worst > report.max_ratio) {
      report.max_ratio = worst;
      report.argmax_output = o;
    }
    report.rows.push_back(std::move(row));

    // Odometer increment over the output space.
    for (std::size_t i = d; i-- > 0;) {
      if (o[i] < domains[i]) {
        ++o[i];
        break;
      }
      o[i] = 1;
    }
  }
  return report;
}

}  // namespace ldpgnn
