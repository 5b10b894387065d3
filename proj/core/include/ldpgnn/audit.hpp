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
// Exhaustive numeric audit of the GRR-FS randomizer.  For a fixed input pair
// the auditor enumerates the whole output space (capped) and computes each
// output's exact probability by marginalizing the hidden m-subset
// analytically, then reports the worst-case likelihood ratio.
//
// For inputs differing in a single coordinate the ratio is bounded by
// e^(eps_X) with eps_X the amplified budget; inputs differing in every
// coordinate can reach e^(m * eps_x), which the report carries alongside the
// amplified bound so callers can see which regime a pair falls in.

#ifndef LDPGNN_AUDIT_HPP_
#define LDPGNN_AUDIT_HPP_

#include <cstdint>
#include <span>
#include <vector>

namespace ldpgnn {

struct AuditRow {
  std::vector<std::uint32_t> output;
  double pr_x = 0.0;       // Pr[output | x]
  double pr_xprime = 0.0;  // Pr[output | x']
  double ratio = 0.0;      // pr_x / pr_xprime
};

struct AuditReport {
  double max_ratio = 0.0;  // max over outputs and both directions
  std::vector<std::uint32_t> argmax_output;
  std::size_t hamming_distance = 0;   // coordinates where x and x' differ
  double eps_amplified = 0.0;         // ln-bound for single-coordinate pairs
  double eps_per_vector = 0.0;        // m * eps_x
  std::vector<AuditRow> rows;         // one per output, enumeration order
};

// Exact output probability Pr[o | x] of GRR-FS, marginalized over the
// uniform m-subset.  Computed with a subset-count DP, so cost is
// O(d * m) per output rather than O(C(d, m)).
double grr_fs_output_prob(std::span<const std::uint32_t> x,
                          std::span<const std::uint32_t> o,
                          std::span<const std::uint32_t> domains, std::uint32_t m,
                          double eps_x);

// Full audit of the input pair (x, x').  Throws std::invalid_argument when
// the output space prod(domains) exceeds `cap` (default 4096), when shapes
// disagree, or when any value is out of range.
AuditReport audit_pair(std::span<const std::uint32_t> x,
                       std::span<const std::uint32_t> xprime,
                       std::span<const std::uint32_t> domains, std::uint32_t m,
                       double eps_x, std::size_t cap = 4096);

}  // namespace ldpgnn

#endif  // LDPGNN_AUDIT_HPP_
