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

#include "ldpgnn/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ldpgnn {

SynthData synth_homophily_graph(const SynthParams& params, std::uint64_t seed) {
  const std::size_t n = params.num_nodes;
  const std::size_t c = params.num_classes;
  const std::uint32_t gamma = params.domain;
  if (n == 0 || c < 2 || c > n) {
    throw std::invalid_argument("synth: need num_nodes >= num_classes >= 2");
  }
  if (gamma < 2) throw std::invalid_argument("synth: domain must be >= 2");
  if (params.p_in < 0.0 || params.p_in > 1.0 || params.p_out < 0.0 || params.p_out > 1.0) {
    throw std::invalid_argument("synth: edge probabilities must lie in [0, 1]");
  }
  if (!(params.p_in > params.p_out)) {
    throw std::invalid_argument("synth: homophily requires p_in > p_out");
  }
  if (!(params.feature_skew > 1.0 / gamma) || params.feature_skew > 1.0) {
    throw std::invalid_argument("synth: feature_skew must lie in (1/domain, 1]");
  }
  if (params.label_rate <= 0.0 || params.label_rate > 1.0) {
    throw std::invalid_argument("synth: label_rate must lie in (0, 1]");
  }

  // Contiguous near-equal communities: node v belongs to floor(v * c / n).
  auto community = [&](std::size_t v) {
    return static_cast<std::uint32_t>(v * c / n);
  };

  Rng edge_rng = derive_rng(seed, 0, "synth-edges");
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      const double p = community(u) == community(v) ? params.p_in : params.p_out;
      if (p > 0.0 && edge_rng.bernoulli(p)) {
        edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
      }
    }
  }

  SynthData out;
  out.graph = Graph::from_edges(n, edges);

  out.features.num_nodes = n;
  out.features.num_columns = params.num_columns;
  out.features.domains.assign(params.num_columns, gamma);
  out.features.values.resize(n * params.num_columns);
  for (std::size_t v = 0; v < n; ++v) {
    Rng node_rng = derive_rng(seed, v, "synth-features");
    const std::uint32_t k = community(v);
    for (std::size_t i = 0; i < params.num_columns; ++i) {
      const std::uint32_t preferred = 1 + (k + i) % gamma;
      std::uint32_t value = preferred;
      if (!node_rng.bernoulli(params.feature_skew)) {
        // Uniform over the gamma - 1 non-preferred categories.
        value = 1 + static_cast<std::uint32_t>(node_rng.below(gamma - 1));
        if (value >= preferred) ++value;
      }
      out.features.set(v, i, value);
    }
  }

  const auto n_labeled =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(params.label_rate * n)));
  std::vector<std::uint32_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0u);
  Rng label_rng = derive_rng(seed, 0, "synth-labels");
  label_rng.shuffle(perm);
  perm.resize(n_labeled);
  std::sort(perm.begin(), perm.end());

  out.labels.num_classes = c;
  out.labels.labeled_nodes = std::move(perm);
  out.labels.classes.reserve(n_labeled);
  for (std::uint32_t v : out.labels.labeled_nodes) {
    out.labels.classes.push_back(community(v));
  }
  return out;
}

}  // namespace ldpgnn
