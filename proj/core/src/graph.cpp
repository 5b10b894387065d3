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

#include "ldpgnn/graph.hpp"

#include <algorithm>
#include <stdexcept>

namespace ldpgnn {

Graph Graph::from_edges(std::size_t num_nodes,
                        const std::vector<std::pair<NodeId, NodeId>>& edges) {
  std::vector<std::pair<NodeId, NodeId>> canon;
  canon.reserve(edges.size());
  for (const auto& [u, v] : edges) {
    if (u >= num_nodes || v >= num_nodes) {
      throw std::invalid_argument("Graph::from_edges: endpoint out of range");
    }
    if (u == v) continue;  // self-loops dropped
    canon.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(canon.begin(), canon.end());
  canon.erase(std::unique(canon.begin(), canon.end()), canon.end());

  Graph g;
  g.offsets_.assign(num_nodes + 1, 0);
  for (const auto& [u, v] : canon) {
    ++g.offsets_[u + 1];
    ++g.offsets_[v + 1];
  }
  for (std::size_t i = 1; i <= num_nodes; ++i) g.offsets_[i] += g.offsets_[i - 1];

  g.adjacency_.resize(canon.size() * 2);
  std::vector<std::uint32_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const auto& [u, v] : canon) {
    g.adjacency_[cursor[u]++] = v;
    g.adjacency_[cursor[v]++] = u;
  }
  // Canonical order plus two-pass fill leaves each list sorted already; keep
  // the invariant explicit in case the fill strategy changes.
  for (std::size_t v = 0; v < num_nodes; ++v) {
    auto span = g.neighbors(static_cast<NodeId>(v));
    if (!std::is_sorted(span.begin(), span.end())) {
      std::sort(g.adjacency_.begin() + g.offsets_[v],
                g.adjacency_.begin() + g.offsets_[v + 1]);
    }
  }
  return g;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  auto span = neighbors(u);
  return std::binary_search(span.begin(), span.end(), v);
}

}  // namespace ldpgnn
