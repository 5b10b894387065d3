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

#ifndef LDPGNN_GRAPH_HPP_
#define LDPGNN_GRAPH_HPP_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace ldpgnn {

using NodeId = std::uint32_t;

// Undirected simple graph in CSR form.  Neighbor lists are sorted and free of
// duplicates and self-loops; every edge appears in both endpoint lists.
class Graph {
 public:
  Graph() = default;

  // Builds from an edge list.  Self-loops are dropped, duplicate and reversed
  // copies of an edge are merged.  Endpoints must be < num_nodes.
  static Graph from_edges(std::size_t num_nodes,
                          const std::vector<std::pair<NodeId, NodeId>>& edges);

  std::size_t num_nodes() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }

  // Number of undirected edges.
  std::size_t num_edges() const { return adjacency_.size() / 2; }

  std::uint32_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }

  std::span<const NodeId> neighbors(NodeId v) const {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }

  bool has_edge(NodeId u, NodeId v) const;

 private:
  std::vector<std::uint32_t> offsets_;  // size num_nodes + 1
  std::vector<NodeId> adjacency_;       // size 2 * num_edges
};

}  // namespace ldpgnn

#endif  // LDPGNN_GRAPH_HPP_
