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

#ifndef LDPGNN_PARTITION_HPP_
#define LDPGNN_PARTITION_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "ldpgnn/graph.hpp"

namespace ldpgnn {

struct ClusterAssignment {
  std::size_t num_clusters = 0;
  std::vector<std::uint32_t> cluster_of;  // size num_nodes
  std::size_t edge_cut = 0;
  std::vector<std::size_t> sweep_cuts;  // cut after grow, then after each sweep

  std::vector<std::size_t> sizes() const;
};

// Number of undirected edges crossing cluster boundaries.  Throws
// std::invalid_argument when the assignment does not cover every node.
std::size_t edge_cut(const Graph& graph, std::span<const std::uint32_t> cluster_of);

// Balanced partition into 1 <= num_clusters <= N parts.
//
// Grow phase: the first seed is drawn from the given seed stream, the rest
// are farthest-point picks (max BFS distance to the existing seeds, lowest
// id on ties).  Clusters then grow breadth-first in round-robin turns toward
// a target of ceil(N / C) nodes; a cluster whose frontier empties restarts
// from the lowest unassigned id, which also covers disconnected graphs.
//
// Refine phase (Kernighan-Lin flavored, at most 10 sweeps): each sweep first
// applies strictly-improving same-size swaps between boundary nodes, then
// strictly-improving single-node moves that keep every cluster non-empty and
// no cluster above ceil(1.1 * N / C).  The cut never increases.
//
// Deterministic: identical (graph, num_clusters, seed) give identical output.
ClusterAssignment partition(const Graph& graph, std::size_t num_clusters,
                            std::uint64_t seed);

}  // namespace ldpgnn

#endif  // LDPGNN_PARTITION_HPP_
