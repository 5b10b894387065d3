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

#include "ldpgnn/partition.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <stdexcept>

#include "ldpgnn/rng.hpp"

namespace ldpgnn {
namespace {

constexpr std::size_t kMaxSweeps = 10;
constexpr std::uint32_t kUnassigned = std::numeric_limits<std::uint32_t>::max();

// Links from v into each cluster listed in `into`, returned parallel to it.
// Small helper used by the refinement gain computations.
std::size_t links_to(const Graph& g, NodeId v, std::uint32_t cluster,
                     std::span<const std::uint32_t> cluster_of) {
  std::size_t count = 0;
  for (NodeId u : g.neighbors(v)) {
    if (cluster_of[u] == cluster) ++count;
  }
  return count;
}

bool is_boundary(const Graph& g, NodeId v, std::span<const std::uint32_t> cluster_of) {
  for (NodeId u : g.neighbors(v)) {
    if (cluster_of[u] != cluster_of[v]) return true;
  }
  return false;
}

// Farthest-point seed spreading: repeated multi-source BFS from the chosen
// seeds; the next seed maximizes hop distance (unreached nodes count as
// infinitely far, ties break to the lowest id).
std::vector<NodeId> spread_seeds(const Graph& g, std::size_t num_clusters, Rng& rng) {
  const std::size_t n = g.num_nodes();
  std::vector<NodeId> seeds;
  seeds.reserve(num_clusters);
  seeds.push_back(static_cast<NodeId>(rng.below(n)));

  std::vector<std::uint32_t> dist(n);
  while (seeds.size() < num_clusters) {
    std::fill(dist.begin(), dist.end(), kUnassigned);
    std::deque<NodeId> queue;
    for (NodeId s : seeds) {
      dist[s] = 0;
      queue.push_back(s);
    }
    while (!queue.empty()) {
      const NodeId v = queue.front();
      queue.pop_front();
      for (NodeId u : g.neighbors(v)) {
        if (dist[u] == kUnassigned) {
          dist[u] = dist[v] + 1;
          queue.push_back(u);
        }
      }
    }
    NodeId best = 0;
    std::uint32_t best_dist = 0;
    bool found = false;
    for (std::size_t v = 0; v < n; ++v) {
      if (std::find(seeds.begin(), seeds.end(), v) != seeds.end()) continue;
      const std::uint32_t dv = dist[v];  // kUnassigned outranks every distance
      if (!found || dv > best_dist) {
        found = true;
        best = static_cast<NodeId>(v);
        best_dist = dv;
      }
    }
    seeds.push_back(best);
  }
  return seeds;
}

}  // namespace

std::vector<std::size_t> ClusterAssignment::sizes() const {
  std::vector<std::size_t> out(num_clusters, 0);
  for (std::uint32_t c : cluster_of) ++out[c];
  return out;
}

std::size_t edge_cut(const Graph& graph, std::span<const std::uint32_t> cluster_of) {
  if (cluster_of.size() != graph.num_nodes()) {
    throw std::invalid_argument("edge_cut: assignment must cover every node");
  }
  std::size_t cut = 0;
  for (NodeId u = 0; u < graph.num_nodes(); ++u) {
    for (NodeId v : graph.neighbors(u)) {
      if (u < v && cluster_of[u] != cluster_of[v]) ++cut;
    }
  }
  return cut;
}

ClusterAssignment partition(const Graph& graph, std::size_t num_clusters,
                            std::uint64_t seed) {
  const std::size_t n = graph.num_nodes();
  if (num_clusters < 1 || num_clusters > n) {
    throw std::invalid_argument("partition: need 1 <= num_clusters <= num_nodes");
  }

  ClusterAssignment out;
  out.num_clusters = num_clusters;
  out.cluster_of.assign(n, kUnassigned);

  // --- Grow phase ---
  Rng rng = derive_rng(seed, 0, "partition-seeds");
  const auto seeds = spread_seeds(graph, num_clusters, rng);

  const std::size_t target = (n + num_clusters - 1) / num_clusters;  // ceil(N/C)
  std::vector<std::deque<NodeId>> frontier(num_clusters);
  std::vector<std::size_t> size(num_clusters, 0);
  std::size_t assigned = 0;
  NodeId next_unassigned = 0;

  auto assign = [&](NodeId v, std::uint32_t c) {
    out.cluster_of[v] = c;
    ++size[c];
    ++assigned;
    for (NodeId u : graph.neighbors(v)) {
      if (out.cluster_of[u] == kUnassigned) frontier[c].push_back(u);
    }
  };
  for (std::size_t c = 0; c < num_clusters; ++c) {
    assign(seeds[c], static_cast<std::uint32_t>(c));
  }

  while (assigned < n) {
    bool progressed = false;
    for (std::size_t c = 0; c < num_clusters && assigned < n; ++c) {
      if (size[c] >= target) continue;
      NodeId pick = kUnassigned;
      while (!frontier[c].empty()) {
        const NodeId cand = frontier[c].front();
        frontier[c].pop_front();
        if (out.cluster_of[cand] == kUnassigned) {
          pick = cand;
          break;
        }
      }
      if (pick == kUnassigned) {
        // Frontier exhausted: restart from the lowest unassigned id (covers
        // disconnected graphs).
        while (next_unassigned < n && out.cluster_of[next_unassigned] != kUnassigned) {
          ++next_unassigned;
        }
        if (next_unassigned >= n) continue;
        pick = next_unassigned;
      }
      assign(pick, static_cast<std::uint32_t>(c));
      progressed = true;
    }
    if (!progressed) {
      // Every cluster is at target but nodes remain (n not divisible into
      // equal targets cannot happen since C*ceil(N/C) >= N, but guard anyway
      // by topping up the smallest cluster).
      while (next_unassigned < n && out.cluster_of[next_unassigned] != kUnassigned) {
        ++next_unassigned;
      }
      const auto smallest = static_cast<std::uint32_t>(
          std::min_element(size.begin(), size.end()) - size.begin());
      assign(next_unassigned, smallest);
    }
  }

  out.sweep_cuts.push_back(edge_cut(graph, out.cluster_of));

  // --- Refine phase ---
  // ceil(1.1 * N / C) computed in integers: ceil(11*N / (10*C)).
  const std::size_t cap = (11 * n + 10 * num_clusters - 1) / (10 * num_clusters);
  std::size_t cut = out.sweep_cuts.back();
  for (std::size_t sweep = 0; sweep < kMaxSweeps && num_clusters > 1; ++sweep) {
    bool improved = false;

    // Boundary nodes per cluster at the start of the sweep.  Entries are
    // re-validated before use; nodes that become boundary mid-sweep wait for
    // the next sweep.
    std::vector<std::vector<NodeId>> boundary(num_clusters);
    for (NodeId v = 0; v < n; ++v) {
      if (is_boundary(graph, v, out.cluster_of)) {
        boundary[out.cluster_of[v]].push_back(v);
      }
    }

    // Swap pass: same-size exchanges between boundary nodes.  Gain of
    // swapping a (in A) with b (in B) is
    //   [links(a,B) - links(a,A)] + [links(b,A) - links(b,B)] - 2*[a~b].
    for (NodeId a = 0; a < n; ++a) {
      if (!is_boundary(graph, a, out.cluster_of)) continue;
      const std::uint32_t ca = out.cluster_of[a];
      // Candidate clusters: those a has neighbors in.
      std::vector<std::uint32_t> cand;
      for (NodeId u : graph.neighbors(a)) {
        const std::uint32_t cu = out.cluster_of[u];
        if (cu != ca && std::find(cand.begin(), cand.end(), cu) == cand.end()) {
          cand.push_back(cu);
        }
      }
      for (std::uint32_t cb : cand) {
        const std::size_t a_to_b = links_to(graph, a, cb, out.cluster_of);
        const std::size_t a_to_a = links_to(graph, a, ca, out.cluster_of);
        bool swapped = false;
        for (std::size_t bi = 0; bi < boundary[cb].size() && !swapped; ++bi) {
          const NodeId b = boundary[cb][bi];
          if (out.cluster_of[b] != cb || !is_boundary(graph, b, out.cluster_of)) continue;
          const std::size_t b_to_a = links_to(graph, b, ca, out.cluster_of);
          const std::size_t b_to_b = links_to(graph, b, cb, out.cluster_of);
          const std::ptrdiff_t adj = graph.has_edge(a, b) ? 1 : 0;
          const std::ptrdiff_t gain =
              static_cast<std::ptrdiff_t>(a_to_b) - static_cast<std::ptrdiff_t>(a_to_a) +
              static_cast<std::ptrdiff_t>(b_to_a) - static_cast<std::ptrdiff_t>(b_to_b) -
              2 * adj;
          if (gain > 0) {
            out.cluster_of[a] = cb;
            out.cluster_of[b] = ca;
            cut -= static_cast<std::size_t>(gain);
            improved = true;
            swapped = true;
          }
        }
        if (swapped) break;  // a changed cluster; revisit on a later sweep
      }
    }

    // Move pass: single-node relocations under the balance cap.
    for (NodeId v = 0; v < n; ++v) {
      const std::uint32_t cv = out.cluster_of[v];
      if (size[cv] <= 1) continue;  // clusters stay non-empty
      if (!is_boundary(graph, v, out.cluster_of)) continue;
      const std::size_t internal = links_to(graph, v, cv, out.cluster_of);
      std::uint32_t best_cluster = cv;
      std::ptrdiff_t best_gain = 0;
      std::vector<std::uint32_t> cand;
      for (NodeId u : graph.neighbors(v)) {
        const std::uint32_t cu = out.cluster_of[u];
        if (cu != cv && std::find(cand.begin(), cand.end(), cu) == cand.end()) {
          cand.push_back(cu);
        }
      }
      for (std::uint32_t cu : cand) {
        if (size[cu] + 1 > cap) continue;
        const std::ptrdiff_t gain =
            static_cast<std::ptrdiff_t>(links_to(graph, v, cu, out.cluster_of)) -
            static_cast<std::ptrdiff_t>(internal);
        if (gain > best_gain) {
          best_gain = gain;
          best_cluster = cu;
        }
      }
      if (best_cluster != cv) {
        out.cluster_of[v] = best_cluster;
        --size[cv];
        ++size[best_cluster];
        cut -= static_cast<std::size_t>(best_gain);
        improved = true;
      }
    }

    out.sweep_cuts.push_back(cut);
    if (!improved) break;
  }

  out.edge_cut = edge_cut(graph, out.cluster_of);
  return out;
}

}  // namespace ldpgnn
