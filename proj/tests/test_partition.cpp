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
#include <vector>

#include "ldpgnn/graph.hpp"
#include "ldpgnn/partition.hpp"
#include "ldpgnn/rng.hpp"
#include "ldpgnn/synth.hpp"

using namespace ldpgnn;

namespace {

Graph random_graph(std::size_t n, double edge_prob, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (rng.bernoulli(edge_prob)) edges.emplace_back(u, v);
    }
  }
  return Graph::from_edges(n, edges);
}

void check_invariants(const Graph& g, const ClusterAssignment& a, std::size_t c) {
  REQUIRE(a.cluster_of.size() == g.num_nodes());
  REQUIRE(a.num_clusters == c);
  const auto sizes = a.sizes();
  REQUIRE(sizes.size() == c);
  const std::size_t cap = static_cast<std::size_t>(
      std::ceil(1.1 * static_cast<double>(g.num_nodes()) / static_cast<double>(c)));
  std::size_t total = 0;
  for (std::size_t s : sizes) {
    CHECK(s >= 1);       // every cluster nonempty
    CHECK(s <= cap);     // balance
    total += s;
  }
  CHECK(total == g.num_nodes());  // disjoint cover
  for (auto r : a.cluster_of) CHECK(r < c);

  // Reported cut agrees with a recomputation and with the sweep trace.
  CHECK(a.edge_cut == edge_cut(g, a.cluster_of));
  REQUIRE(!a.sweep_cuts.empty());
  CHECK(a.sweep_cuts.back() == a.edge_cut);
  for (std::size_t i = 1; i < a.sweep_cuts.size(); ++i) {
    CHECK(a.sweep_cuts[i] <= a.sweep_cuts[i - 1]);  // refinement never worsens
  }
}

}  // namespace

TEST_CASE("edge_cut counts crossing edges") {
  const Graph cycle = Graph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  const std::vector<std::uint32_t> split = {0, 0, 1, 1};
  CHECK(edge_cut(cycle, split) == 2);
  const std::vector<std::uint32_t> lone = {0, 0, 0, 0};
  CHECK(edge_cut(cycle, lone) == 0);
  const std::vector<std::uint32_t> bad = {0, 0, 1};
  CHECK_THROWS_AS(edge_cut(cycle, bad), std::invalid_argument);
}

TEST_CASE("frozen example: 4-cycle into two clusters") {
  const Graph g = Graph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ClusterAssignment a = partition(g, 2, seed);
    check_invariants(g, a, 2);
    auto sizes = a.sizes();
    std::sort(sizes.begin(), sizes.end());
    CHECK(sizes == std::vector<std::size_t>{2, 2});
    CHECK(a.edge_cut == 2);  // any balanced split of a cycle cuts exactly 2
  }
}

TEST_CASE("frozen example: 4-path into two clusters cuts the middle edge") {
  const Graph g = Graph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}});
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ClusterAssignment a = partition(g, 2, seed);
    check_invariants(g, a, 2);
    auto sizes = a.sizes();
    std::sort(sizes.begin(), sizes.end());
    CHECK(sizes == std::vector<std::size_t>{2, 2});
    CHECK(a.edge_cut == 1);
  }
}

TEST_CASE("frozen example: two triangles split cleanly") {
  const Graph g =
      Graph::from_edges(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ClusterAssignment a = partition(g, 2, seed);
    check_invariants(g, a, 2);
    CHECK(a.edge_cut == 0);
    auto sizes = a.sizes();
    std::sort(sizes.begin(), sizes.end());
    CHECK(sizes == std::vector<std::size_t>{3, 3});
  }
}

TEST_CASE("degenerate cluster counts") {
  const Graph g = random_graph(20, 0.2, 3);
  const ClusterAssignment one = partition(g, 1, 0);
  CHECK(one.edge_cut == 0);
  CHECK(one.sizes() == std::vector<std::size_t>{20});
  const ClusterAssignment all = partition(g, 20, 0);
  CHECK(all.edge_cut == g.num_edges());
  for (std::size_t s : all.sizes()) CHECK(s == 1);

  CHECK_THROWS_AS(partition(g, 0, 0), std::invalid_argument);
  CHECK_THROWS_AS(partition(g, 21, 0), std::invalid_argument);
}

TEST_CASE("invariants hold on random graphs across seeds and cluster counts") {
  for (std::uint64_t graph_seed = 0; graph_seed < 4; ++graph_seed) {
    const Graph g = random_graph(80, 0.06, graph_seed);
    for (std::size_t c : {2u, 4u, 7u}) {
      for (std::uint64_t seed = 0; seed < 3; ++seed) {
        check_invariants(g, partition(g, c, seed), c);
      }
    }
  }
}

TEST_CASE("partition is deterministic in (graph, C, seed)") {
  const Graph g = random_graph(60, 0.08, 5);
  const ClusterAssignment a = partition(g, 5, 11);
  const ClusterAssignment b = partition(g, 5, 11);
  CHECK(a.cluster_of == b.cluster_of);
  CHECK(a.edge_cut == b.edge_cut);
  CHECK(a.sweep_cuts == b.sweep_cuts);
}

TEST_CASE("disconnected graphs are covered") {
  // Two components of unequal size plus an isolated node.
  const Graph g = Graph::from_edges(8, {{0, 1}, {1, 2}, {2, 0}, {4, 5}, {5, 6}});
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const ClusterAssignment a = partition(g, 3, seed);
    check_invariants(g, a, 3);
  }
}

TEST_CASE("clusters track communities on a homophilous graph") {
  SynthParams p;
  p.num_nodes = 200;
  p.num_classes = 2;
  p.p_in = 0.1;
  p.p_out = 0.002;
  const SynthData data = synth_homophily_graph(p, 17);
  const ClusterAssignment a = partition(data.graph, 2, 0);
  check_invariants(data.graph, a, 2);
  // A same-community pair should land in the same cluster more often than a
  // cross-community pair; with two well-separated blocks the cut partition
  // should agree with the blocks almost everywhere (up to cluster renaming).
  std::size_t agree = 0;
  for (std::size_t v = 0; v < 200; ++v) {
    const std::uint32_t community = static_cast<std::uint32_t>(v * 2 / 200);
    if ((a.cluster_of[v] == a.cluster_of[0]) == (community == 0)) ++agree;
  }
  const double rate = static_cast<double>(std::max(agree, 200 - agree)) / 200.0;
  CHECK(rate > 0.9);
}
