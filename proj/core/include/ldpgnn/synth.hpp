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

#ifndef LDPGNN_SYNTH_HPP_
#define LDPGNN_SYNTH_HPP_

#include <cstdint>

#include "ldpgnn/data.hpp"
#include "ldpgnn/graph.hpp"

namespace ldpgnn {

struct SynthParams {
  std::size_t num_nodes = 1000;
  std::size_t num_classes = 4;
  std::size_t num_columns = 20;
  std::uint32_t domain = 2;        // common domain size for every column
  double p_in = 0.02;              // intra-community edge probability
  double p_out = 0.002;            // inter-community edge probability
  double feature_skew = 0.75;      // P(column takes its community-preferred value)
  double label_rate = 0.5;         // fraction of nodes in the labeled set
};

struct SynthData {
  Graph graph;
  CategoricalFeatures features;
  LabelData labels;  // labels are the community ids
};

// Stochastic block model with class-correlated categorical features.  Nodes
// are split into near-equal contiguous communities; each pair is joined with
// probability p_in (same community) or p_out (otherwise).  Column i of a
// node in community k prefers category 1 + (k + i) % domain with probability
// feature_skew, and is uniform over the remaining categories otherwise.  The
// labeled set is a uniform sample of round(label_rate * N) nodes; its labels
// are the community ids.
//
// Requires p_in, p_out in [0, 1] with p_in > p_out, and
// feature_skew in (1/domain, 1].
SynthData synth_homophily_graph(const SynthParams& params, std::uint64_t seed);

}  // namespace ldpgnn

#endif  // LDPGNN_SYNTH_HPP_
