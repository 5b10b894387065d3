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
// Server-side denoising.  Perturbed one-hot signals are smoothed by K rounds
// of synchronous neighborhood averaging, then debiased per node with the
// frequency-estimation layer.  Everything here is typed against the
// Perturbed* types: raw client data cannot reach these functions.

#ifndef LDPGNN_RECONSTRUCT_HPP_
#define LDPGNN_RECONSTRUCT_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "ldpgnn/freq_est.hpp"
#include "ldpgnn/graph.hpp"
#include "ldpgnn/ldp.hpp"
#include "ldpgnn/partition.hpp"

namespace ldpgnn {

// Dense per-node real vectors, row-major.
struct PropagatedSignal {
  std::size_t width = 0;
  std::size_t hops = 0;
  std::vector<double> values;  // num_nodes * width

  double at(std::size_t node, std::size_t j) const { return values[node * width + j]; }
};

// K rounds of h_v <- mean over {v} union N(v) of h.  Row mass is conserved
// exactly up to rounding; isolated nodes keep their own signal.
PropagatedSignal propagate_mean(const Graph& graph, std::span<const double> signals,
                                std::size_t width, std::size_t hops);

enum class FeatureMode {
  kArgmax,             // categorical output, per-node argmax of the estimates
  kBinaryProbability,  // per-column probability output, domain 2 only
};

// Which category's probability a binary-probability reconstruction reports.
enum class BinaryProbConvention {
  kSecondCategory,  // default: P(value == 2)
  kFirstCategory,
};

struct ReconstructedFeatures {
  FeatureMode mode = FeatureMode::kArgmax;
  std::size_t num_nodes = 0;
  std::size_t num_columns = 0;
  std::vector<std::uint32_t> domains;
  // kArgmax: 1-based categories, size num_nodes * num_columns.
  std::vector<std::uint32_t> values;
  // kBinaryProbability: probabilities in [0, 1], size num_nodes * num_columns.
  std::vector<double> probabilities;
};

// Per-column one-hot encoding + K_x propagation rounds + per-node affine
// debiasing.  Argmax ties break to the lowest category.  In binary-
// probability mode every domain must be 2 and the estimate of the chosen
// category is clipped to [0, 1].
ReconstructedFeatures reconstruct_features(
    const Graph& graph, const PerturbedFeatures& perturbed, std::size_t hops,
    FeatureMode mode = FeatureMode::kArgmax,
    BinaryProbConvention convention = BinaryProbConvention::kSecondCategory);

struct ReconstructedLabels {
  std::size_t num_classes = 0;
  std::vector<std::uint32_t> labeled_nodes;  // sorted, the labeled set
  std::vector<std::uint32_t> classes;        // parallel, 0-based
  // Propagated mass per labeled node before renormalization (diagnostics).
  std::vector<double> masses;
};

// Masked label propagation: labeled nodes start from their perturbed one-hot
// rows, unlabeled nodes from zero.  After K_y rounds each labeled node's row
// is renormalized to unit mass and debiased through the closed-form channel
// inverse; the argmax (lowest index on ties) is the reconstructed label.
ReconstructedLabels reconstruct_labels(const Graph& graph,
                                       const PerturbedLabels& perturbed,
                                       std::size_t hops);

struct BagProportions {
  std::size_t num_classes = 0;
  std::size_t num_clusters = 0;
  std::vector<double> observed;       // b'_r, row-major C x c
  std::vector<double> reconstructed;  // b~_r, row-major C x c, rows on the simplex
  std::vector<std::uint32_t> labeled_counts;  // |C_r^L|
  std::vector<bool> included;         // false for clusters without labeled nodes
};

// Per-cluster label proportions: b'_r is the mean of the perturbed one-hot
// rows over the cluster's labeled members, b~_r its channel inverse projected
// back to the simplex.  Clusters without labeled members are flagged
// excluded and their rows are uniform placeholders.
BagProportions reconstruct_bag_proportions(const PerturbedLabels& perturbed,
                                           const ClusterAssignment& clusters,
                                           const TransitionMatrix& channel);

// Clamps every entry to at least kEpsFloor and renormalizes to sum 1.
// Throws std::invalid_argument on non-finite entries.
std::vector<double> simplex_project(std::span<const double> v);

}  // namespace ldpgnn

#endif  // LDPGNN_RECONSTRUCT_HPP_
