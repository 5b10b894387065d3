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

#include "ldpgnn/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ldpgnn/common.hpp"

namespace ldpgnn {
namespace {

// Argmax with ties to the lowest index.
std::size_t argmax(std::span<const double> row) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < row.size(); ++j) {
    if (row[j] > row[best]) best = j;
  }
  return best;
}

}  // namespace

PropagatedSignal propagate_mean(const Graph& graph, std::span<const double> signals,
                                std::size_t width, std::size_t hops) {
  const std::size_t n = graph.num_nodes();
  if (width == 0 || signals.size() != n * width) {
    throw std::invalid_argument("propagate_mean: signal shape mismatch");
  }
  PropagatedSignal out;
  out.width = width;
  out.hops = hops;
  out.values.assign(signals.begin(), signals.end());

  std::vector<double> next(out.values.size());
  const unsigned threads = thread_count();
  for (std::size_t round = 0; round < hops; ++round) {
    const std::vector<double>& cur = out.values;
    parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
      for (std::size_t v = begin; v < end; ++v) {
        const auto nbrs = graph.neighbors(static_cast<NodeId>(v));
        const double inv = 1.0 / static_cast<double>(nbrs.size() + 1);
        for (std::size_t j = 0; j < width; ++j) {
          double acc = cur[v * width + j];
          for (NodeId u : nbrs) acc += cur[u * width + j];
          next[v * width + j] = acc * inv;
        }
      }
    });
    out.values.swap(next);
  }
  return out;
}

ReconstructedFeatures reconstruct_features(const Graph& graph,
                                           const PerturbedFeatures& perturbed,
                                           std::size_t hops, FeatureMode mode,
                                           BinaryProbConvention convention) {
  const std::size_t n = perturbed.num_nodes;
  const std::size_t d = perturbed.num_columns;
  if (graph.num_nodes() != n) {
    throw std::invalid_argument("reconstruct_features: graph/feature size mismatch");
  }
  if (d == 0) throw std::invalid_argument("reconstruct_features: no columns");

  ReconstructedFeatures out;
  out.mode = mode;
  out.num_nodes = n;
  out.num_columns = d;
  out.domains = perturbed.domains;
  if (mode == FeatureMode::kArgmax) {
    out.values.resize(n * d);
  } else {
    for (std::uint32_t g : perturbed.domains) {
      if (g != 2) {
        throw std::invalid_argument(
            "reconstruct_features: binary-probability mode needs domain 2 columns");
      }
    }
    out.probabilities.resize(n * d);
  }

  // Column-by-column: one-hot encode, propagate, debias, decide.
  std::vector<double> onehot;
  for (std::size_t i = 0; i < d; ++i) {
    const std::uint32_t gamma = perturbed.domains[i];
    onehot.assign(n * gamma, 0.0);
    for (std::size_t v = 0; v < n; ++v) {
      const std::uint32_t val = perturbed.at(v, i);
      if (val < 1 || val > gamma) {
        throw std::invalid_argument("reconstruct_features: value outside domain");
      }
      onehot[v * gamma + (val - 1)] = 1.0;
    }
    const PropagatedSignal prop = propagate_mean(graph, onehot, gamma, hops);

    const AffineEstimator est =
        perturbed.bypass ? AffineEstimator{}
                         : [&] {
                             const TransitionMatrix t =
                                 TransitionMatrix::grr(gamma, perturbed.eps_x);
                             return grr_fs_affine(d, perturbed.m, gamma, t.p, t.q);
                           }();

    for (std::size_t v = 0; v < n; ++v) {
      if (mode == FeatureMode::kArgmax) {
        // Positive slope and a shared intercept preserve the argmax, so the
        // debiasing cannot change the decision; keep it for clarity.
        double best = est.slope * prop.at(v, 0) + est.intercept;
        std::uint32_t best_j = 0;
        for (std::uint32_t j = 1; j < gamma; ++j) {
          const double e = est.slope * prop.at(v, j) + est.intercept;
          if (e > best) {
            best = e;
            best_j = j;
          }
        }
        out.values[v * d + i] = best_j + 1;
      } else {
        const std::size_t pick =
            convention == BinaryProbConvention::kSecondCategory ? 1 : 0;
        const double e = est.slope * prop.at(v, pick) + est.intercept;
        out.probabilities[v * d + i] = std::clamp(e, 0.0, 1.0);
      }
    }
  }
  return out;
}

ReconstructedLabels reconstruct_labels(const Graph& graph,
                                       const PerturbedLabels& perturbed,
                                       std::size_t hops) {
  const std::size_t n = graph.num_nodes();
  const std::size_t c = perturbed.num_classes;
  if (c < 2) throw std::invalid_argument("reconstruct_labels: num_classes must be >= 2");
  for (std::uint32_t v : perturbed.labeled_nodes) {
    if (v >= n) throw std::invalid_argument("reconstruct_labels: labeled node out of range");
  }

  // Masked propagation: unlabeled nodes contribute zero rows.
  std::vector<double> signal(n * c, 0.0);
  for (std::size_t i = 0; i < perturbed.labeled_nodes.size(); ++i) {
    signal[perturbed.labeled_nodes[i] * c + perturbed.classes[i]] = 1.0;
  }
  const PropagatedSignal prop = propagate_mean(graph, signal, c, hops);

  const TransitionMatrix channel =
      perturbed.bypass ? TransitionMatrix::identity(c)
                       : TransitionMatrix::grr(c, perturbed.eps_y);

  ReconstructedLabels out;
  out.num_classes = c;
  out.labeled_nodes = perturbed.labeled_nodes;
  out.classes.resize(perturbed.labeled_nodes.size());
  out.masses.resize(perturbed.labeled_nodes.size());
  std::vector<double> row(c);
  for (std::size_t i = 0; i < perturbed.labeled_nodes.size(); ++i) {
    const std::uint32_t v = perturbed.labeled_nodes[i];
    double mass = 0.0;
    for (std::size_t j = 0; j < c; ++j) mass += prop.at(v, j);
    out.masses[i] = mass;
    // A labeled node keeps a share of its own unit row every round, so its
    // mass is strictly positive.
    if (!(mass > 0.0)) {
      throw std::invalid_argument("reconstruct_labels: labeled node with zero mass");
    }
    for (std::size_t j = 0; j < c; ++j) row[j] = prop.at(v, j) / mass;
    const auto est = apply_channel_inverse(row, channel);
    out.classes[i] = static_cast<std::uint32_t>(argmax(est));
  }
  return out;
}

BagProportions reconstruct_bag_proportions(const PerturbedLabels& perturbed,
                                           const ClusterAssignment& clusters,
                                           const TransitionMatrix& channel) {
  const std::size_t c = perturbed.num_classes;
  const std::size_t num_clusters = clusters.num_clusters;
  if (channel.size != c) {
    throw std::invalid_argument("reconstruct_bag_proportions: channel size mismatch");
  }

  BagProportions out;
  out.num_classes = c;
  out.num_clusters = num_clusters;
  out.observed.assign(num_clusters * c, 0.0);
  out.reconstructed.assign(num_clusters * c, 1.0 / static_cast<double>(c));
  out.labeled_counts.assign(num_clusters, 0);
  out.included.assign(num_clusters, false);

  for (std::size_t i = 0; i < perturbed.labeled_nodes.size(); ++i) {
    const std::uint32_t v = perturbed.labeled_nodes[i];
    if (v >= clusters.cluster_of.size()) {
      throw std::invalid_argument("reconstruct_bag_proportions: node without cluster");
    }
    const std::uint32_t r = clusters.cluster_of[v];
    out.observed[r * c + perturbed.classes[i]] += 1.0;
    ++out.labeled_counts[r];
  }

  for (std::size_t r = 0; r < num_clusters; ++r) {
    if (out.labeled_counts[r] == 0) continue;  // flagged excluded
    out.included[r] = true;
    const double inv = 1.0 / static_cast<double>(out.labeled_counts[r]);
    for (std::size_t j = 0; j < c; ++j) out.observed[r * c + j] *= inv;
    std::span<const double> observed_row(out.observed.data() + r * c, c);
    const auto est = apply_channel_inverse(observed_row, channel);
    const auto projected = simplex_project(est);
    std::copy(projected.begin(), projected.end(), out.reconstructed.begin() + r * c);
  }
  return out;
}

std::vector<double> simplex_project(std::span<const double> v) {
  if (v.empty()) throw std::invalid_argument("simplex_project: empty vector");
  std::vector<double> out(v.size());
  double sum = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (!std::isfinite(v[j])) {
      throw std::invalid_argument("simplex_project: non-finite entry");
    }
    out[j] = std::max(v[j], kEpsFloor);
    sum += out[j];
  }
  for (double& x : out) x /= sum;
  return out;
}

}  // namespace ldpgnn
