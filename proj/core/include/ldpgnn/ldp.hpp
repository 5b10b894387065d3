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
// Client-side randomizers.  Generalized randomized response over a domain of
// size gamma keeps the true category with probability
//     p = e^eps / (e^eps + gamma - 1)
// and reports any specific other category with probability
//     q = 1 / (e^eps + gamma - 1).
// Feature vectors go through GRR with coordinate sampling: a uniform m-subset
// of the d coordinates is randomized with per-coordinate budget eps_x and the
// remaining coordinates report uniform noise; the subset itself is never
// revealed.  Marginalizing the hidden subset amplifies the budget to
//     eps_X = ln(1 + (m/d) * (e^(m*eps_x) - 1)).

#ifndef LDPGNN_LDP_HPP_
#define LDPGNN_LDP_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "ldpgnn/data.hpp"
#include "ldpgnn/rng.hpp"

namespace ldpgnn {

// Row-symmetric GRR channel: diagonal p, off-diagonal q, rows sum to 1.
struct TransitionMatrix {
  std::size_t size = 0;
  double p = 1.0;
  double q = 0.0;

  // GRR channel for budget eps > 0 over `size` >= 2 categories.
  static TransitionMatrix grr(std::size_t size, double eps);

  // Identity channel (the infinite-budget bypass).
  static TransitionMatrix identity(std::size_t size);

  bool is_identity() const { return q == 0.0; }
};

// Perturbed per-node categorical features plus the mechanism metadata needed
// for server-side estimation.  Deliberately a distinct type from
// CategoricalFeatures: server-side operations accept only this one.
struct PerturbedFeatures {
  std::size_t num_nodes = 0;
  std::size_t num_columns = 0;              // d
  std::vector<std::uint32_t> domains;       // per-column gamma
  std::vector<std::uint32_t> values;        // row-major, 1-based
  std::uint32_t m = 0;                      // sampled coordinates per node
  double eps_x = 0.0;                       // per-coordinate budget
  bool bypass = false;                      // true: values are unperturbed
  std::uint64_t seed = 0;

  std::uint32_t at(std::size_t node, std::size_t col) const {
    return values[node * num_columns + col];
  }
};

// Perturbed one-hot labels for the labeled set, as 0-based class indices.
struct PerturbedLabels {
  std::size_t num_classes = 0;
  std::vector<std::uint32_t> labeled_nodes;  // sorted
  std::vector<std::uint32_t> classes;        // parallel
  double eps_y = 0.0;
  bool bypass = false;
  std::uint64_t seed = 0;
};

// Privacy accounting for one configuration.  eps_feature_total is the
// amplified feature budget eps_X; eps_total = eps_X + eps_y.
struct BudgetReport {
  double eps_x = 0.0;
  std::uint32_t m = 0;
  std::size_t d = 0;
  double eps_feature_total = 0.0;
  double eps_y = 0.0;
  double eps_total = 0.0;
};

// eps_X = ln(1 + (m/d) * (e^(m*eps_x) - 1)).  Requires eps_x > 0 and
// 1 <= m <= d.  Equals m*eps_x when m == d.
double amplified_budget(double eps_x, std::uint32_t m, std::size_t d);

BudgetReport make_budget_report(double eps_x, std::uint32_t m, std::size_t d,
                                double eps_y);

// One GRR draw: keep `value` with probability p, otherwise report a uniform
// other category.  value is 1-based in [1, gamma].
std::uint32_t grr_perturb(std::uint32_t value, std::uint32_t gamma, double eps, Rng& rng);

// One GRR-FS draw for a full feature row.  values[i] in [1, domains[i]];
// 1 <= m <= d.  Returns the perturbed row.
std::vector<std::uint32_t> grr_fs_perturb(std::span<const std::uint32_t> values,
                                          std::span<const std::uint32_t> domains,
                                          std::uint32_t m, double eps_x, Rng& rng);

// One GRR draw over a one-hot label.  The input must be a valid one-hot row
// of length num_classes (exactly one 1.0, rest 0.0).
std::vector<double> label_perturb(std::span<const double> one_hot,
                                  std::size_t num_classes, double eps_y, Rng& rng);

// Whole-table feature collection.  Each node's draws come from the stream
// (seed, node id, "feature-perturb").  With bypass the values are copied
// unchanged and m is recorded as d.
PerturbedFeatures perturb_features(const CategoricalFeatures& features,
                                   std::uint32_t m, double eps_x, bool bypass,
                                   std::uint64_t seed);

// Label collection over the labeled set; stream (seed, node id,
// "label-perturb").
PerturbedLabels perturb_labels(const LabelData& labels, double eps_y, bool bypass,
                               std::uint64_t seed);

}  // namespace ldpgnn

#endif  // LDPGNN_LDP_HPP_
