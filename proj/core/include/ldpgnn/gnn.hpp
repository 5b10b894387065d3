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
// Two-layer mean-aggregation GNN trained full-batch with Adam and manual
// reverse-mode gradients.  Layer k computes
//     z_v = [ h_v || mean_{u in N(v)} h_u ] W_k + bias_k
// with ReLU after the first layer, dropout on layer inputs in training mode,
// and a row softmax after the second.  The label-proportion regularizer
// compares soft prediction means over cluster bags against reconstructed bag
// proportions:  L = L_gnn + alpha * (1/|bags|) sum_r KL(bag_mean_r || b~_r).
//
// Privacy boundary: training consumes only Reconstructed*/BagProportions
// types.  True labels appear in evaluate() alone, which is harness-side
// scoring, never a training signal.

#ifndef LDPGNN_GNN_HPP_
#define LDPGNN_GNN_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "ldpgnn/data.hpp"
#include "ldpgnn/graph.hpp"
#include "ldpgnn/partition.hpp"
#include "ldpgnn/reconstruct.hpp"
#include "ldpgnn/rng.hpp"

namespace ldpgnn {

// Minimal row-major dense matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> a;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}

  double& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }
};

struct ModelParams {
  std::size_t input_dim = 0;
  std::size_t hidden_dim = 0;
  std::size_t num_classes = 0;
  Matrix w1;               // (2 * input_dim) x hidden_dim
  std::vector<double> b1;  // hidden_dim
  Matrix w2;               // (2 * hidden_dim) x num_classes
  std::vector<double> b2;  // num_classes
};

// Glorot-uniform weights (limit sqrt(6 / (fan_in + fan_out))), zero biases.
ModelParams init_params(std::size_t input_dim, std::size_t hidden_dim,
                        std::size_t num_classes, Rng& rng);

struct TrainConfig {
  double eps_x = 1.0;
  double eps_y = 1.0;
  std::uint32_t m = 10;
  std::size_t k_x = 8;        // feature propagation rounds
  std::size_t k_y = 8;        // label propagation rounds
  std::size_t clusters = 16;  // LLP bag count
  double alpha = 1.0;         // LLP weight
  double learning_rate = 0.01;
  std::size_t epochs = 100;
  double dropout = 0.5;
  std::size_t hidden = 16;
  std::uint64_t seed = 0;
  FeatureMode feature_mode = FeatureMode::kArgmax;
  BinaryProbConvention binary_convention = BinaryProbConvention::kSecondCategory;
  bool bypass_features = false;  // infinite-budget switches, not sentinels
  bool bypass_labels = false;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
};

// One-hot encoding of categorical columns, concatenated: width sum(domains).
Matrix encode_categorical(std::size_t num_nodes, std::size_t num_columns,
                          std::span<const std::uint32_t> values,
                          std::span<const std::uint32_t> domains);

// Model input rows: argmax features one-hot encode; binary-probability
// features pass through as d raw probability columns.
Matrix encode_input(const ReconstructedFeatures& features);

// Forward pass intermediates retained for the backward pass.
struct ForwardState {
  Matrix x_drop;   // dropped-out input
  Matrix a1;       // [x_drop || agg(x_drop)]
  Matrix z1;       // pre-activation
  Matrix h1_drop;  // dropped-out ReLU(z1)
  Matrix a2;       // [h1_drop || agg(h1_drop)]
  Matrix probs;    // softmax rows
  std::vector<double> mask0;  // inverted-dropout masks; empty in eval mode
  std::vector<double> mask1;
};

// Training mode draws inverted-dropout masks from `dropout_rng`; eval mode
// (training == false) ignores dropout entirely.
ForwardState forward(const ModelParams& params, const Graph& graph,
                     const Matrix& inputs, bool training, double dropout_rate,
                     Rng* dropout_rng);

struct Predictions {
  Matrix probs;                    // N x c soft rows
  Matrix bag_means;                // C x c soft means over labeled members
  std::vector<bool> bag_included;  // bags with labeled members
};

// Mean of prediction rows over each cluster's labeled members.
void fill_bag_means(const Matrix& probs, const ClusterAssignment& clusters,
                    std::span<const std::uint32_t> labeled_nodes, Predictions* preds);

// Mean cross-entropy -sum_j y_j ln(p_j + eps_floor) over `train_nodes`,
// which must all carry reconstructed labels.
double loss_gnn(const Matrix& probs, const ReconstructedLabels& labels,
                std::span<const std::uint32_t> train_nodes);

// Mean KL(bag_mean || reconstructed) over included bags; logs floored.
double loss_llp(const Predictions& preds, const BagProportions& bags);

struct Gradients {
  Matrix dw1;
  std::vector<double> db1;
  Matrix dw2;
  std::vector<double> db2;
};

// Reverse pass from dL/dprobs.
Gradients backward(const ModelParams& params, const Graph& graph,
                   const Matrix& inputs, const ForwardState& state,
                   const Matrix& dprobs);

// dL/dprobs for L = loss_gnn + alpha * loss_llp at the given state.
Matrix loss_gradient(const ForwardState& state, const ReconstructedLabels& labels,
                     std::span<const std::uint32_t> train_nodes, double alpha,
                     const Predictions* preds, const BagProportions* bags,
                     const ClusterAssignment* clusters);

struct AdamState {
  std::size_t step = 0;
  Gradients m;  // first moments, same shapes as the gradients
  Gradients v;  // second moments
};

AdamState make_adam_state(const ModelParams& params);
void adam_step(ModelParams* params, const Gradients& grads, AdamState* state,
               double learning_rate, double beta1, double beta2, double eps);

struct EpochMetrics {
  std::size_t epoch = 0;
  double total_loss = 0.0;
  double gnn_loss = 0.0;
  double llp_loss = 0.0;
  double val_accuracy = 0.0;
  std::optional<double> test_accuracy;  // via the evaluation hook only
};

struct TrainResult {
  ModelParams params;  // best-validation snapshot
  std::size_t best_epoch = 0;
  double best_val_accuracy = 0.0;
  std::vector<EpochMetrics> history;
};

// Optional per-epoch scoring hook (harness-side; this is how true-label test
// accuracy enters the metrics without true labels entering training).
using EvalHook = std::function<double(const ModelParams&, std::size_t epoch)>;

// Full-batch training.  Supervision is split.train restricted to the labeled
// set; per-epoch validation accuracy is measured on split.val against the
// reconstructed labels and selects the returned snapshot.  clusters/bags may
// be null when alpha == 0.  Throws std::runtime_error (with the epoch) if
// the loss leaves the finite range.
TrainResult train(const TrainConfig& config, const Graph& graph,
                  const ReconstructedFeatures& features,
                  const ReconstructedLabels& labels,
                  const ClusterAssignment* clusters, const BagProportions* bags,
                  const NodeSplit& split, const EvalHook& test_hook = nullptr);

// Accuracy of argmax predictions against true labels over `nodes` (restricted
// to nodes the truth covers).  Evaluation-only boundary: the sole consumer of
// LabelData on the server side.
double evaluate(const ModelParams& params, const Graph& graph, const Matrix& inputs,
                const LabelData& truth, std::span<const std::uint32_t> nodes);

}  // namespace ldpgnn

#endif  // LDPGNN_GNN_HPP_
