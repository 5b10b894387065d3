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

#include "ldpgnn/gnn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ldpgnn/common.hpp"

namespace ldpgnn {

namespace {

// C = A * B, row-partitioned.
Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols != b.rows) throw std::invalid_argument("matmul: shape mismatch");
  Matrix c(a.rows, b.cols);
  parallel_for(a.rows, thread_count(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      for (std::size_t k = 0; k < a.cols; ++k) {
        const double aik = a.a[i * a.cols + k];
        if (aik == 0.0) continue;
        const double* brow = &b.a[k * b.cols];
        double* crow = &c.a[i * b.cols];
        for (std::size_t j = 0; j < b.cols; ++j) crow[j] += aik * brow[j];
      }
    }
  });
  return c;
}

// C = A^T * B where A is n x k and B is n x m; output k x m.  Each output
// row is owned by one worker, so the result is thread-count invariant.
Matrix matmul_at_b(const Matrix& a, const Matrix& b) {
  if (a.rows != b.rows) throw std::invalid_argument("matmul_at_b: shape mismatch");
  Matrix c(a.cols, b.cols);
  parallel_for(a.cols, thread_count(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      double* crow = &c.a[i * b.cols];
      for (std::size_t v = 0; v < a.rows; ++v) {
        const double avi = a.a[v * a.cols + i];
        if (avi == 0.0) continue;
        const double* brow = &b.a[v * b.cols];
        for (std::size_t j = 0; j < b.cols; ++j) crow[j] += avi * brow[j];
      }
    }
  });
  return c;
}

// C = A * B^T where A is n x m and B is k x m; output n x k.
Matrix matmul_a_bt(const Matrix& a, const Matrix& b) {
  if (a.cols != b.cols) throw std::invalid_argument("matmul_a_bt: shape mismatch");
  Matrix c(a.rows, b.rows);
  parallel_for(a.rows, thread_count(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t v = lo; v < hi; ++v) {
      const double* arow = &a.a[v * a.cols];
      for (std::size_t i = 0; i < b.rows; ++i) {
        const double* brow = &b.a[i * b.cols];
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols; ++j) s += arow[j] * brow[j];
        c.a[v * b.rows + i] = s;
      }
    }
  });
  return c;
}

// [X || mean_{u in N(v)} X_u]; isolated nodes aggregate a zero row.
Matrix concat_with_neighbor_mean(const Graph& graph, const Matrix& x) {
  Matrix out(x.rows, 2 * x.cols);
  parallel_for(x.rows, thread_count(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t v = lo; v < hi; ++v) {
      const double* xrow = &x.a[v * x.cols];
      double* orow = &out.a[v * out.cols];
      std::copy(xrow, xrow + x.cols, orow);
      const auto nbrs = graph.neighbors(static_cast<NodeId>(v));
      if (nbrs.empty()) continue;
      double* agg = orow + x.cols;
      for (const NodeId u : nbrs) {
        const double* urow = &x.a[static_cast<std::size_t>(u) * x.cols];
        for (std::size_t j = 0; j < x.cols; ++j) agg[j] += urow[j];
      }
      const double inv = 1.0 / static_cast<double>(nbrs.size());
      for (std::size_t j = 0; j < x.cols; ++j) agg[j] *= inv;
    }
  });
  return out;
}

// Adjoint of the neighbor-mean aggregation: out_u = sum_{v in N(u)} g_v / deg(v).
// Pull-form accumulation keeps it deterministic under any thread count.
Matrix neighbor_mean_transpose(const Graph& graph, const Matrix& g) {
  Matrix out(g.rows, g.cols);
  parallel_for(g.rows, thread_count(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t u = lo; u < hi; ++u) {
      double* orow = &out.a[u * g.cols];
      for (const NodeId v : graph.neighbors(static_cast<NodeId>(u))) {
        const double inv = 1.0 / static_cast<double>(graph.degree(v));
        const double* grow = &g.a[static_cast<std::size_t>(v) * g.cols];
        for (std::size_t j = 0; j < g.cols; ++j) orow[j] += inv * grow[j];
      }
    }
  });
  return out;
}

// Inverted dropout; masks hold 0 or 1/keep and are drawn serially so the
// stream consumption is independent of the thread count.
Matrix apply_dropout(const Matrix& x, double rate, Rng* rng, std::vector<double>* mask) {
  mask->clear();
  if (rate <= 0.0) return x;
  if (rng == nullptr) throw std::invalid_argument("dropout requires an rng in training mode");
  const double keep = 1.0 - rate;
  const double inv_keep = 1.0 / keep;
  mask->resize(x.a.size());
  for (std::size_t i = 0; i < x.a.size(); ++i)
    (*mask)[i] = rng->unit() < keep ? inv_keep : 0.0;
  Matrix out(x.rows, x.cols);
  for (std::size_t i = 0; i < x.a.size(); ++i) out.a[i] = x.a[i] * (*mask)[i];
  return out;
}

void softmax_rows(Matrix* z) {
  parallel_for(z->rows, thread_count(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t v = lo; v < hi; ++v) {
      double* row = &z->a[v * z->cols];
      double mx = row[0];
      for (std::size_t j = 1; j < z->cols; ++j) mx = std::max(mx, row[j]);
      double sum = 0.0;
      for (std::size_t j = 0; j < z->cols; ++j) {
        row[j] = std::exp(row[j] - mx);
        sum += row[j];
      }
      const double inv = 1.0 / sum;
      for (std::size_t j = 0; j < z->cols; ++j) row[j] *= inv;
    }
  });
}

std::size_t argmax_row(const double* row, std::size_t n) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < n; ++j)
    if (row[j] > row[best]) best = j;
  return best;
}

// class_of[v] = reconstructed class, or -1 for unlabeled nodes.
std::vector<std::int64_t> class_lookup(const ReconstructedLabels& labels,
                                       std::size_t num_nodes) {
  std::vector<std::int64_t> out(num_nodes, -1);
  for (std::size_t i = 0; i < labels.labeled_nodes.size(); ++i) {
    const NodeId v = labels.labeled_nodes[i];
    if (static_cast<std::size_t>(v) >= num_nodes)
      throw std::invalid_argument("label node id out of range");
    out[v] = static_cast<std::int64_t>(labels.classes[i]);
  }
  return out;
}

double accuracy_over(const Matrix& probs, const std::vector<std::int64_t>& class_of,
                     std::span<const std::uint32_t> nodes) {
  std::size_t total = 0;
  std::size_t correct = 0;
  for (const std::uint32_t v : nodes) {
    if (class_of[v] < 0) continue;
    ++total;
    const std::size_t pred = argmax_row(&probs.a[static_cast<std::size_t>(v) * probs.cols], probs.cols);
    if (static_cast<std::int64_t>(pred) == class_of[v]) ++correct;
  }
  if (total == 0) return 0.0;
  return static_cast<double>(correct) / static_cast<double>(total);
}

std::vector<std::size_t> labeled_bag_counts(const ClusterAssignment& clusters,
                                            std::span<const std::uint32_t> labeled_nodes) {
  std::vector<std::size_t> counts(clusters.num_clusters, 0);
  for (const std::uint32_t v : labeled_nodes) {
    if (static_cast<std::size_t>(v) >= clusters.cluster_of.size())
      throw std::invalid_argument("labeled node outside the cluster assignment");
    ++counts[clusters.cluster_of[v]];
  }
  return counts;
}

}  // namespace

ModelParams init_params(std::size_t input_dim, std::size_t hidden_dim,
                        std::size_t num_classes, Rng& rng) {
  if (input_dim == 0 || hidden_dim == 0 || num_classes < 2)
    throw std::invalid_argument("init_params: bad dimensions");
  ModelParams p;
  p.input_dim = input_dim;
  p.hidden_dim = hidden_dim;
  p.num_classes = num_classes;
  p.w1 = Matrix(2 * input_dim, hidden_dim);
  p.b1.assign(hidden_dim, 0.0);
  p.w2 = Matrix(2 * hidden_dim, num_classes);
  p.b2.assign(num_classes, 0.0);
  const auto glorot_fill = [&rng](Matrix* w) {
    const double limit =
        std::sqrt(6.0 / static_cast<double>(w->rows + w->cols));
    for (double& x : w->a) x = (2.0 * rng.unit() - 1.0) * limit;
  };
  glorot_fill(&p.w1);
  glorot_fill(&p.w2);
  return p;
}

Matrix encode_categorical(std::size_t num_nodes, std::size_t num_columns,
                          std::span<const std::uint32_t> values,
                          std::span<const std::uint32_t> domains) {
  if (num_columns == 0) throw std::invalid_argument("encode_categorical: zero columns");
  if (domains.size() != num_columns)
    throw std::invalid_argument("encode_categorical: domain count mismatch");
  if (values.size() != num_nodes * num_columns)
    throw std::invalid_argument("encode_categorical: value count mismatch");
  std::vector<std::size_t> offsets(num_columns + 1, 0);
  for (std::size_t i = 0; i < num_columns; ++i) {
    if (domains[i] < 2) throw std::invalid_argument("encode_categorical: domain < 2");
    offsets[i + 1] = offsets[i] + domains[i];
  }
  Matrix out(num_nodes, offsets[num_columns]);
  for (std::size_t v = 0; v < num_nodes; ++v) {
    for (std::size_t i = 0; i < num_columns; ++i) {
      const std::uint32_t val = values[v * num_columns + i];
      if (val < 1 || val > domains[i])
        throw std::invalid_argument("encode_categorical: value outside domain");
      out.at(v, offsets[i] + (val - 1)) = 1.0;
    }
  }
  return out;
}

Matrix encode_input(const ReconstructedFeatures& features) {
  if (features.num_columns == 0)
    throw std::invalid_argument("encode_input: zero-width features");
  if (features.mode == FeatureMode::kArgmax) {
    return encode_categorical(features.num_nodes, features.num_columns,
                              features.values, features.domains);
  }
  if (features.probabilities.size() != features.num_nodes * features.num_columns)
    throw std::invalid_argument("encode_input: probability count mismatch");
  Matrix out(features.num_nodes, features.num_columns);
  std::copy(features.probabilities.begin(), features.probabilities.end(),
            out.a.begin());
  return out;
}

ForwardState forward(const ModelParams& params, const Graph& graph,
                     const Matrix& inputs, bool training, double dropout_rate,
                     Rng* dropout_rng) {
  if (inputs.rows != graph.num_nodes())
    throw std::invalid_argument("forward: input rows != graph nodes");
  if (inputs.cols != params.input_dim)
    throw std::invalid_argument("forward: input width != model input_dim");
  if (dropout_rate < 0.0 || dropout_rate >= 1.0)
    throw std::invalid_argument("forward: dropout must lie in [0, 1)");

  ForwardState s;
  std::vector<double> mask0;
  std::vector<double> mask1;
  s.x_drop = training ? apply_dropout(inputs, dropout_rate, dropout_rng, &mask0)
                      : inputs;
  s.a1 = concat_with_neighbor_mean(graph, s.x_drop);
  s.z1 = matmul(s.a1, params.w1);
  parallel_for(s.z1.rows, thread_count(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t v = lo; v < hi; ++v)
      for (std::size_t j = 0; j < s.z1.cols; ++j)
        s.z1.a[v * s.z1.cols + j] += params.b1[j];
  });
  Matrix h1(s.z1.rows, s.z1.cols);
  for (std::size_t i = 0; i < s.z1.a.size(); ++i)
    h1.a[i] = s.z1.a[i] > 0.0 ? s.z1.a[i] : 0.0;
  s.h1_drop = training ? apply_dropout(h1, dropout_rate, dropout_rng, &mask1)
                       : std::move(h1);
  s.a2 = concat_with_neighbor_mean(graph, s.h1_drop);
  s.probs = matmul(s.a2, params.w2);
  parallel_for(s.probs.rows, thread_count(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t v = lo; v < hi; ++v)
      for (std::size_t j = 0; j < s.probs.cols; ++j)
        s.probs.a[v * s.probs.cols + j] += params.b2[j];
  });
  softmax_rows(&s.probs);
  s.mask0 = std::move(mask0);
  s.mask1 = std::move(mask1);
  return s;
}

void fill_bag_means(const Matrix& probs, const ClusterAssignment& clusters,
                    std::span<const std::uint32_t> labeled_nodes,
                    Predictions* preds) {
  const std::size_t c = probs.cols;
  preds->bag_means = Matrix(clusters.num_clusters, c);
  preds->bag_included.assign(clusters.num_clusters, false);
  const auto counts = labeled_bag_counts(clusters, labeled_nodes);
  for (const std::uint32_t v : labeled_nodes) {
    const std::uint32_t r = clusters.cluster_of[v];
    const double* row = &probs.a[static_cast<std::size_t>(v) * c];
    for (std::size_t j = 0; j < c; ++j) preds->bag_means.at(r, j) += row[j];
  }
  for (std::size_t r = 0; r < clusters.num_clusters; ++r) {
    if (counts[r] == 0) continue;
    preds->bag_included[r] = true;
    const double inv = 1.0 / static_cast<double>(counts[r]);
    for (std::size_t j = 0; j < c; ++j) preds->bag_means.at(r, j) *= inv;
  }
}

double loss_gnn(const Matrix& probs, const ReconstructedLabels& labels,
                std::span<const std::uint32_t> train_nodes) {
  if (train_nodes.empty()) throw std::invalid_argument("loss_gnn: empty train set");
  const auto class_of = class_lookup(labels, probs.rows);
  double total = 0.0;
  for (const std::uint32_t v : train_nodes) {
    if (class_of[v] < 0)
      throw std::invalid_argument("loss_gnn: train node lacks a label");
    const double p =
        probs.a[static_cast<std::size_t>(v) * probs.cols +
                static_cast<std::size_t>(class_of[v])];
    total -= std::log(p + kEpsFloor);
  }
  return total / static_cast<double>(train_nodes.size());
}

double loss_llp(const Predictions& preds, const BagProportions& bags) {
  if (preds.bag_means.rows != bags.num_clusters ||
      preds.bag_means.cols != bags.num_classes)
    throw std::invalid_argument("loss_llp: shape mismatch");
  std::size_t used = 0;
  double total = 0.0;
  for (std::size_t r = 0; r < bags.num_clusters; ++r) {
    if (!bags.included[r] || !preds.bag_included[r]) continue;
    ++used;
    for (std::size_t j = 0; j < bags.num_classes; ++j) {
      const double bhat = preds.bag_means.at(r, j);
      const double btilde = bags.reconstructed[r * bags.num_classes + j];
      total += bhat * (std::log(bhat + kEpsFloor) - std::log(btilde + kEpsFloor));
    }
  }
  if (used == 0) return 0.0;
  return total / static_cast<double>(used);
}

Matrix loss_gradient(const ForwardState& state, const ReconstructedLabels& labels,
                     std::span<const std::uint32_t> train_nodes, double alpha,
                     const Predictions* preds, const BagProportions* bags,
                     const ClusterAssignment* clusters) {
  const Matrix& probs = state.probs;
  Matrix dprobs(probs.rows, probs.cols);
  const auto class_of = class_lookup(labels, probs.rows);
  if (train_nodes.empty()) throw std::invalid_argument("loss_gradient: empty train set");
  const double inv_t = 1.0 / static_cast<double>(train_nodes.size());
  for (const std::uint32_t v : train_nodes) {
    if (class_of[v] < 0)
      throw std::invalid_argument("loss_gradient: train node lacks a label");
    const std::size_t idx = static_cast<std::size_t>(v) * probs.cols +
                            static_cast<std::size_t>(class_of[v]);
    dprobs.a[idx] -= inv_t / (probs.a[idx] + kEpsFloor);
  }
  if (alpha > 0.0 && preds != nullptr && bags != nullptr && clusters != nullptr) {
    std::size_t used = 0;
    for (std::size_t r = 0; r < bags->num_clusters; ++r)
      if (bags->included[r] && preds->bag_included[r]) ++used;
    if (used > 0) {
      const auto counts = labeled_bag_counts(*clusters, labels.labeled_nodes);
      const double inv_used = 1.0 / static_cast<double>(used);
      // d KL / d bag_mean_j = ln((bhat+e)/(btilde+e)) + bhat/(bhat+e),
      // spread uniformly over the bag's labeled members.
      Matrix gbag(bags->num_clusters, bags->num_classes);
      for (std::size_t r = 0; r < bags->num_clusters; ++r) {
        if (!bags->included[r] || !preds->bag_included[r]) continue;
        for (std::size_t j = 0; j < bags->num_classes; ++j) {
          const double bhat = preds->bag_means.at(r, j);
          const double btilde = bags->reconstructed[r * bags->num_classes + j];
          gbag.at(r, j) = inv_used *
                          (std::log(bhat + kEpsFloor) - std::log(btilde + kEpsFloor) +
                           bhat / (bhat + kEpsFloor));
        }
      }
      for (const std::uint32_t v : labels.labeled_nodes) {
        const std::uint32_t r = clusters->cluster_of[v];
        if (!bags->included[r] || !preds->bag_included[r]) continue;
        const double inv_cnt = alpha / static_cast<double>(counts[r]);
        double* drow = &dprobs.a[static_cast<std::size_t>(v) * probs.cols];
        for (std::size_t j = 0; j < probs.cols; ++j)
          drow[j] += inv_cnt * gbag.at(r, j);
      }
    }
  }
  return dprobs;
}

Gradients backward(const ModelParams& params, const Graph& graph,
                   const Matrix& inputs, const ForwardState& state,
                   const Matrix& dprobs) {
  (void)inputs;
  const std::size_t c = params.num_classes;
  if (dprobs.rows != state.probs.rows || dprobs.cols != c)
    throw std::invalid_argument("backward: dprobs shape mismatch");

  // Softmax rows: dz_k = p_k * (g_k - sum_j g_j p_j).
  Matrix dz2(dprobs.rows, c);
  parallel_for(dprobs.rows, thread_count(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t v = lo; v < hi; ++v) {
      const double* p = &state.probs.a[v * c];
      const double* g = &dprobs.a[v * c];
      double dot = 0.0;
      for (std::size_t j = 0; j < c; ++j) dot += g[j] * p[j];
      double* out = &dz2.a[v * c];
      for (std::size_t j = 0; j < c; ++j) out[j] = p[j] * (g[j] - dot);
    }
  });

  Gradients grads;
  grads.dw2 = matmul_at_b(state.a2, dz2);
  grads.db2.assign(c, 0.0);
  for (std::size_t v = 0; v < dz2.rows; ++v)
    for (std::size_t j = 0; j < c; ++j) grads.db2[j] += dz2.at(v, j);

  const Matrix da2 = matmul_a_bt(dz2, params.w2);
  const std::size_t h = params.hidden_dim;
  Matrix da2_self(da2.rows, h);
  Matrix da2_agg(da2.rows, h);
  for (std::size_t v = 0; v < da2.rows; ++v) {
    for (std::size_t j = 0; j < h; ++j) {
      da2_self.at(v, j) = da2.at(v, j);
      da2_agg.at(v, j) = da2.at(v, h + j);
    }
  }
  Matrix dh1 = neighbor_mean_transpose(graph, da2_agg);
  for (std::size_t i = 0; i < dh1.a.size(); ++i) dh1.a[i] += da2_self.a[i];

  // Dropout adjoint (identity when no mask was drawn), then ReLU adjoint.
  if (!state.mask1.empty())
    for (std::size_t i = 0; i < dh1.a.size(); ++i) dh1.a[i] *= state.mask1[i];
  Matrix dz1 = std::move(dh1);
  for (std::size_t i = 0; i < dz1.a.size(); ++i)
    if (state.z1.a[i] <= 0.0) dz1.a[i] = 0.0;

  grads.dw1 = matmul_at_b(state.a1, dz1);
  grads.db1.assign(h, 0.0);
  for (std::size_t v = 0; v < dz1.rows; ++v)
    for (std::size_t j = 0; j < h; ++j) grads.db1[j] += dz1.at(v, j);
  return grads;
}

AdamState make_adam_state(const ModelParams& params) {
  AdamState s;
  const auto zeros_like = [](const ModelParams& p) {
    Gradients g;
    g.dw1 = Matrix(p.w1.rows, p.w1.cols);
    g.db1.assign(p.b1.size(), 0.0);
    g.dw2 = Matrix(p.w2.rows, p.w2.cols);
    g.db2.assign(p.b2.size(), 0.0);
    return g;
  };
  s.m = zeros_like(params);
  s.v = zeros_like(params);
  return s;
}

void adam_step(ModelParams* params, const Gradients& grads, AdamState* state,
               double learning_rate, double beta1, double beta2, double eps) {
  state->step += 1;
  const double t = static_cast<double>(state->step);
  const double corr1 = 1.0 - std::pow(beta1, t);
  const double corr2 = 1.0 - std::pow(beta2, t);
  const auto update = [&](std::vector<double>& w, const std::vector<double>& g,
                          std::vector<double>& m, std::vector<double>& v) {
    if (w.size() != g.size() || w.size() != m.size() || w.size() != v.size())
      throw std::invalid_argument("adam_step: shape mismatch");
    for (std::size_t i = 0; i < w.size(); ++i) {
      m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
      v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
      const double mhat = m[i] / corr1;
      const double vhat = v[i] / corr2;
      w[i] -= learning_rate * mhat / (std::sqrt(vhat) + eps);
    }
  };
  update(params->w1.a, grads.dw1.a, state->m.dw1.a, state->v.dw1.a);
  update(params->b1, grads.db1, state->m.db1, state->v.db1);
  update(params->w2.a, grads.dw2.a, state->m.dw2.a, state->v.dw2.a);
  update(params->b2, grads.db2, state->m.db2, state->v.db2);
}

TrainResult train(const TrainConfig& config, const Graph& graph,
                  const ReconstructedFeatures& features,
                  const ReconstructedLabels& labels,
                  const ClusterAssignment* clusters, const BagProportions* bags,
                  const NodeSplit& split, const EvalHook& test_hook) {
  if (config.epochs == 0) throw std::invalid_argument("train: epochs must be >= 1");
  if (config.learning_rate <= 0.0)
    throw std::invalid_argument("train: learning rate must be positive");
  if (config.hidden == 0) throw std::invalid_argument("train: hidden must be >= 1");
  if (config.alpha < 0.0) throw std::invalid_argument("train: alpha must be >= 0");
  if (labels.num_classes < 2)
    throw std::invalid_argument("train: need at least two classes");
  const bool use_llp = config.alpha > 0.0;
  if (use_llp && (clusters == nullptr || bags == nullptr))
    throw std::invalid_argument("train: alpha > 0 requires clusters and bags");
  if (use_llp && bags->num_classes != labels.num_classes)
    throw std::invalid_argument("train: bag class count mismatch");

  const Matrix inputs = encode_input(features);
  const auto class_of = class_lookup(labels, graph.num_nodes());

  std::vector<std::uint32_t> train_nodes;
  for (const std::uint32_t v : split.train)
    if (class_of[v] >= 0) train_nodes.push_back(v);
  if (train_nodes.empty())
    throw std::invalid_argument("train: no labeled training nodes");
  std::vector<std::uint32_t> val_nodes;
  for (const std::uint32_t v : split.val)
    if (class_of[v] >= 0) val_nodes.push_back(v);

  Rng init_rng = derive_rng(config.seed, 0, "weight-init");
  ModelParams params =
      init_params(inputs.cols, config.hidden, labels.num_classes, init_rng);
  AdamState adam = make_adam_state(params);

  TrainResult result;
  result.params = params;
  result.best_epoch = 0;
  result.best_val_accuracy = -1.0;
  result.history.reserve(config.epochs);

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    Rng drop_rng = derive_rng(config.seed, epoch, "dropout");
    const ForwardState state =
        forward(params, graph, inputs, true, config.dropout, &drop_rng);
    const double gnn = loss_gnn(state.probs, labels, train_nodes);
    double llp = 0.0;
    Predictions preds;
    if (use_llp) {
      fill_bag_means(state.probs, *clusters, labels.labeled_nodes, &preds);
      llp = loss_llp(preds, *bags);
    }
    const double total = gnn + config.alpha * llp;
    if (!std::isfinite(total))
      throw std::runtime_error("train: non-finite loss at epoch " +
                               std::to_string(epoch));

    const Matrix dprobs =
        loss_gradient(state, labels, train_nodes, config.alpha,
                      use_llp ? &preds : nullptr, use_llp ? bags : nullptr,
                      use_llp ? clusters : nullptr);
    const Gradients grads = backward(params, graph, inputs, state, dprobs);
    adam_step(&params, grads, &adam, config.learning_rate, config.adam_beta1,
              config.adam_beta2, config.adam_eps);

    const ForwardState eval_state = forward(params, graph, inputs, false, 0.0, nullptr);
    const double val_acc = accuracy_over(eval_state.probs, class_of, val_nodes);

    EpochMetrics metrics;
    metrics.epoch = epoch;
    metrics.total_loss = total;
    metrics.gnn_loss = gnn;
    metrics.llp_loss = llp;
    metrics.val_accuracy = val_acc;
    if (test_hook) metrics.test_accuracy = test_hook(params, epoch);
    result.history.push_back(metrics);

    if (val_acc > result.best_val_accuracy) {
      result.best_val_accuracy = val_acc;
      result.best_epoch = epoch;
      result.params = params;
    }
  }
  if (val_nodes.empty()) {
    // Nothing to select on; return the final iterate.
    result.params = params;
    result.best_epoch = config.epochs - 1;
    result.best_val_accuracy = 0.0;
  }
  return result;
}

double evaluate(const ModelParams& params, const Graph& graph, const Matrix& inputs,
                const LabelData& truth, std::span<const std::uint32_t> nodes) {
  truth.validate(graph.num_nodes());
  std::vector<std::int64_t> class_of(graph.num_nodes(), -1);
  for (std::size_t i = 0; i < truth.labeled_nodes.size(); ++i)
    class_of[truth.labeled_nodes[i]] = static_cast<std::int64_t>(truth.classes[i]);
  const ForwardState state = forward(params, graph, inputs, false, 0.0, nullptr);
  std::size_t total = 0;
  std::size_t correct = 0;
  for (const std::uint32_t v : nodes) {
    if (static_cast<std::size_t>(v) >= class_of.size() || class_of[v] < 0) continue;
    ++total;
    const std::size_t pred =
        argmax_row(&state.probs.a[static_cast<std::size_t>(v) * state.probs.cols],
                   state.probs.cols);
    if (static_cast<std::int64_t>(pred) == class_of[v]) ++correct;
  }
  if (total == 0) throw std::invalid_argument("evaluate: no scored nodes");
  return static_cast<double>(correct) / static_cast<double>(total);
}

}  // namespace ldpgnn
