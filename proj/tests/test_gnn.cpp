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
#include <cstdlib>
#include <type_traits>
#include <vector>

#include "ldpgnn/common.hpp"
#include "ldpgnn/gnn.hpp"
#include "ldpgnn/ldp.hpp"
#include "ldpgnn/synth.hpp"

using namespace ldpgnn;

namespace {

Graph path3() {
  return Graph::from_edges(3, {{0, 1}, {1, 2}});
}

Graph isolated(std::size_t n) { return Graph::from_edges(n, {}); }

Matrix random_inputs(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Matrix m(rows, cols);
  Rng rng = derive_rng(seed, 0, "inputs");
  for (double& v : m.a) v = rng.unit();
  return m;
}

std::size_t param_count(const ModelParams& p) {
  return p.w1.a.size() + p.b1.size() + p.w2.a.size() + p.b2.size();
}

double* param_coord(ModelParams& p, std::size_t i) {
  if (i < p.w1.a.size()) return &p.w1.a[i];
  i -= p.w1.a.size();
  if (i < p.b1.size()) return &p.b1[i];
  i -= p.b1.size();
  if (i < p.w2.a.size()) return &p.w2.a[i];
  i -= p.w2.a.size();
  return &p.b2[i];
}

double grad_coord(const Gradients& g, std::size_t i) {
  if (i < g.dw1.a.size()) return g.dw1.a[i];
  i -= g.dw1.a.size();
  if (i < g.db1.size()) return g.db1[i];
  i -= g.db1.size();
  if (i < g.dw2.a.size()) return g.dw2.a[i];
  i -= g.dw2.a.size();
  return g.db2[i];
}

double grad_norm(const Gradients& g) {
  double s = 0.0;
  for (double v : g.dw1.a) s += v * v;
  for (double v : g.db1) s += v * v;
  for (double v : g.dw2.a) s += v * v;
  for (double v : g.db2) s += v * v;
  return std::sqrt(s);
}

struct LlpFixture {
  ReconstructedLabels labels;
  std::vector<std::uint32_t> train_nodes;
  ClusterAssignment clusters;
  BagProportions bags;
};

LlpFixture make_llp_fixture() {
  LlpFixture f;
  f.labels.num_classes = 3;
  f.labels.labeled_nodes = {0, 1, 2, 4, 5};
  f.labels.classes = {0, 1, 2, 1, 0};
  f.labels.masses.assign(5, 1.0);
  f.train_nodes = {0, 1, 2, 4};
  f.clusters.num_clusters = 2;
  f.clusters.cluster_of = {0, 0, 1, 1, 1, 0};
  f.bags.num_classes = 3;
  f.bags.num_clusters = 2;
  f.bags.observed = {0.5, 0.3, 0.2, 0.2, 0.5, 0.3};
  f.bags.reconstructed = {0.5, 0.3, 0.2, 0.2, 0.5, 0.3};
  f.bags.labeled_counts = {3, 2};
  f.bags.included = {true, true};
  return f;
}

double total_loss(const ModelParams& params, const Graph& graph,
                  const Matrix& inputs, const LlpFixture& f, double alpha) {
  const ForwardState state = forward(params, graph, inputs, false, 0.0, nullptr);
  double loss = loss_gnn(state.probs, f.labels, f.train_nodes);
  if (alpha > 0.0) {
    Predictions preds;
    preds.probs = state.probs;
    fill_bag_means(state.probs, f.clusters, f.labels.labeled_nodes, &preds);
    loss += alpha * loss_llp(preds, f.bags);
  }
  return loss;
}

Gradients analytic_gradients(const ModelParams& params, const Graph& graph,
                             const Matrix& inputs, const LlpFixture& f,
                             double alpha) {
  const ForwardState state = forward(params, graph, inputs, false, 0.0, nullptr);
  Predictions preds;
  preds.probs = state.probs;
  fill_bag_means(state.probs, f.clusters, f.labels.labeled_nodes, &preds);
  const Matrix dprobs = loss_gradient(state, f.labels, f.train_nodes, alpha,
                                      &preds, &f.bags, &f.clusters);
  return backward(params, graph, inputs, state, dprobs);
}

// Bypass-everything reconstruction so the model sees the clean data.
struct CleanTask {
  SynthData data;
  ReconstructedFeatures features;
  ReconstructedLabels labels;
};

CleanTask make_clean_task(const SynthParams& params, std::uint64_t seed) {
  CleanTask t;
  t.data = synth_homophily_graph(params, seed);
  const PerturbedFeatures px =
      perturb_features(t.data.features, 1, 1.0, /*bypass=*/true, seed + 1);
  t.features = reconstruct_features(t.data.graph, px, /*hops=*/0);
  const PerturbedLabels py =
      perturb_labels(t.data.labels, 1.0, /*bypass=*/true, seed + 2);
  t.labels = reconstruct_labels(t.data.graph, py, /*hops=*/0);
  return t;
}

}  // namespace

TEST_CASE("encode_categorical lays out one-hot blocks per column") {
  const std::vector<std::uint32_t> values = {1, 2, 2, 1};  // 2 nodes x 2 cols
  const std::vector<std::uint32_t> domains = {2, 2};
  const Matrix m = encode_categorical(2, 2, values, domains);
  CHECK(m.rows == 2);
  CHECK(m.cols == 4);
  const std::vector<double> want = {1, 0, 0, 1, 0, 1, 1, 0};
  for (std::size_t i = 0; i < want.size(); ++i) CHECK(m.a[i] == want[i]);
}

TEST_CASE("encode_categorical handles a single wide column") {
  const std::vector<std::uint32_t> values = {2};
  const std::vector<std::uint32_t> domains = {3};
  const Matrix m = encode_categorical(1, 1, values, domains);
  CHECK(m.rows == 1);
  CHECK(m.cols == 3);
  CHECK(m.a == std::vector<double>{0, 1, 0});
}

TEST_CASE("encode_input passes binary probabilities through unchanged") {
  ReconstructedFeatures f;
  f.mode = FeatureMode::kBinaryProbability;
  f.num_nodes = 1;
  f.num_columns = 2;
  f.domains = {2, 2};
  f.probabilities = {0.3, 0.9};
  const Matrix m = encode_input(f);
  CHECK(m.rows == 1);
  CHECK(m.cols == 2);
  CHECK(m.a[0] == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(m.a[1] == doctest::Approx(0.9).epsilon(1e-12));
}

TEST_CASE("encode_input one-hot encodes argmax features") {
  ReconstructedFeatures f;
  f.mode = FeatureMode::kArgmax;
  f.num_nodes = 2;
  f.num_columns = 1;
  f.domains = {3};
  f.values = {3, 1};
  const Matrix m = encode_input(f);
  CHECK(m.rows == 2);
  CHECK(m.cols == 3);
  CHECK(m.a == std::vector<double>{0, 0, 1, 1, 0, 0});
}

TEST_CASE("init_params shapes, Glorot bounds, zero biases, determinism") {
  Rng rng = derive_rng(7, 0, "init");
  const ModelParams p = init_params(5, 8, 3, rng);
  CHECK(p.input_dim == 5);
  CHECK(p.hidden_dim == 8);
  CHECK(p.num_classes == 3);
  CHECK(p.w1.rows == 10);
  CHECK(p.w1.cols == 8);
  CHECK(p.w2.rows == 16);
  CHECK(p.w2.cols == 3);
  CHECK(p.b1.size() == 8);
  CHECK(p.b2.size() == 3);
  for (double b : p.b1) CHECK(b == 0.0);
  for (double b : p.b2) CHECK(b == 0.0);

  const double lim1 = std::sqrt(6.0 / (10 + 8));
  const double lim2 = std::sqrt(6.0 / (16 + 3));
  double max_abs1 = 0.0;
  for (double w : p.w1.a) max_abs1 = std::max(max_abs1, std::abs(w));
  CHECK(max_abs1 <= lim1);
  CHECK(max_abs1 > 0.25 * lim1);  // not degenerate
  for (double w : p.w2.a) CHECK(std::abs(w) <= lim2);

  Rng rng2 = derive_rng(7, 0, "init");
  const ModelParams q = init_params(5, 8, 3, rng2);
  CHECK(p.w1.a == q.w1.a);
  CHECK(p.w2.a == q.w2.a);
}

TEST_CASE("forward with zero weights yields uniform rows") {
  const Graph g = path3();
  const Matrix inputs = random_inputs(3, 4, 11);
  ModelParams p;
  p.input_dim = 4;
  p.hidden_dim = 5;
  p.num_classes = 4;
  p.w1 = Matrix(8, 5);
  p.b1.assign(5, 0.0);
  p.w2 = Matrix(10, 4);
  p.b2.assign(4, 0.0);
  const ForwardState st = forward(p, g, inputs, false, 0.0, nullptr);
  CHECK(st.probs.rows == 3);
  CHECK(st.probs.cols == 4);
  for (double v : st.probs.a) CHECK(v == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("forward softmax rows sum to one and eval mode is deterministic") {
  const Graph g = path3();
  const Matrix inputs = random_inputs(3, 4, 13);
  Rng rng = derive_rng(13, 1, "init");
  const ModelParams p = init_params(4, 6, 3, rng);
  const ForwardState a = forward(p, g, inputs, false, 0.0, nullptr);
  const ForwardState b = forward(p, g, inputs, false, 0.5, nullptr);
  for (std::size_t r = 0; r < a.probs.rows; ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < a.probs.cols; ++c) s += a.probs.at(r, c);
    CHECK(s == doctest::Approx(1.0).epsilon(1e-9));
  }
  CHECK(a.probs.a == b.probs.a);  // dropout rate is ignored in eval mode
  CHECK(a.mask0.empty());
  CHECK(a.mask1.empty());
}

TEST_CASE("forward neighbor half of the aggregate is zero for isolated nodes") {
  const Graph g = isolated(2);
  const Matrix inputs = random_inputs(2, 3, 17);
  Rng rng = derive_rng(17, 1, "init");
  const ModelParams p = init_params(3, 4, 2, rng);
  const ForwardState st = forward(p, g, inputs, false, 0.0, nullptr);
  CHECK(st.a1.cols == 6);
  for (std::size_t r = 0; r < 2; ++r) {
    for (std::size_t c = 0; c < 3; ++c) {
      CHECK(st.a1.at(r, c) == inputs.at(r, c));
      CHECK(st.a1.at(r, 3 + c) == 0.0);
    }
  }
}

TEST_CASE("training-mode dropout masks are inverted and rate zero matches eval") {
  const Graph g = path3();
  const Matrix inputs = random_inputs(3, 4, 19);
  Rng init_rng = derive_rng(19, 1, "init");
  const ModelParams p = init_params(4, 6, 3, init_rng);

  Rng drop_rng = derive_rng(19, 2, "dropout");
  const ForwardState tr = forward(p, g, inputs, true, 0.5, &drop_rng);
  CHECK(tr.mask0.size() == inputs.a.size());
  CHECK(tr.mask1.size() == 3 * 6);
  bool saw_zero = false;
  for (double v : tr.mask0) {
    const bool valid = v == 0.0 || v == doctest::Approx(2.0).epsilon(1e-12);
    CHECK(valid);
    if (v == 0.0) saw_zero = true;
  }
  CHECK(saw_zero);

  Rng drop_rng2 = derive_rng(19, 3, "dropout");
  const ForwardState tr0 = forward(p, g, inputs, true, 0.0, &drop_rng2);
  const ForwardState ev = forward(p, g, inputs, false, 0.0, nullptr);
  CHECK(tr0.probs.a == ev.probs.a);
}

TEST_CASE("loss_gnn frozen values") {
  ReconstructedLabels labels;
  labels.num_classes = 2;
  labels.labeled_nodes = {0, 1};
  labels.classes = {0, 0};
  labels.masses = {1.0, 1.0};
  const std::vector<std::uint32_t> both = {0, 1};

  Matrix perfect(2, 2);
  perfect.at(0, 0) = 1.0;
  perfect.at(1, 0) = 1.0;
  CHECK(std::abs(loss_gnn(perfect, labels, both)) <= 1e-7);

  Matrix uniform4(1, 4);
  for (double& v : uniform4.a) v = 0.25;
  ReconstructedLabels l4;
  l4.num_classes = 4;
  l4.labeled_nodes = {0};
  l4.classes = {2};
  l4.masses = {1.0};
  const std::vector<std::uint32_t> one = {0};
  CHECK(loss_gnn(uniform4, l4, one) ==
        doctest::Approx(std::log(4.0)).epsilon(1e-4));

  Matrix mixed(2, 2);
  mixed.at(0, 0) = 0.5;
  mixed.at(0, 1) = 0.5;
  mixed.at(1, 0) = 1.0;
  CHECK(loss_gnn(mixed, labels, both) == doctest::Approx(0.34657).epsilon(1e-3));

  CHECK_THROWS_AS(loss_gnn(mixed, labels, std::vector<std::uint32_t>{}),
                  std::invalid_argument);
  ReconstructedLabels missing;  // node 1 unlabeled
  missing.num_classes = 2;
  missing.labeled_nodes = {0};
  missing.classes = {0};
  missing.masses = {1.0};
  CHECK_THROWS_AS(loss_gnn(mixed, missing, both), std::invalid_argument);
}

TEST_CASE("loss_llp frozen KL value and zero at agreement") {
  Predictions preds;
  preds.bag_means = Matrix(1, 2);
  preds.bag_means.at(0, 0) = 0.75;
  preds.bag_means.at(0, 1) = 0.25;
  preds.bag_included = {true};

  BagProportions bags;
  bags.num_classes = 2;
  bags.num_clusters = 1;
  bags.observed = {0.5, 0.5};
  bags.reconstructed = {0.5, 0.5};
  bags.labeled_counts = {4};
  bags.included = {true};

  const double kl = 0.75 * std::log(0.75 / 0.5) + 0.25 * std::log(0.25 / 0.5);
  CHECK(loss_llp(preds, bags) == doctest::Approx(kl).epsilon(1e-4));
  CHECK(loss_llp(preds, bags) == doctest::Approx(0.130812).epsilon(1e-3));

  bags.reconstructed = {0.75, 0.25};
  CHECK(std::abs(loss_llp(preds, bags)) <= 1e-7);

  bags.included = {false};
  CHECK(loss_llp(preds, bags) == 0.0);
}

TEST_CASE("fill_bag_means averages labeled members and flags empty bags") {
  Matrix probs(3, 2);
  probs.at(0, 0) = 0.9;
  probs.at(0, 1) = 0.1;
  probs.at(1, 0) = 0.5;
  probs.at(1, 1) = 0.5;
  probs.at(2, 0) = 0.2;
  probs.at(2, 1) = 0.8;
  ClusterAssignment clusters;
  clusters.num_clusters = 2;
  clusters.cluster_of = {0, 0, 1};
  const std::vector<std::uint32_t> labeled = {0, 1};  // node 2 unlabeled
  Predictions preds;
  fill_bag_means(probs, clusters, labeled, &preds);
  CHECK(preds.bag_included[0]);
  CHECK_FALSE(preds.bag_included[1]);
  CHECK(preds.bag_means.at(0, 0) == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(preds.bag_means.at(0, 1) == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("alpha zero gradient is bitwise the pure cross-entropy gradient") {
  const Graph g = path3();
  const Matrix inputs = random_inputs(3, 4, 23);
  Rng rng = derive_rng(23, 1, "init");
  const ModelParams p = init_params(4, 5, 3, rng);
  const ForwardState st = forward(p, g, inputs, false, 0.0, nullptr);

  ReconstructedLabels labels;
  labels.num_classes = 3;
  labels.labeled_nodes = {0, 2};
  labels.classes = {1, 2};
  labels.masses = {1.0, 1.0};
  const std::vector<std::uint32_t> train = {0, 2};

  ClusterAssignment clusters;
  clusters.num_clusters = 1;
  clusters.cluster_of = {0, 0, 0};
  BagProportions bags;
  bags.num_classes = 3;
  bags.num_clusters = 1;
  bags.observed = {0.4, 0.3, 0.3};
  bags.reconstructed = {0.4, 0.3, 0.3};
  bags.labeled_counts = {2};
  bags.included = {true};
  Predictions preds;
  preds.probs = st.probs;
  fill_bag_means(st.probs, clusters, labels.labeled_nodes, &preds);

  const Matrix with_llp_off =
      loss_gradient(st, labels, train, 0.0, &preds, &bags, &clusters);
  const Matrix ce_only = loss_gradient(st, labels, train, 0.0, nullptr, nullptr, nullptr);
  CHECK(with_llp_off.a == ce_only.a);
}

TEST_CASE("finite differences confirm analytic gradients, LLP path included") {
  const Graph g = Graph::from_edges(
      6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {0, 5}, {1, 4}});
  const Matrix inputs = random_inputs(6, 4, 29);
  const LlpFixture f = make_llp_fixture();
  const double alpha = 0.7;
  const double h = 1e-6;

  std::size_t worst_idx = 0;
  double worst_rel = 0.0;
  for (std::uint64_t draw = 0; draw < 10; ++draw) {
    Rng rng = derive_rng(31, draw, "gradcheck-init");
    ModelParams params = init_params(4, 4, 3, rng);
    const Gradients grads = analytic_gradients(params, g, inputs, f, alpha);
    const std::size_t n = param_count(params);
    CHECK(n == 4 * 2 * 4 + 4 + 4 * 2 * 3 + 3);
    for (std::size_t i = 0; i < n; ++i) {
      double* coord = param_coord(params, i);
      const double keep = *coord;
      *coord = keep + h;
      const double up = total_loss(params, g, inputs, f, alpha);
      *coord = keep - h;
      const double down = total_loss(params, g, inputs, f, alpha);
      *coord = keep;
      const double numeric = (up - down) / (2.0 * h);
      const double analytic = grad_coord(grads, i);
      const double rel = std::abs(analytic - numeric) /
                         std::max(std::abs(analytic) + std::abs(numeric), 1e-8);
      if (rel > worst_rel) {
        worst_rel = rel;
        worst_idx = i;
      }
    }
  }
  INFO("worst coordinate ", worst_idx);
  CHECK(worst_rel <= 1e-4);
}

TEST_CASE("finite differences also hold with the regularizer disabled") {
  const Graph g = path3();
  const Matrix inputs = random_inputs(3, 4, 37);
  LlpFixture f = make_llp_fixture();
  f.labels.labeled_nodes = {0, 1, 2};
  f.labels.classes = {0, 1, 2};
  f.labels.masses = {1.0, 1.0, 1.0};
  f.train_nodes = {0, 1, 2};
  f.clusters.cluster_of = {0, 0, 1};
  f.bags.labeled_counts = {2, 1};
  const double h = 1e-6;

  Rng rng = derive_rng(41, 0, "gradcheck-init");
  ModelParams params = init_params(4, 4, 3, rng);
  const ForwardState st = forward(params, g, inputs, false, 0.0, nullptr);
  const Matrix dprobs =
      loss_gradient(st, f.labels, f.train_nodes, 0.0, nullptr, nullptr, nullptr);
  const Gradients grads = backward(params, g, inputs, st, dprobs);
  for (std::size_t i = 0; i < param_count(params); ++i) {
    double* coord = param_coord(params, i);
    const double keep = *coord;
    *coord = keep + h;
    const double up = total_loss(params, g, inputs, f, 0.0);
    *coord = keep - h;
    const double down = total_loss(params, g, inputs, f, 0.0);
    *coord = keep;
    const double numeric = (up - down) / (2.0 * h);
    const double analytic = grad_coord(grads, i);
    const double rel = std::abs(analytic - numeric) /
                       std::max(std::abs(analytic) + std::abs(numeric), 1e-8);
    CHECK(rel <= 1e-4);
  }
}

TEST_CASE("saturated correct predictions give near-zero loss and gradient") {
  const Graph g = isolated(2);
  Matrix inputs(2, 2);
  inputs.at(0, 0) = 1.0;
  inputs.at(1, 1) = 1.0;

  ModelParams p;
  p.input_dim = 2;
  p.hidden_dim = 2;
  p.num_classes = 2;
  p.w1 = Matrix(4, 2);
  p.w1.at(0, 0) = 50.0;
  p.w1.at(1, 1) = 50.0;
  p.b1.assign(2, 0.0);
  p.w2 = Matrix(4, 2);
  p.w2.at(0, 0) = 50.0;
  p.w2.at(1, 1) = 50.0;
  p.b2.assign(2, 0.0);

  ReconstructedLabels labels;
  labels.num_classes = 2;
  labels.labeled_nodes = {0, 1};
  labels.classes = {0, 1};
  labels.masses = {1.0, 1.0};
  const std::vector<std::uint32_t> train = {0, 1};

  const ForwardState st = forward(p, g, inputs, false, 0.0, nullptr);
  CHECK(st.probs.at(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(st.probs.at(1, 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(loss_gnn(st.probs, labels, train)) <= 1e-7);

  const Matrix dprobs = loss_gradient(st, labels, train, 0.0, nullptr, nullptr, nullptr);
  const Gradients grads = backward(p, g, inputs, st, dprobs);
  CHECK(grad_norm(grads) <= 1e-5);

  LabelData truth;
  truth.num_classes = 2;
  truth.labeled_nodes = {0, 1};
  truth.classes = {0, 1};
  CHECK(evaluate(p, g, inputs, truth, train) == 1.0);
  LabelData flipped;
  flipped.num_classes = 2;
  flipped.labeled_nodes = {0, 1};
  flipped.classes = {1, 0};
  CHECK(evaluate(p, g, inputs, flipped, train) == 0.0);
}

TEST_CASE("adam_step with zero gradients keeps parameters unchanged") {
  Rng rng = derive_rng(43, 0, "init");
  ModelParams p = init_params(3, 4, 2, rng);
  const ModelParams before = p;
  Gradients zero;
  zero.dw1 = Matrix(p.w1.rows, p.w1.cols);
  zero.db1.assign(p.b1.size(), 0.0);
  zero.dw2 = Matrix(p.w2.rows, p.w2.cols);
  zero.db2.assign(p.b2.size(), 0.0);
  AdamState state = make_adam_state(p);
  adam_step(&p, zero, &state, 0.01, 0.9, 0.999, 1e-8);
  adam_step(&p, zero, &state, 0.01, 0.9, 0.999, 1e-8);
  CHECK(p.w1.a == before.w1.a);
  CHECK(p.b1 == before.b1);
  CHECK(p.w2.a == before.w2.a);
  CHECK(p.b2 == before.b2);
  CHECK(state.step == 2);
}

TEST_CASE("adam_step first update moves each coordinate by about the rate") {
  Rng rng = derive_rng(47, 0, "init");
  ModelParams p = init_params(3, 4, 2, rng);
  const ModelParams before = p;
  Gradients g;
  g.dw1 = Matrix(p.w1.rows, p.w1.cols);
  for (double& v : g.dw1.a) v = 0.3;
  g.db1.assign(p.b1.size(), -0.7);
  g.dw2 = Matrix(p.w2.rows, p.w2.cols);
  for (double& v : g.dw2.a) v = 1.4;
  g.db2.assign(p.b2.size(), 0.9);
  AdamState state = make_adam_state(p);
  adam_step(&p, g, &state, 0.01, 0.9, 0.999, 1e-8);
  // After bias correction, step one is lr * g / (|g| + eps') ~= +-lr.
  for (std::size_t i = 0; i < p.w1.a.size(); ++i)
    CHECK(before.w1.a[i] - p.w1.a[i] == doctest::Approx(0.01).epsilon(1e-4));
  for (std::size_t i = 0; i < p.b1.size(); ++i)
    CHECK(before.b1[i] - p.b1[i] == doctest::Approx(-0.01).epsilon(1e-4));
}

TEST_CASE("training overfits a fully labeled easy task") {
  SynthParams sp;
  sp.num_nodes = 20;
  sp.num_classes = 2;
  sp.num_columns = 6;
  sp.domain = 2;
  sp.label_rate = 1.0;
  sp.p_in = 0.5;
  sp.p_out = 0.05;
  sp.feature_skew = 0.9;
  const CleanTask t = make_clean_task(sp, 5);

  std::vector<std::uint32_t> all(20);
  for (std::uint32_t v = 0; v < 20; ++v) all[v] = v;
  NodeSplit split;
  split.train = all;
  split.val = all;
  split.test = all;

  TrainConfig cfg;
  cfg.alpha = 0.0;
  cfg.learning_rate = 0.01;
  cfg.epochs = 200;
  cfg.dropout = 0.0;
  cfg.hidden = 16;
  cfg.seed = 9;
  const TrainResult res =
      train(cfg, t.data.graph, t.features, t.labels, nullptr, nullptr, split);
  const Matrix inputs = encode_input(t.features);
  const double acc = evaluate(res.params, t.data.graph, inputs, t.data.labels, all);
  CHECK(acc == 1.0);
  CHECK(res.best_val_accuracy == 1.0);
}

TEST_CASE("training loss decreases on a clean task") {
  SynthParams sp;
  sp.num_nodes = 60;
  sp.num_classes = 3;
  sp.num_columns = 8;
  sp.domain = 2;
  sp.label_rate = 1.0;
  sp.p_in = 0.2;
  sp.p_out = 0.02;
  sp.feature_skew = 0.85;
  const CleanTask t = make_clean_task(sp, 15);
  Rng split_rng = derive_rng(15, 9, "split");
  const NodeSplit split = make_node_split(60, 0.5, 0.25, split_rng);

  TrainConfig cfg;
  cfg.alpha = 0.0;
  cfg.learning_rate = 0.01;
  cfg.epochs = 30;
  cfg.dropout = 0.0;
  cfg.hidden = 16;
  cfg.seed = 3;
  const TrainResult res =
      train(cfg, t.data.graph, t.features, t.labels, nullptr, nullptr, split);
  REQUIRE(res.history.size() == 30);
  int drops = 0;
  for (std::size_t e = 1; e <= 10; ++e)
    if (res.history[e].total_loss < res.history[e - 1].total_loss) ++drops;
  CHECK(drops >= 7);
  CHECK(res.history[10].total_loss < res.history[0].total_loss);
  for (const EpochMetrics& em : res.history) {
    CHECK(em.llp_loss == 0.0);
    CHECK(em.total_loss == em.gnn_loss);
    CHECK_FALSE(em.test_accuracy.has_value());
  }
}

TEST_CASE("training is deterministic and thread-count invariant") {
  SynthParams sp;
  sp.num_nodes = 40;
  sp.num_classes = 2;
  sp.num_columns = 5;
  sp.domain = 2;
  sp.label_rate = 1.0;
  sp.p_in = 0.3;
  sp.p_out = 0.03;
  sp.feature_skew = 0.8;
  const CleanTask t = make_clean_task(sp, 21);
  Rng split_rng = derive_rng(21, 9, "split");
  const NodeSplit split = make_node_split(40, 0.5, 0.25, split_rng);

  TrainConfig cfg;
  cfg.alpha = 0.0;
  cfg.learning_rate = 0.02;
  cfg.epochs = 12;
  cfg.dropout = 0.5;
  cfg.hidden = 8;
  cfg.seed = 77;

  const TrainResult a =
      train(cfg, t.data.graph, t.features, t.labels, nullptr, nullptr, split);
  const TrainResult b =
      train(cfg, t.data.graph, t.features, t.labels, nullptr, nullptr, split);
  REQUIRE(a.history.size() == b.history.size());
  for (std::size_t e = 0; e < a.history.size(); ++e)
    CHECK(a.history[e].total_loss == b.history[e].total_loss);
  CHECK(a.params.w1.a == b.params.w1.a);
  CHECK(a.best_epoch == b.best_epoch);

  REQUIRE(setenv("LDPGNN_THREADS", "4", 1) == 0);
  const TrainResult c =
      train(cfg, t.data.graph, t.features, t.labels, nullptr, nullptr, split);
  REQUIRE(unsetenv("LDPGNN_THREADS") == 0);
  for (std::size_t e = 0; e < a.history.size(); ++e)
    CHECK(a.history[e].total_loss == c.history[e].total_loss);
  CHECK(a.params.w1.a == c.params.w1.a);
  CHECK(a.params.w2.a == c.params.w2.a);
}

TEST_CASE("training reports divergence as an error") {
  SynthParams sp;
  sp.num_nodes = 20;
  sp.num_classes = 2;
  sp.num_columns = 4;
  sp.domain = 2;
  sp.label_rate = 1.0;
  const CleanTask t = make_clean_task(sp, 33);
  std::vector<std::uint32_t> all(20);
  for (std::uint32_t v = 0; v < 20; ++v) all[v] = v;
  NodeSplit split;
  split.train = all;
  split.val = all;
  split.test = all;

  TrainConfig cfg;
  cfg.alpha = 0.0;
  cfg.learning_rate = 1e308;
  cfg.epochs = 50;
  cfg.dropout = 0.0;
  cfg.hidden = 8;
  cfg.seed = 1;
  CHECK_THROWS_AS(
      train(cfg, t.data.graph, t.features, t.labels, nullptr, nullptr, split),
      std::runtime_error);
}

TEST_CASE("train rejects a split with no labeled training node") {
  SynthParams sp;
  sp.num_nodes = 10;
  sp.num_classes = 2;
  sp.num_columns = 3;
  sp.domain = 2;
  sp.label_rate = 0.3;
  const CleanTask t = make_clean_task(sp, 44);
  REQUIRE(t.labels.labeled_nodes.size() == 3);
  NodeSplit split;  // train on exactly the unlabeled complement
  for (std::uint32_t v = 0; v < 10; ++v)
    if (std::find(t.labels.labeled_nodes.begin(), t.labels.labeled_nodes.end(),
                  v) == t.labels.labeled_nodes.end())
      split.train.push_back(v);
  split.val = {0};
  split.test = {1};
  TrainConfig cfg;
  cfg.alpha = 0.0;
  cfg.epochs = 3;
  cfg.dropout = 0.0;
  cfg.hidden = 4;
  CHECK_THROWS_AS(
      train(cfg, t.data.graph, t.features, t.labels, nullptr, nullptr, split),
      std::invalid_argument);
}

TEST_CASE("evaluate matches the binomial rate for random predictions") {
  const std::size_t n = 10000;
  const Graph g = isolated(n);
  const Matrix inputs = random_inputs(n, 4, 51);
  Rng rng = derive_rng(51, 1, "init");
  const ModelParams p = init_params(4, 8, 4, rng);
  LabelData truth;
  truth.num_classes = 4;
  Rng label_rng = derive_rng(51, 2, "labels");
  for (std::uint32_t v = 0; v < n; ++v) {
    truth.labeled_nodes.push_back(v);
    truth.classes.push_back(static_cast<std::uint32_t>(label_rng.below(4)));
  }
  std::vector<std::uint32_t> all(n);
  for (std::uint32_t v = 0; v < n; ++v) all[v] = v;
  const double acc = evaluate(p, g, inputs, truth, all);
  CHECK(acc == doctest::Approx(0.25).epsilon(0.08));  // 3 sigma ~ 0.013 absolute
  CHECK(std::abs(acc - 0.25) < 0.02);
}

TEST_CASE("evaluate skips uncovered nodes and rejects an empty scoring set") {
  const Graph g = isolated(3);
  const Matrix inputs = random_inputs(3, 2, 53);
  Rng rng = derive_rng(53, 1, "init");
  const ModelParams p = init_params(2, 3, 2, rng);
  LabelData truth;
  truth.num_classes = 2;
  truth.labeled_nodes = {0};
  truth.classes = {0};
  const std::vector<std::uint32_t> uncovered = {1, 2};
  CHECK_THROWS_AS(evaluate(p, g, inputs, truth, uncovered), std::invalid_argument);
  const std::vector<std::uint32_t> mixed = {0, 1, 2};
  const double acc = evaluate(p, g, inputs, truth, mixed);
  const bool zero_or_one = acc == 0.0 || acc == 1.0;  // only node 0 scores
  CHECK(zero_or_one);
}

// The training interface cannot accept raw private data: substituting the
// true-data types for the reconstructed ones must fail to compile.
static_assert(std::is_invocable_v<decltype(train), const TrainConfig&, const Graph&,
                                  const ReconstructedFeatures&,
                                  const ReconstructedLabels&,
                                  const ClusterAssignment*, const BagProportions*,
                                  const NodeSplit&, const EvalHook&>);
static_assert(!std::is_invocable_v<decltype(train), const TrainConfig&, const Graph&,
                                   const CategoricalFeatures&,
                                   const ReconstructedLabels&,
                                   const ClusterAssignment*, const BagProportions*,
                                   const NodeSplit&, const EvalHook&>);
static_assert(!std::is_invocable_v<decltype(train), const TrainConfig&, const Graph&,
                                   const ReconstructedFeatures&, const LabelData&,
                                   const ClusterAssignment*, const BagProportions*,
                                   const NodeSplit&, const EvalHook&>);
static_assert(!std::is_invocable_v<decltype(loss_gnn), const Matrix&,
                                   const LabelData&,
                                   std::span<const std::uint32_t>>);
