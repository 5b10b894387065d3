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

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "ldpgnn/audit.hpp"
#include "ldpgnn/experiment.hpp"
#include "ldpgnn/freq_est.hpp"
#include "ldpgnn/gnn.hpp"
#include "ldpgnn/ldp.hpp"
#include "ldpgnn/partition.hpp"
#include "ldpgnn/reconstruct.hpp"
#include "ldpgnn/synth.hpp"

namespace {

using namespace ldpgnn;

SynthParams bench_params(std::size_t nodes, std::size_t columns) {
  SynthParams sp;
  sp.num_nodes = nodes;
  sp.num_classes = 4;
  sp.num_columns = columns;
  sp.domain = 2;
  sp.label_rate = 0.5;
  sp.p_in = 0.02;
  sp.p_out = 0.002;
  sp.feature_skew = 0.75;
  return sp;
}

const SynthData& bench_data() {
  static const SynthData data = synth_homophily_graph(bench_params(2000, 20), 1);
  return data;
}

void BM_PropagateMean(benchmark::State& state) {
  const SynthData& data = bench_data();
  const std::size_t width = 8;
  std::vector<double> signal(data.graph.num_nodes() * width);
  Rng rng = derive_rng(1, 0, "bench-signal");
  for (double& v : signal) v = rng.unit();
  const std::size_t hops = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    const PropagatedSignal out = propagate_mean(data.graph, signal, width, hops);
    benchmark::DoNotOptimize(out.values.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(data.graph.num_nodes()));
}
BENCHMARK(BM_PropagateMean)->Arg(1)->Arg(4)->Arg(8);

void BM_PerturbFeatures(benchmark::State& state) {
  const SynthData& data = bench_data();
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const PerturbedFeatures out =
        perturb_features(data.features, 10, 1.0, false, ++seed);
    benchmark::DoNotOptimize(out.values.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(data.features.num_nodes));
}
BENCHMARK(BM_PerturbFeatures);

void BM_FrequencyEstimate(benchmark::State& state) {
  const std::vector<double> observed = {0.55, 0.25, 0.12, 0.08};
  for (auto _ : state) {
    const FrequencyEstimate est =
        estimate_grr_fs(observed, 20, 10, 4, 0.6, 0.4 / 3.0, 100000);
    benchmark::DoNotOptimize(est.proportions.data());
  }
}
BENCHMARK(BM_FrequencyEstimate);

void BM_Partition(benchmark::State& state) {
  const SynthData& data = bench_data();
  const std::size_t clusters = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const ClusterAssignment out = partition(data.graph, clusters, ++seed);
    benchmark::DoNotOptimize(out.cluster_of.data());
  }
}
BENCHMARK(BM_Partition)->Arg(4)->Arg(16);

void BM_AuditPair(benchmark::State& state) {
  const std::vector<std::uint32_t> domains = {3, 3, 3};
  const std::vector<std::uint32_t> x = {1, 2, 3};
  const std::vector<std::uint32_t> xp = {2, 2, 3};
  for (auto _ : state) {
    const AuditReport rep = audit_pair(x, xp, domains, 2, 0.8);
    benchmark::DoNotOptimize(rep.max_ratio);
  }
}
BENCHMARK(BM_AuditPair);

void BM_TrainEpoch(benchmark::State& state) {
  static const SynthData data = synth_homophily_graph(bench_params(300, 10), 2);
  static const PerturbedFeatures px = perturb_features(data.features, 5, 1.0, false, 3);
  static const ReconstructedFeatures rx = reconstruct_features(data.graph, px, 2);
  static const PerturbedLabels py = perturb_labels(data.labels, 1.0, false, 4);
  static const ReconstructedLabels ry = reconstruct_labels(data.graph, py, 2);
  Rng split_rng = derive_rng(5, 0, "split");
  const NodeSplit split =
      make_node_split(data.graph.num_nodes(), 0.3, 0.2, split_rng);
  TrainConfig cfg;
  cfg.alpha = 0.0;
  cfg.epochs = 1;
  cfg.dropout = 0.5;
  cfg.hidden = 16;
  cfg.seed = 6;
  for (auto _ : state) {
    const TrainResult res =
        train(cfg, data.graph, rx, ry, nullptr, nullptr, split);
    benchmark::DoNotOptimize(res.best_val_accuracy);
  }
}
BENCHMARK(BM_TrainEpoch);

}  // namespace

BENCHMARK_MAIN();
