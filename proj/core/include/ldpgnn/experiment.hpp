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
// End-to-end pipeline orchestration: client-side perturbation, server-side
// reconstruction and training, harness-side scoring, grid sweeps over privacy
// budgets, and record summarization.  The per-run seed hashes the master seed
// with the numeric grid point and repeat index — never the variant — so
// variants at the same grid point share datasets, perturbations, partitions,
// and weight initialization, making ablation comparisons paired.

#ifndef LDPGNN_EXPERIMENT_HPP_
#define LDPGNN_EXPERIMENT_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ldpgnn/data.hpp"
#include "ldpgnn/gnn.hpp"
#include "ldpgnn/graph.hpp"
#include "ldpgnn/ldp.hpp"
#include "ldpgnn/synth.hpp"

namespace ldpgnn {

// Pipeline ablations.
//   rgnn            full method: reconstruct features + labels, LLP on
//   no-fx           perturbed features fed one-hot, no feature reconstruction
//   no-fy           perturbed labels used directly (bag proportions still
//                   reconstructed), no label reconstruction
//   no-llp          alpha forced to 0
//   noisy-baseline  perturbed features + labels fed raw, alpha forced to 0
enum class Variant { kRgnn, kNoFx, kNoFy, kNoLlp, kNoisyBaseline };

Variant variant_from_string(const std::string& name);
std::string to_string(Variant variant);
const std::vector<Variant>& all_variants();

std::uint64_t run_seed(std::uint64_t master_seed, double eps_x, double eps_y,
                       std::size_t hops, std::size_t clusters, double alpha,
                       std::size_t repeat);

struct RunOutcome {
  double test_accuracy = 0.0;  // best-validation model on split.test, true labels
  double val_accuracy = 0.0;   // best epoch, reconstructed labels
  std::size_t best_epoch = 0;
  BudgetReport budget;
  ModelParams params;  // the selected model
  std::vector<EpochMetrics> history;
};

// Runs one variant end to end.  True features/labels enter only the
// client-side perturbation calls and the final evaluate().  Set
// `with_test_curve` to also score the test split each epoch (slower;
// populates EpochMetrics::test_accuracy).  Throws on failure.
RunOutcome run_pipeline(const Graph& graph, const CategoricalFeatures& features,
                        const LabelData& labels, const NodeSplit& split,
                        const TrainConfig& config, Variant variant,
                        bool with_test_curve = false);

struct SweepConfig {
  std::uint64_t master_seed = 0;
  std::size_t repeats = 5;
  std::uint32_t m = 10;
  std::vector<double> eps_x{1.0};
  std::vector<double> eps_y{1.0};
  std::vector<std::size_t> hops{8};      // sets both propagation depths
  std::vector<std::size_t> clusters{16};
  std::vector<double> alpha{1.0};
  std::vector<Variant> variants = all_variants();
  // Dataset: synthesized per run unless dataset_dir points at saved files.
  SynthParams synth;
  std::string dataset_dir;
  double train_frac = 0.6;
  double val_frac = 0.2;
  // Trainer knobs shared across the grid.
  double learning_rate = 0.01;
  std::size_t epochs = 100;
  double dropout = 0.5;
  std::size_t hidden = 16;
  FeatureMode feature_mode = FeatureMode::kArgmax;
};

void to_json(nlohmann::json& j, const SweepConfig& config);
void from_json(const nlohmann::json& j, SweepConfig& config);
void to_json(nlohmann::json& j, const SynthParams& params);
void from_json(const nlohmann::json& j, SynthParams& params);
void to_json(nlohmann::json& j, const TrainConfig& config);
void from_json(const nlohmann::json& j, TrainConfig& config);

// Runs the full grid.  One JSON record per line goes to `records_out`
// (deterministic for a fixed config — no timestamps or timings); budget
// summaries and per-run failures go to `log_out`.  A failing run is recorded
// with ok=false and an error string; the sweep continues.
void run_sweep(const SweepConfig& config, std::ostream& records_out,
               std::ostream& log_out);

struct ReportRow {
  std::string variant;
  double eps_x = 0.0;
  double eps_y = 0.0;
  std::size_t runs = 0;    // successful runs aggregated
  std::size_t failed = 0;
  double mean_test_accuracy = 0.0;
  double stddev_test_accuracy = 0.0;  // sample (n-1) convention; 0 when n <= 1
};

std::vector<nlohmann::json> load_jsonl(std::istream& in);

// Groups records by (variant, eps_x, eps_y), sorted by that key.
std::vector<ReportRow> summarize_records(const std::vector<nlohmann::json>& records);

void write_report(const std::vector<ReportRow>& rows, std::ostream& out);

// Sample standard deviation (n-1 denominator); 0 for n <= 1.
double sample_stddev(const std::vector<double>& values);

}  // namespace ldpgnn

#endif  // LDPGNN_EXPERIMENT_HPP_
