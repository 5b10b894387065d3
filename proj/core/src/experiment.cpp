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

#include "ldpgnn/experiment.hpp"

#include <bit>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <istream>
#include <iterator>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>
#include <tuple>

#include "ldpgnn/io.hpp"
#include "ldpgnn/partition.hpp"
#include "ldpgnn/reconstruct.hpp"

namespace ldpgnn {

namespace {

constexpr const char* kVariantNames[] = {"rgnn", "no-fx", "no-fy", "no-llp",
                                         "noisy-baseline"};

std::string format_line(const char* fmt, ...)
    __attribute__((format(printf, 1, 2)));

std::string format_line(const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  return std::string(buf);
}

FeatureMode feature_mode_from_string(const std::string& name) {
  if (name == "argmax") return FeatureMode::kArgmax;
  if (name == "binary-probability") return FeatureMode::kBinaryProbability;
  throw std::invalid_argument("unknown feature mode: " + name);
}

std::string to_string(FeatureMode mode) {
  return mode == FeatureMode::kArgmax ? "argmax" : "binary-probability";
}

}  // namespace

Variant variant_from_string(const std::string& name) {
  for (std::size_t i = 0; i < std::size(kVariantNames); ++i)
    if (name == kVariantNames[i]) return static_cast<Variant>(i);
  throw std::invalid_argument("unknown variant: " + name);
}

std::string to_string(Variant variant) {
  return kVariantNames[static_cast<std::size_t>(variant)];
}

const std::vector<Variant>& all_variants() {
  static const std::vector<Variant> kAll = {
      Variant::kRgnn, Variant::kNoFx, Variant::kNoFy, Variant::kNoLlp,
      Variant::kNoisyBaseline};
  return kAll;
}

std::uint64_t run_seed(std::uint64_t master_seed, double eps_x, double eps_y,
                       std::size_t hops, std::size_t clusters, double alpha,
                       std::size_t repeat) {
  std::uint64_t h = master_seed;
  h = hash_u64(h, std::bit_cast<std::uint64_t>(eps_x));
  h = hash_u64(h, std::bit_cast<std::uint64_t>(eps_y));
  h = hash_u64(h, static_cast<std::uint64_t>(hops));
  h = hash_u64(h, static_cast<std::uint64_t>(clusters));
  h = hash_u64(h, std::bit_cast<std::uint64_t>(alpha));
  h = hash_u64(h, static_cast<std::uint64_t>(repeat));
  return h;
}

RunOutcome run_pipeline(const Graph& graph, const CategoricalFeatures& features,
                        const LabelData& labels, const NodeSplit& split,
                        const TrainConfig& config, Variant variant,
                        bool with_test_curve) {
  if (features.num_nodes != graph.num_nodes())
    throw std::invalid_argument("run_pipeline: feature rows != graph nodes");
  features.validate();
  labels.validate(graph.num_nodes());

  const bool recon_x =
      variant != Variant::kNoFx && variant != Variant::kNoisyBaseline;
  const bool recon_y =
      variant != Variant::kNoFy && variant != Variant::kNoisyBaseline;
  TrainConfig cfg = config;
  if (variant == Variant::kNoLlp || variant == Variant::kNoisyBaseline)
    cfg.alpha = 0.0;

  RunOutcome out;
  if (!cfg.bypass_features && !cfg.bypass_labels) {
    out.budget =
        make_budget_report(cfg.eps_x, cfg.m, features.num_columns, cfg.eps_y);
  } else {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    out.budget.m = cfg.m;
    out.budget.d = features.num_columns;
    out.budget.eps_x = cfg.bypass_features ? kInf : cfg.eps_x;
    out.budget.eps_feature_total =
        cfg.bypass_features ? kInf
                            : amplified_budget(cfg.eps_x, cfg.m, features.num_columns);
    out.budget.eps_y = cfg.bypass_labels ? kInf : cfg.eps_y;
    out.budget.eps_total = kInf;
  }

  // Client side.
  const PerturbedFeatures perturbed_x =
      perturb_features(features, cfg.m, cfg.eps_x, cfg.bypass_features, cfg.seed);
  const PerturbedLabels perturbed_y =
      perturb_labels(labels, cfg.eps_y, cfg.bypass_labels, cfg.seed);

  // Server side.
  const bool use_llp = cfg.alpha > 0.0;
  ClusterAssignment clusters;
  BagProportions bags;
  if (use_llp) {
    clusters = partition(graph, cfg.clusters, cfg.seed);
    const TransitionMatrix channel =
        perturbed_y.bypass
            ? TransitionMatrix::identity(perturbed_y.num_classes)
            : TransitionMatrix::grr(perturbed_y.num_classes, perturbed_y.eps_y);
    bags = reconstruct_bag_proportions(perturbed_y, clusters, channel);
  }

  ReconstructedFeatures rx;
  if (recon_x) {
    rx = reconstruct_features(graph, perturbed_x, cfg.k_x, cfg.feature_mode,
                              cfg.binary_convention);
  } else {
    rx.mode = FeatureMode::kArgmax;
    rx.num_nodes = perturbed_x.num_nodes;
    rx.num_columns = perturbed_x.num_columns;
    rx.domains = perturbed_x.domains;
    rx.values = perturbed_x.values;
  }
  ReconstructedLabels ry;
  if (recon_y) {
    ry = reconstruct_labels(graph, perturbed_y, cfg.k_y);
  } else {
    ry.num_classes = perturbed_y.num_classes;
    ry.labeled_nodes = perturbed_y.labeled_nodes;
    ry.classes = perturbed_y.classes;
    ry.masses.assign(perturbed_y.labeled_nodes.size(), 1.0);
  }

  const Matrix inputs = encode_input(rx);
  EvalHook hook;
  if (with_test_curve) {
    hook = [&](const ModelParams& params, std::size_t) {
      return evaluate(params, graph, inputs, labels, split.test);
    };
  }
  const TrainResult result =
      train(cfg, graph, rx, ry, use_llp ? &clusters : nullptr,
            use_llp ? &bags : nullptr, split, hook);

  // Harness-side scoring against the true labels.
  out.test_accuracy = evaluate(result.params, graph, inputs, labels, split.test);
  out.val_accuracy = result.best_val_accuracy;
  out.best_epoch = result.best_epoch;
  out.params = result.params;
  out.history = result.history;
  return out;
}

void to_json(nlohmann::json& j, const SynthParams& params) {
  j = nlohmann::json{{"num_nodes", params.num_nodes},
                     {"num_classes", params.num_classes},
                     {"num_columns", params.num_columns},
                     {"domain", params.domain},
                     {"p_in", params.p_in},
                     {"p_out", params.p_out},
                     {"feature_skew", params.feature_skew},
                     {"label_rate", params.label_rate}};
}

void from_json(const nlohmann::json& j, SynthParams& params) {
  const SynthParams defaults;
  params.num_nodes = j.value("num_nodes", defaults.num_nodes);
  params.num_classes = j.value("num_classes", defaults.num_classes);
  params.num_columns = j.value("num_columns", defaults.num_columns);
  params.domain = j.value("domain", defaults.domain);
  params.p_in = j.value("p_in", defaults.p_in);
  params.p_out = j.value("p_out", defaults.p_out);
  params.feature_skew = j.value("feature_skew", defaults.feature_skew);
  params.label_rate = j.value("label_rate", defaults.label_rate);
}

void to_json(nlohmann::json& j, const TrainConfig& config) {
  j = nlohmann::json{
      {"eps_x", config.eps_x},
      {"eps_y", config.eps_y},
      {"m", config.m},
      {"k_x", config.k_x},
      {"k_y", config.k_y},
      {"clusters", config.clusters},
      {"alpha", config.alpha},
      {"learning_rate", config.learning_rate},
      {"epochs", config.epochs},
      {"dropout", config.dropout},
      {"hidden", config.hidden},
      {"seed", config.seed},
      {"feature_mode", to_string(config.feature_mode)},
      {"binary_convention",
       config.binary_convention == BinaryProbConvention::kSecondCategory
           ? "second-category"
           : "first-category"},
      {"bypass_features", config.bypass_features},
      {"bypass_labels", config.bypass_labels},
      {"adam_beta1", config.adam_beta1},
      {"adam_beta2", config.adam_beta2},
      {"adam_eps", config.adam_eps}};
}

void from_json(const nlohmann::json& j, TrainConfig& config) {
  const TrainConfig defaults;
  config.eps_x = j.value("eps_x", defaults.eps_x);
  config.eps_y = j.value("eps_y", defaults.eps_y);
  config.m = j.value("m", defaults.m);
  config.k_x = j.value("k_x", defaults.k_x);
  config.k_y = j.value("k_y", defaults.k_y);
  config.clusters = j.value("clusters", defaults.clusters);
  config.alpha = j.value("alpha", defaults.alpha);
  config.learning_rate = j.value("learning_rate", defaults.learning_rate);
  config.epochs = j.value("epochs", defaults.epochs);
  config.dropout = j.value("dropout", defaults.dropout);
  config.hidden = j.value("hidden", defaults.hidden);
  config.seed = j.value("seed", defaults.seed);
  config.feature_mode = feature_mode_from_string(
      j.value("feature_mode", to_string(defaults.feature_mode)));
  const std::string convention = j.value("binary_convention", "second-category");
  if (convention == "second-category")
    config.binary_convention = BinaryProbConvention::kSecondCategory;
  else if (convention == "first-category")
    config.binary_convention = BinaryProbConvention::kFirstCategory;
  else
    throw std::invalid_argument("unknown binary convention: " + convention);
  config.bypass_features = j.value("bypass_features", defaults.bypass_features);
  config.bypass_labels = j.value("bypass_labels", defaults.bypass_labels);
  config.adam_beta1 = j.value("adam_beta1", defaults.adam_beta1);
  config.adam_beta2 = j.value("adam_beta2", defaults.adam_beta2);
  config.adam_eps = j.value("adam_eps", defaults.adam_eps);
}

void to_json(nlohmann::json& j, const SweepConfig& config) {
  std::vector<std::string> variant_names;
  for (const Variant v : config.variants) variant_names.push_back(to_string(v));
  j = nlohmann::json{{"master_seed", config.master_seed},
                     {"repeats", config.repeats},
                     {"m", config.m},
                     {"eps_x", config.eps_x},
                     {"eps_y", config.eps_y},
                     {"hops", config.hops},
                     {"clusters", config.clusters},
                     {"alpha", config.alpha},
                     {"variants", variant_names},
                     {"synth", config.synth},
                     {"dataset_dir", config.dataset_dir},
                     {"train_frac", config.train_frac},
                     {"val_frac", config.val_frac},
                     {"learning_rate", config.learning_rate},
                     {"epochs", config.epochs},
                     {"dropout", config.dropout},
                     {"hidden", config.hidden},
                     {"feature_mode", to_string(config.feature_mode)}};
}

void from_json(const nlohmann::json& j, SweepConfig& config) {
  const SweepConfig defaults;
  config.master_seed = j.value("master_seed", defaults.master_seed);
  config.repeats = j.value("repeats", defaults.repeats);
  config.m = j.value("m", defaults.m);
  config.eps_x = j.value("eps_x", defaults.eps_x);
  config.eps_y = j.value("eps_y", defaults.eps_y);
  config.hops = j.value("hops", defaults.hops);
  config.clusters = j.value("clusters", defaults.clusters);
  config.alpha = j.value("alpha", defaults.alpha);
  if (j.contains("variants")) {
    config.variants.clear();
    for (const auto& name : j.at("variants"))
      config.variants.push_back(variant_from_string(name.get<std::string>()));
  } else {
    config.variants = defaults.variants;
  }
  if (j.contains("synth")) j.at("synth").get_to(config.synth);
  config.dataset_dir = j.value("dataset_dir", defaults.dataset_dir);
  config.train_frac = j.value("train_frac", defaults.train_frac);
  config.val_frac = j.value("val_frac", defaults.val_frac);
  config.learning_rate = j.value("learning_rate", defaults.learning_rate);
  config.epochs = j.value("epochs", defaults.epochs);
  config.dropout = j.value("dropout", defaults.dropout);
  config.hidden = j.value("hidden", defaults.hidden);
  config.feature_mode = feature_mode_from_string(
      j.value("feature_mode", to_string(defaults.feature_mode)));
}

void run_sweep(const SweepConfig& config, std::ostream& records_out,
               std::ostream& log_out) {
  if (config.repeats == 0) throw std::invalid_argument("run_sweep: repeats == 0");
  if (config.variants.empty())
    throw std::invalid_argument("run_sweep: no variants");

  Dataset loaded;
  const bool use_loaded = !config.dataset_dir.empty();
  if (use_loaded) loaded = load_dataset(config.dataset_dir);
  const std::size_t d =
      use_loaded ? loaded.features.num_columns : config.synth.num_columns;

  for (const double ex : config.eps_x) {
    for (const double ey : config.eps_y) {
      for (const std::size_t hops : config.hops) {
        for (const std::size_t num_clusters : config.clusters) {
          for (const double alpha : config.alpha) {
            const BudgetReport budget = make_budget_report(ex, config.m, d, ey);
            log_out << format_line(
                "budget eps_x=%.6g m=%u d=%zu eps_feature_total=%.6g "
                "eps_y=%.6g eps_total=%.6g hops=%zu clusters=%zu alpha=%.6g\n",
                budget.eps_x, budget.m, budget.d, budget.eps_feature_total,
                budget.eps_y, budget.eps_total, hops, num_clusters, alpha);
            for (std::size_t repeat = 0; repeat < config.repeats; ++repeat) {
              const std::uint64_t seed = run_seed(config.master_seed, ex, ey,
                                                  hops, num_clusters, alpha, repeat);
              SynthData synth;
              const Graph* graph = nullptr;
              const CategoricalFeatures* features = nullptr;
              const LabelData* labels = nullptr;
              NodeSplit split;
              if (use_loaded) {
                graph = &loaded.graph;
                features = &loaded.features;
                labels = &loaded.labels;
                if (loaded.split.train.empty()) {
                  Rng split_rng = derive_rng(seed, 0, "split");
                  split = make_node_split(graph->num_nodes(), config.train_frac,
                                          config.val_frac, split_rng);
                } else {
                  split = loaded.split;
                }
              } else {
                synth = synth_homophily_graph(config.synth, seed);
                graph = &synth.graph;
                features = &synth.features;
                labels = &synth.labels;
                Rng split_rng = derive_rng(seed, 0, "split");
                split = make_node_split(graph->num_nodes(), config.train_frac,
                                        config.val_frac, split_rng);
              }
              for (const Variant variant : config.variants) {
                TrainConfig tc;
                tc.eps_x = ex;
                tc.eps_y = ey;
                tc.m = config.m;
                tc.k_x = hops;
                tc.k_y = hops;
                tc.clusters = num_clusters;
                tc.alpha = alpha;
                tc.learning_rate = config.learning_rate;
                tc.epochs = config.epochs;
                tc.dropout = config.dropout;
                tc.hidden = config.hidden;
                tc.seed = seed;
                tc.feature_mode = config.feature_mode;

                nlohmann::json rec{{"variant", to_string(variant)},
                                   {"eps_x", ex},
                                   {"eps_y", ey},
                                   {"hops", hops},
                                   {"clusters", num_clusters},
                                   {"alpha", alpha},
                                   {"repeat", repeat},
                                   {"seed", seed}};
                try {
                  const RunOutcome outcome = run_pipeline(
                      *graph, *features, *labels, split, tc, variant, false);
                  rec["ok"] = true;
                  rec["test_accuracy"] = outcome.test_accuracy;
                  rec["val_accuracy"] = outcome.val_accuracy;
                  rec["best_epoch"] = outcome.best_epoch;
                  rec["budget"] = {
                      {"eps_x", outcome.budget.eps_x},
                      {"m", outcome.budget.m},
                      {"d", outcome.budget.d},
                      {"eps_feature_total", outcome.budget.eps_feature_total},
                      {"eps_y", outcome.budget.eps_y},
                      {"eps_total", outcome.budget.eps_total}};
                } catch (const std::exception& e) {
                  rec["ok"] = false;
                  rec["error"] = e.what();
                  log_out << "run failed: variant=" << to_string(variant)
                          << " repeat=" << repeat << ": " << e.what() << "\n";
                }
                records_out << rec.dump() << "\n";
              }
            }
          }
        }
      }
    }
  }
}

std::vector<nlohmann::json> load_jsonl(std::istream& in) {
  std::vector<nlohmann::json> records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    records.push_back(nlohmann::json::parse(line));
  }
  return records;
}

double sample_stddev(const std::vector<double>& values) {
  if (values.size() <= 1) return 0.0;
  double mean = 0.0;
  for (const double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (const double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

std::vector<ReportRow> summarize_records(const std::vector<nlohmann::json>& records) {
  struct Group {
    std::vector<double> accuracies;
    std::size_t failed = 0;
  };
  std::map<std::tuple<std::string, double, double>, Group> groups;
  for (const auto& rec : records) {
    const auto key = std::make_tuple(rec.at("variant").get<std::string>(),
                                     rec.at("eps_x").get<double>(),
                                     rec.at("eps_y").get<double>());
    Group& g = groups[key];
    if (rec.value("ok", false))
      g.accuracies.push_back(rec.at("test_accuracy").get<double>());
    else
      ++g.failed;
  }
  std::vector<ReportRow> rows;
  rows.reserve(groups.size());
  for (const auto& [key, group] : groups) {
    ReportRow row;
    row.variant = std::get<0>(key);
    row.eps_x = std::get<1>(key);
    row.eps_y = std::get<2>(key);
    row.runs = group.accuracies.size();
    row.failed = group.failed;
    double mean = 0.0;
    for (const double v : group.accuracies) mean += v;
    row.mean_test_accuracy =
        group.accuracies.empty() ? 0.0
                                 : mean / static_cast<double>(group.accuracies.size());
    row.stddev_test_accuracy = sample_stddev(group.accuracies);
    rows.push_back(row);
  }
  return rows;
}

void write_report(const std::vector<ReportRow>& rows, std::ostream& out) {
  out << format_line("%-16s %8s %8s %6s %7s %10s %9s\n", "variant", "eps_x",
                     "eps_y", "runs", "failed", "mean_test", "std_test");
  for (const ReportRow& row : rows) {
    out << format_line("%-16s %8.4g %8.4g %6zu %7zu %10.4f %9.4f\n",
                       row.variant.c_str(), row.eps_x, row.eps_y, row.runs,
                       row.failed, row.mean_test_accuracy,
                       row.stddev_test_accuracy);
  }
}

}  // namespace ldpgnn
