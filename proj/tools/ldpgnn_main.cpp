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
// Command line front end.  Subcommands cover the full pipeline: synth,
// perturb, partition, reconstruct, estimate, audit, train, sweep, report.
// train and sweep read a JSON config (--config) whose values individual
// flags override.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include "ldpgnn/audit.hpp"
#include "ldpgnn/data.hpp"
#include "ldpgnn/experiment.hpp"
#include "ldpgnn/freq_est.hpp"
#include "ldpgnn/gnn.hpp"
#include "ldpgnn/io.hpp"
#include "ldpgnn/ldp.hpp"
#include "ldpgnn/partition.hpp"
#include "ldpgnn/reconstruct.hpp"
#include "ldpgnn/synth.hpp"

namespace {

using nlohmann::json;

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  return json::parse(in);
}

std::vector<std::uint32_t> parse_u32_list(const std::string& csv) {
  std::vector<std::uint32_t> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    std::size_t pos = 0;
    const unsigned long v = std::stoul(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument("bad integer list: " + csv);
    out.push_back(static_cast<std::uint32_t>(v));
  }
  if (out.empty()) throw std::invalid_argument("empty integer list");
  return out;
}

// Plain-text model checkpoint, format "ldpgnn-model 1".
void save_model(const std::string& path, const ldpgnn::ModelParams& p) {
  auto out = open_out(path);
  out << "ldpgnn-model 1\n";
  out << p.input_dim << ' ' << p.hidden_dim << ' ' << p.num_classes << '\n';
  const auto dump_row = [&out](const double* row, std::size_t n) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j) out << ' ';
      out << fmt_double(row[j]);
    }
    out << '\n';
  };
  for (std::size_t i = 0; i < p.w1.rows; ++i) dump_row(&p.w1.a[i * p.w1.cols], p.w1.cols);
  dump_row(p.b1.data(), p.b1.size());
  for (std::size_t i = 0; i < p.w2.rows; ++i) dump_row(&p.w2.a[i * p.w2.cols], p.w2.cols);
  dump_row(p.b2.data(), p.b2.size());
}

ldpgnn::ModelParams load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::string magic;
  std::getline(in, magic);
  if (magic != "ldpgnn-model 1")
    throw std::runtime_error("unsupported model file: " + path);
  ldpgnn::ModelParams p;
  in >> p.input_dim >> p.hidden_dim >> p.num_classes;
  if (!in) throw std::runtime_error("truncated model file: " + path);
  p.w1 = ldpgnn::Matrix(2 * p.input_dim, p.hidden_dim);
  p.b1.resize(p.hidden_dim);
  p.w2 = ldpgnn::Matrix(2 * p.hidden_dim, p.num_classes);
  p.b2.resize(p.num_classes);
  for (double& v : p.w1.a) in >> v;
  for (double& v : p.b1) in >> v;
  for (double& v : p.w2.a) in >> v;
  for (double& v : p.b2) in >> v;
  if (!in) throw std::runtime_error("truncated model file: " + path);
  return p;
}

// Perturbed-table directory: features.csv / labels.csv plus a perturb.json
// sidecar recording the mechanism metadata the server needs.
void save_perturbed(const std::string& dir, const ldpgnn::PerturbedFeatures& px,
                    const ldpgnn::PerturbedLabels& py) {
  std::filesystem::create_directories(dir);
  ldpgnn::save_features_csv(dir + "/features.csv", px.num_nodes, px.num_columns,
                            px.values);
  ldpgnn::save_labels_csv(dir + "/labels.csv", py.labeled_nodes, py.classes);
  json meta{{"eps_x", px.eps_x},
            {"eps_y", py.eps_y},
            {"m", px.m},
            {"seed", px.seed},
            {"bypass_features", px.bypass},
            {"bypass_labels", py.bypass},
            {"domains", px.domains},
            {"num_classes", py.num_classes}};
  open_out(dir + "/perturb.json") << meta.dump(2) << '\n';
}

std::pair<ldpgnn::PerturbedFeatures, ldpgnn::PerturbedLabels> load_perturbed(
    const std::string& dir) {
  const json meta = load_json_file(dir + "/perturb.json");
  std::vector<std::uint32_t> domains =
      meta.at("domains").get<std::vector<std::uint32_t>>();
  const auto features =
      ldpgnn::load_features_csv(dir + "/features.csv", domains);
  const auto labels = ldpgnn::load_labels_csv(
      dir + "/labels.csv", meta.at("num_classes").get<std::size_t>());
  ldpgnn::PerturbedFeatures px;
  px.num_nodes = features.num_nodes;
  px.num_columns = features.num_columns;
  px.domains = features.domains;
  px.values = features.values;
  px.m = meta.at("m").get<std::uint32_t>();
  px.eps_x = meta.at("eps_x").get<double>();
  px.bypass = meta.at("bypass_features").get<bool>();
  px.seed = meta.at("seed").get<std::uint64_t>();
  ldpgnn::PerturbedLabels py;
  py.num_classes = labels.num_classes;
  py.labeled_nodes = labels.labeled_nodes;
  py.classes = labels.classes;
  py.eps_y = meta.at("eps_y").get<double>();
  py.bypass = meta.at("bypass_labels").get<bool>();
  py.seed = meta.at("seed").get<std::uint64_t>();
  return {px, py};
}

// Pre-scan for --config so flag defaults can come from the file; flags given
// on the command line then override those values during the real parse.
std::optional<std::string> find_config_arg(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) return std::string(argv[i + 1]);
    if (arg.rfind("--config=", 0) == 0) return arg.substr(9);
  }
  return std::nullopt;
}

int cmd_synth(const ldpgnn::SynthParams& params, const std::string& out_dir,
              std::uint64_t seed, double train_frac, double val_frac) {
  const ldpgnn::SynthData data = ldpgnn::synth_homophily_graph(params, seed);
  ldpgnn::Dataset ds;
  ds.graph = data.graph;
  ds.features = data.features;
  ds.labels = data.labels;
  ldpgnn::Rng split_rng = ldpgnn::derive_rng(seed, 0, "split");
  ds.split = ldpgnn::make_node_split(data.graph.num_nodes(), train_frac, val_frac,
                                     split_rng);
  std::filesystem::create_directories(out_dir);
  ldpgnn::save_dataset(out_dir, ds);
  std::cout << "wrote " << out_dir << ": " << data.graph.num_nodes() << " nodes, "
            << data.graph.num_edges() << " edges, "
            << data.labels.labeled_nodes.size() << " labeled\n";
  return 0;
}

int cmd_perturb(const std::string& data_dir, const std::string& out_dir,
                double eps_x, double eps_y, std::uint32_t m, std::uint64_t seed,
                bool bypass_features, bool bypass_labels) {
  const ldpgnn::Dataset ds = ldpgnn::load_dataset(data_dir);
  const auto px =
      ldpgnn::perturb_features(ds.features, m, eps_x, bypass_features, seed);
  const auto py = ldpgnn::perturb_labels(ds.labels, eps_y, bypass_labels, seed);
  save_perturbed(out_dir, px, py);
  const auto budget =
      bypass_features || bypass_labels
          ? ldpgnn::BudgetReport{}
          : ldpgnn::make_budget_report(eps_x, m, ds.features.num_columns, eps_y);
  std::cout << "wrote " << out_dir << "\n";
  if (!bypass_features && !bypass_labels) {
    std::cout << "budget: eps_feature_total=" << fmt_double(budget.eps_feature_total)
              << " eps_y=" << fmt_double(budget.eps_y)
              << " eps_total=" << fmt_double(budget.eps_total) << "\n";
  } else {
    std::cout << "budget: bypass in effect (no finite guarantee)\n";
  }
  return 0;
}

int cmd_partition(const std::string& data_dir, const std::string& out_path,
                  std::size_t num_clusters, std::uint64_t seed) {
  const ldpgnn::Graph graph = ldpgnn::load_edge_list(data_dir + "/edges.txt");
  const ldpgnn::ClusterAssignment clusters =
      ldpgnn::partition(graph, num_clusters, seed);
  ldpgnn::save_cluster_csv(out_path, clusters.cluster_of);
  std::cout << "wrote " << out_path << ": edge_cut=" << clusters.edge_cut
            << " sweeps=";
  for (std::size_t i = 0; i < clusters.sweep_cuts.size(); ++i)
    std::cout << (i ? "," : "") << clusters.sweep_cuts[i];
  std::cout << "\n";
  return 0;
}

int cmd_reconstruct(const std::string& data_dir, const std::string& perturbed_dir,
                    const std::string& out_dir, std::size_t k_x, std::size_t k_y,
                    const std::string& mode_name) {
  const auto [px, py] = load_perturbed(perturbed_dir);
  const ldpgnn::Graph graph =
      ldpgnn::load_edge_list(data_dir + "/edges.txt", px.num_nodes);
  const ldpgnn::FeatureMode mode = mode_name == "binary-probability"
                                       ? ldpgnn::FeatureMode::kBinaryProbability
                                       : ldpgnn::FeatureMode::kArgmax;
  if (mode_name != "argmax" && mode_name != "binary-probability")
    throw std::invalid_argument("unknown feature mode: " + mode_name);
  const auto rx = ldpgnn::reconstruct_features(graph, px, k_x, mode);
  const auto ry = ldpgnn::reconstruct_labels(graph, py, k_y);
  std::filesystem::create_directories(out_dir);
  if (mode == ldpgnn::FeatureMode::kArgmax) {
    ldpgnn::save_features_csv(out_dir + "/features.csv", rx.num_nodes,
                              rx.num_columns, rx.values);
  } else {
    auto out = open_out(out_dir + "/features_prob.csv");
    out << "node_id";
    for (std::size_t j = 0; j < rx.num_columns; ++j) out << ",f" << (j + 1);
    out << '\n';
    for (std::size_t v = 0; v < rx.num_nodes; ++v) {
      out << v;
      for (std::size_t j = 0; j < rx.num_columns; ++j)
        out << ',' << fmt_double(rx.probabilities[v * rx.num_columns + j]);
      out << '\n';
    }
  }
  ldpgnn::save_labels_csv(out_dir + "/labels.csv", ry.labeled_nodes, ry.classes);
  std::cout << "wrote " << out_dir << "\n";
  return 0;
}

int cmd_estimate(const std::string& perturbed_dir, const std::string& out_path) {
  const auto [px, py] = load_perturbed(perturbed_dir);
  json result;
  result["sample_size"] = px.num_nodes;
  result["columns"] = json::array();
  for (std::size_t col = 0; col < px.num_columns; ++col) {
    const std::uint32_t gamma = px.domains[col];
    std::vector<double> observed(gamma, 0.0);
    for (std::size_t v = 0; v < px.num_nodes; ++v)
      observed[px.at(v, col) - 1] += 1.0;
    for (double& o : observed) o /= static_cast<double>(px.num_nodes);
    const ldpgnn::TransitionMatrix channel =
        px.bypass ? ldpgnn::TransitionMatrix::identity(gamma)
                  : ldpgnn::TransitionMatrix::grr(gamma, px.eps_x);
    const auto est = ldpgnn::estimate_grr_fs(
        observed, px.num_columns, px.bypass ? px.num_columns : px.m, gamma,
        channel.p, channel.q, px.num_nodes);
    json entry{{"column", col},
               {"proportions", est.proportions},
               {"variances", est.variances}};
    result["columns"].push_back(entry);
  }
  if (out_path.empty()) {
    std::cout << result.dump(2) << "\n";
  } else {
    open_out(out_path) << result.dump(2) << '\n';
    std::cout << "wrote " << out_path << "\n";
  }
  return 0;
}

int cmd_audit(const std::string& x_csv, const std::string& xprime_csv,
              const std::string& domains_csv, std::uint32_t m, double eps_x,
              std::optional<double> bound_override, bool dump_rows,
              std::size_t cap) {
  const auto x = parse_u32_list(x_csv);
  const auto xprime = parse_u32_list(xprime_csv);
  const auto domains = parse_u32_list(domains_csv);
  const ldpgnn::AuditReport report =
      ldpgnn::audit_pair(x, xprime, domains, m, eps_x, cap);
  const double bound =
      bound_override.value_or(report.hamming_distance <= 1
                                  ? std::exp(report.eps_amplified)
                                  : std::exp(report.eps_per_vector));
  const bool ok = report.max_ratio <= bound * (1.0 + 1e-9);
  json out{{"max_ratio", report.max_ratio},
           {"bound", bound},
           {"within_bound", ok},
           {"hamming_distance", report.hamming_distance},
           {"eps_amplified", report.eps_amplified},
           {"eps_per_vector", report.eps_per_vector},
           {"argmax_output", report.argmax_output},
           {"outputs", report.rows.size()}};
  if (dump_rows) {
    out["rows"] = json::array();
    for (const auto& row : report.rows)
      out["rows"].push_back(json{{"output", row.output},
                                 {"pr_x", row.pr_x},
                                 {"pr_xprime", row.pr_xprime},
                                 {"ratio", row.ratio}});
  }
  std::cout << out.dump(2) << "\n";
  return ok ? 0 : 1;
}

int cmd_train(const std::string& data_dir, const std::string& out_dir,
              const ldpgnn::TrainConfig& config, const std::string& variant_name,
              bool test_curve, double train_frac, double val_frac) {
  const ldpgnn::Dataset ds = ldpgnn::load_dataset(data_dir);
  ldpgnn::NodeSplit split = ds.split;
  if (split.train.empty()) {
    ldpgnn::Rng split_rng = ldpgnn::derive_rng(config.seed, 0, "split");
    split = ldpgnn::make_node_split(ds.graph.num_nodes(), train_frac, val_frac,
                                    split_rng);
  }
  const ldpgnn::Variant variant = ldpgnn::variant_from_string(variant_name);
  const auto start = std::chrono::steady_clock::now();
  const ldpgnn::RunOutcome outcome = ldpgnn::run_pipeline(
      ds.graph, ds.features, ds.labels, split, config, variant, test_curve);
  const double wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  std::filesystem::create_directories(out_dir);
  json metrics{{"variant", variant_name},
               {"config", config},
               {"test_accuracy", outcome.test_accuracy},
               {"val_accuracy", outcome.val_accuracy},
               {"best_epoch", outcome.best_epoch},
               {"wall_time_seconds", wall_seconds}};
  const bool finite_budget = !config.bypass_features && !config.bypass_labels;
  if (finite_budget) {
    metrics["budget"] = {{"eps_x", outcome.budget.eps_x},
                         {"m", outcome.budget.m},
                         {"d", outcome.budget.d},
                         {"eps_feature_total", outcome.budget.eps_feature_total},
                         {"eps_y", outcome.budget.eps_y},
                         {"eps_total", outcome.budget.eps_total}};
  }
  metrics["history"] = json::array();
  for (const auto& epoch : outcome.history) {
    json e{{"epoch", epoch.epoch},
           {"total_loss", epoch.total_loss},
           {"gnn_loss", epoch.gnn_loss},
           {"llp_loss", epoch.llp_loss},
           {"val_accuracy", epoch.val_accuracy}};
    if (epoch.test_accuracy) e["test_accuracy"] = *epoch.test_accuracy;
    metrics["history"].push_back(e);
  }
  open_out(out_dir + "/metrics.json") << metrics.dump(2) << '\n';

  save_model(out_dir + "/model.txt", outcome.params);
  const ldpgnn::ModelParams reloaded = load_model(out_dir + "/model.txt");
  if (reloaded.w1.a != outcome.params.w1.a || reloaded.w2.a != outcome.params.w2.a)
    throw std::runtime_error("checkpoint round-trip mismatch");

  std::cout << "test_accuracy=" << fmt_double(outcome.test_accuracy)
            << " val_accuracy=" << fmt_double(outcome.val_accuracy)
            << " best_epoch=" << outcome.best_epoch << "\n";
  if (finite_budget) {
    std::cout << "budget: eps_feature_total="
              << fmt_double(outcome.budget.eps_feature_total)
              << " eps_y=" << fmt_double(outcome.budget.eps_y)
              << " eps_total=" << fmt_double(outcome.budget.eps_total) << "\n";
  }
  std::cout << "wrote " << out_dir << "/metrics.json\n";
  return 0;
}

int cmd_sweep(const ldpgnn::SweepConfig& config, const std::string& records_path,
              const std::string& log_path) {
  std::ofstream records = open_out(records_path);
  std::optional<std::ofstream> log_file;
  if (!log_path.empty()) log_file = open_out(log_path);
  std::ostream& log = log_file ? *log_file : std::cout;
  ldpgnn::run_sweep(config, records, log);
  std::cout << "wrote " << records_path << "\n";
  return 0;
}

int cmd_report(const std::string& records_path, const std::string& out_path) {
  std::ifstream in(records_path);
  if (!in) throw std::runtime_error("cannot read " + records_path);
  const auto records = ldpgnn::load_jsonl(in);
  const auto rows = ldpgnn::summarize_records(records);
  if (out_path.empty()) {
    ldpgnn::write_report(rows, std::cout);
  } else {
    auto out = open_out(out_path);
    ldpgnn::write_report(rows, out);
    std::cout << "wrote " << out_path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Locally differentially private graph learning toolkit"};
  app.require_subcommand(1);
  int exit_code = 0;

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset");
  ldpgnn::SynthParams synth_params;
  std::string synth_out = "dataset";
  std::uint64_t synth_seed = 0;
  double synth_train_frac = 0.6, synth_val_frac = 0.2;
  synth->add_option("--out", synth_out, "Output dataset directory");
  synth->add_option("--seed", synth_seed, "Generation seed");
  synth->add_option("--nodes", synth_params.num_nodes, "Node count");
  synth->add_option("--classes", synth_params.num_classes, "Community count");
  synth->add_option("--columns", synth_params.num_columns, "Feature columns");
  synth->add_option("--domain", synth_params.domain, "Categories per column");
  synth->add_option("--p-in", synth_params.p_in, "Intra-community edge probability");
  synth->add_option("--p-out", synth_params.p_out, "Inter-community edge probability");
  synth->add_option("--feature-skew", synth_params.feature_skew,
                    "Preferred-category probability");
  synth->add_option("--label-rate", synth_params.label_rate, "Labeled fraction");
  synth->add_option("--train-frac", synth_train_frac, "Train split fraction");
  synth->add_option("--val-frac", synth_val_frac, "Validation split fraction");
  synth->callback([&] {
    exit_code = cmd_synth(synth_params, synth_out, synth_seed, synth_train_frac,
                          synth_val_frac);
  });

  // perturb
  auto* perturb = app.add_subcommand("perturb", "Apply the client-side randomizers");
  std::string perturb_data, perturb_out = "perturbed";
  double perturb_eps_x = 1.0, perturb_eps_y = 1.0;
  std::uint32_t perturb_m = 10;
  std::uint64_t perturb_seed = 0;
  bool perturb_bypass_x = false, perturb_bypass_y = false;
  perturb->add_option("--data", perturb_data, "Dataset directory")->required();
  perturb->add_option("--out", perturb_out, "Output directory");
  perturb->add_option("--eps-x", perturb_eps_x, "Per-coordinate feature budget");
  perturb->add_option("--eps-y", perturb_eps_y, "Label budget");
  perturb->add_option("--m", perturb_m, "Sampled coordinates per node");
  perturb->add_option("--seed", perturb_seed, "Perturbation seed");
  perturb->add_flag("--bypass-features", perturb_bypass_x,
                    "Copy features unperturbed (infinite budget)");
  perturb->add_flag("--bypass-labels", perturb_bypass_y,
                    "Copy labels unperturbed (infinite budget)");
  perturb->callback([&] {
    exit_code = cmd_perturb(perturb_data, perturb_out, perturb_eps_x, perturb_eps_y,
                            perturb_m, perturb_seed, perturb_bypass_x,
                            perturb_bypass_y);
  });

  // partition
  auto* part = app.add_subcommand("partition", "Cluster the graph into bags");
  std::string part_data, part_out = "clusters.csv";
  std::size_t part_clusters = 16;
  std::uint64_t part_seed = 0;
  part->add_option("--data", part_data, "Dataset directory")->required();
  part->add_option("--out", part_out, "Output clusters CSV");
  part->add_option("--clusters", part_clusters, "Cluster count");
  part->add_option("--seed", part_seed, "Partition seed");
  part->callback([&] {
    exit_code = cmd_partition(part_data, part_out, part_clusters, part_seed);
  });

  // reconstruct
  auto* recon = app.add_subcommand("reconstruct",
                                   "Denoise perturbed features and labels");
  std::string recon_data, recon_perturbed, recon_out = "reconstructed";
  std::size_t recon_kx = 8, recon_ky = 8;
  std::string recon_mode = "argmax";
  recon->add_option("--data", recon_data, "Dataset directory (for the graph)")
      ->required();
  recon->add_option("--perturbed", recon_perturbed, "Perturbed directory")
      ->required();
  recon->add_option("--out", recon_out, "Output directory");
  recon->add_option("--hops-x", recon_kx, "Feature propagation rounds");
  recon->add_option("--hops-y", recon_ky, "Label propagation rounds");
  recon->add_option("--mode", recon_mode, "argmax | binary-probability");
  recon->callback([&] {
    exit_code = cmd_reconstruct(recon_data, recon_perturbed, recon_out, recon_kx,
                                recon_ky, recon_mode);
  });

  // estimate
  auto* est = app.add_subcommand("estimate",
                                 "Column-wise frequency estimates with variances");
  std::string est_perturbed, est_out;
  est->add_option("--perturbed", est_perturbed, "Perturbed directory")->required();
  est->add_option("--out", est_out, "Output JSON path (default stdout)");
  est->callback([&] { exit_code = cmd_estimate(est_perturbed, est_out); });

  // audit
  auto* audit = app.add_subcommand("audit", "Numeric privacy audit of GRR-FS");
  std::string audit_x, audit_xprime, audit_domains;
  std::uint32_t audit_m = 1;
  double audit_eps_x = 1.0;
  double audit_bound = 0.0;
  bool audit_rows = false;
  std::size_t audit_cap = 4096;
  audit->add_option("-x,--input", audit_x, "Input vector, e.g. 1,2,1")->required();
  audit->add_option("--xprime", audit_xprime, "Neighboring input vector")->required();
  audit->add_option("--domains", audit_domains, "Per-coordinate domain sizes")
      ->required();
  audit->add_option("--m", audit_m, "Sampled coordinates");
  audit->add_option("--eps-x", audit_eps_x, "Per-coordinate budget");
  auto* bound_opt =
      audit->add_option("--bound", audit_bound,
                        "Ratio bound to enforce (default: the regime's e^eps)");
  audit->add_flag("--rows", audit_rows, "Dump every output's probabilities");
  audit->add_option("--cap", audit_cap, "Output-space enumeration cap");
  audit->callback([&] {
    exit_code = cmd_audit(audit_x, audit_xprime, audit_domains, audit_m,
                          audit_eps_x,
                          bound_opt->count() ? std::optional<double>(audit_bound)
                                             : std::nullopt,
                          audit_rows, audit_cap);
  });

  // train (config file + flag overrides)
  auto* train = app.add_subcommand("train", "Run one pipeline variant end to end");
  std::string train_data, train_out = "train-out", train_variant = "rgnn";
  std::string train_config_path;
  ldpgnn::TrainConfig train_config;
  double train_train_frac = 0.6, train_val_frac = 0.2;
  bool train_no_curve = false;
  const std::string invoked = argc > 1 ? argv[1] : "";
  if (invoked == "train") {
    try {
      if (const auto cfg = find_config_arg(argc, argv)) {
        const json j = load_json_file(*cfg);
        train_config = j.get<ldpgnn::TrainConfig>();
        if (j.contains("variant")) train_variant = j["variant"].get<std::string>();
      }
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
  }
  train->add_option("--config", train_config_path, "JSON config path");
  train->add_option("--data", train_data, "Dataset directory")->required();
  train->add_option("--out", train_out, "Output directory");
  train->add_option("--variant", train_variant,
                    "rgnn | no-fx | no-fy | no-llp | noisy-baseline");
  train->add_option("--eps-x", train_config.eps_x, "Per-coordinate feature budget");
  train->add_option("--eps-y", train_config.eps_y, "Label budget");
  train->add_option("--m", train_config.m, "Sampled coordinates");
  train->add_option("--hops-x", train_config.k_x, "Feature propagation rounds");
  train->add_option("--hops-y", train_config.k_y, "Label propagation rounds");
  train->add_option("--clusters", train_config.clusters, "LLP bag count");
  train->add_option("--alpha", train_config.alpha, "LLP weight");
  train->add_option("--lr", train_config.learning_rate, "Adam learning rate");
  train->add_option("--epochs", train_config.epochs, "Training epochs");
  train->add_option("--dropout", train_config.dropout, "Dropout rate");
  train->add_option("--hidden", train_config.hidden, "Hidden width");
  train->add_option("--seed", train_config.seed, "Run seed");
  train->add_option("--train-frac", train_train_frac,
                    "Train fraction when the dataset has no split");
  train->add_option("--val-frac", train_val_frac,
                    "Validation fraction when the dataset has no split");
  train->add_flag("--bypass-features", train_config.bypass_features,
                  "Skip feature perturbation");
  train->add_flag("--bypass-labels", train_config.bypass_labels,
                  "Skip label perturbation");
  train->add_flag("--no-test-curve", train_no_curve,
                  "Skip per-epoch test accuracy in metrics.json");
  train->callback([&] {
    exit_code = cmd_train(train_data, train_out, train_config, train_variant,
                          !train_no_curve, train_train_frac, train_val_frac);
  });

  // sweep (config file + flag overrides)
  auto* sweep = app.add_subcommand("sweep", "Run the full variant/budget grid");
  std::string sweep_config_path, sweep_records = "records.jsonl", sweep_log;
  ldpgnn::SweepConfig sweep_config;
  if (invoked == "sweep") {
    try {
      if (const auto cfg = find_config_arg(argc, argv)) {
        sweep_config = load_json_file(*cfg).get<ldpgnn::SweepConfig>();
      }
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
  }
  sweep->add_option("--config", sweep_config_path, "JSON config path");
  sweep->add_option("--records", sweep_records, "Output JSONL path");
  sweep->add_option("--log", sweep_log, "Budget/failure log path (default stdout)");
  sweep->add_option("--master-seed", sweep_config.master_seed, "Master seed");
  sweep->add_option("--repeats", sweep_config.repeats, "Repeats per grid point");
  sweep->add_option("--data", sweep_config.dataset_dir,
                    "Dataset directory (default: synthesize per run)");
  sweep->add_option("--epochs", sweep_config.epochs, "Training epochs");
  sweep->callback([&] {
    exit_code = cmd_sweep(sweep_config, sweep_records, sweep_log);
  });

  // report
  auto* report = app.add_subcommand("report", "Summarize sweep records");
  std::string report_records = "records.jsonl", report_out;
  report->add_option("--records", report_records, "Records JSONL path");
  report->add_option("--out", report_out, "Output path (default stdout)");
  report->callback([&] { exit_code = cmd_report(report_records, report_out); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return exit_code;
}
