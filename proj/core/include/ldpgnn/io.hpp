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
// File formats (all writers are byte-stable: fixed field order, '\n' line
// endings, "%.17g" for reals):
//   edges:    one "u v" pair per line, whitespace separated, 0-based ids
//   features: CSV "node_id,f1,...,fd", categories 1-based
//   labels:   CSV "node_id,class", classes 0-based
//   splits:   CSV "node_id,role", role in {train,val,test}
//   clusters: CSV "node_id,cluster"
//   meta:     JSON sidecar {"num_nodes","domains","num_classes"}

#ifndef LDPGNN_IO_HPP_
#define LDPGNN_IO_HPP_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ldpgnn/data.hpp"
#include "ldpgnn/graph.hpp"

namespace ldpgnn {

// Reads a whitespace-separated edge list.  Node count defaults to
// 1 + max id seen; ids may be sparse (gaps become isolated nodes).
// Throws std::runtime_error on unreadable files and std::invalid_argument on
// non-integer tokens or negative ids.
Graph load_edge_list(const std::string& path,
                     std::optional<std::size_t> num_nodes = std::nullopt);

// Same, but remaps arbitrary (possibly sparse) ids to a dense 0..N-1 range in
// first-appearance order.  Returns the graph and the id map, where
// id_map[new_id] = original id.  Use save_id_map to persist the mapping.
std::pair<Graph, std::vector<std::int64_t>> load_edge_list_compact(
    const std::string& path);

void save_edge_list(const std::string& path, const Graph& g);
void save_id_map(const std::string& path, const std::vector<std::int64_t>& id_map);

// Features CSV.  Domains are taken from `domains` when given, otherwise
// inferred as max(2, column max).
CategoricalFeatures load_features_csv(
    const std::string& path, std::optional<std::vector<std::uint32_t>> domains =
                                 std::nullopt);
void save_features_csv(const std::string& path, std::size_t num_nodes,
                       std::size_t num_columns,
                       const std::vector<std::uint32_t>& values);

// Labels CSV.  num_classes defaults to max(2, 1 + max class).
LabelData load_labels_csv(const std::string& path,
                          std::optional<std::size_t> num_classes = std::nullopt);
void save_labels_csv(const std::string& path,
                     const std::vector<std::uint32_t>& labeled_nodes,
                     const std::vector<std::uint32_t>& classes);

NodeSplit load_split_csv(const std::string& path);
void save_split_csv(const std::string& path, const NodeSplit& split);

std::vector<std::uint32_t> load_cluster_csv(const std::string& path);
void save_cluster_csv(const std::string& path,
                      const std::vector<std::uint32_t>& cluster_of);

// A dataset directory: edges.txt, features.csv, labels.csv, plus optional
// splits.csv (absent leaves the split empty) and optional meta.json carrying
// num_nodes/domains/num_classes overrides.
struct Dataset {
  Graph graph;
  CategoricalFeatures features;
  LabelData labels;
  NodeSplit split;
};

Dataset load_dataset(const std::string& dir);
void save_dataset(const std::string& dir, const Dataset& data);

}  // namespace ldpgnn

#endif  // LDPGNN_IO_HPP_
