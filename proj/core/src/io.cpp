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

#include "ldpgnn/io.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include <nlohmann/json.hpp>

namespace ldpgnn {
namespace {

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary: '\n' endings everywhere
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

std::int64_t parse_int(const std::string& tok, const std::string& context) {
  std::size_t pos = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(tok, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument(context + ": non-integer token '" + tok + "'");
  }
  if (pos != tok.size()) {
    throw std::invalid_argument(context + ": non-integer token '" + tok + "'");
  }
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

bool looks_like_header(const std::string& first_field) {
  return !first_field.empty() && !std::isdigit(static_cast<unsigned char>(first_field[0])) &&
         first_field[0] != '-';
}

// Reads raw (id, id) pairs, skipping blank lines and '#' comments.
std::vector<std::pair<std::int64_t, std::int64_t>> read_raw_edges(
    const std::string& path) {
  auto in = open_input(path);
  std::vector<std::pair<std::int64_t, std::int64_t>> edges;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string a, b, extra;
    if (!(ls >> a)) continue;  // whitespace-only line
    if (!(ls >> b)) throw std::invalid_argument("edge list: odd token count in " + path);
    if (ls >> extra) throw std::invalid_argument("edge list: more than two tokens per line in " + path);
    edges.emplace_back(parse_int(a, "edge list"), parse_int(b, "edge list"));
  }
  return edges;
}

}  // namespace

Graph load_edge_list(const std::string& path, std::optional<std::size_t> num_nodes) {
  const auto raw = read_raw_edges(path);
  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(raw.size());
  std::int64_t max_id = -1;
  for (const auto& [a, b] : raw) {
    if (a < 0 || b < 0) throw std::invalid_argument("edge list: negative node id");
    max_id = std::max({max_id, a, b});
    edges.emplace_back(static_cast<NodeId>(a), static_cast<NodeId>(b));
  }
  const std::size_t n = num_nodes.value_or(static_cast<std::size_t>(max_id + 1));
  return Graph::from_edges(n, edges);
}

std::pair<Graph, std::vector<std::int64_t>> load_edge_list_compact(
    const std::string& path) {
  const auto raw = read_raw_edges(path);
  std::unordered_map<std::int64_t, NodeId> to_dense;
  std::vector<std::int64_t> id_map;
  auto dense = [&](std::int64_t id) {
    auto [it, inserted] = to_dense.try_emplace(id, static_cast<NodeId>(id_map.size()));
    if (inserted) id_map.push_back(id);
    return it->second;
  };
  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(raw.size());
  for (const auto& [a, b] : raw) {
    const NodeId da = dense(a);  // fixed order: ids are numbered by first appearance
    const NodeId db = dense(b);
    edges.emplace_back(da, db);
  }
  return {Graph::from_edges(id_map.size(), edges), std::move(id_map)};
}

void save_edge_list(const std::string& path, const Graph& g) {
  auto out = open_output(path);
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    for (NodeId v : g.neighbors(u)) {
      if (u < v) out << u << ' ' << v << '\n';
    }
  }
}

void save_id_map(const std::string& path, const std::vector<std::int64_t>& id_map) {
  auto out = open_output(path);
  out << "node_id,original_id\n";
  for (std::size_t i = 0; i < id_map.size(); ++i) out << i << ',' << id_map[i] << '\n';
}

CategoricalFeatures load_features_csv(
    const std::string& path, std::optional<std::vector<std::uint32_t>> domains) {
  auto in = open_input(path);
  std::string line;
  std::vector<std::vector<std::uint32_t>> rows;  // node_id then values
  std::size_t width = 0;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (first && looks_like_header(fields[0])) {
      first = false;
      continue;
    }
    first = false;
    if (width == 0) {
      if (fields.size() < 2) throw std::invalid_argument("features csv: need node_id plus columns");
      width = fields.size();
    } else if (fields.size() != width) {
      throw std::invalid_argument("features csv: ragged row");
    }
    std::vector<std::uint32_t> row;
    row.reserve(width);
    for (const auto& f : fields) {
      const std::int64_t v = parse_int(f, "features csv");
      if (v < 0) throw std::invalid_argument("features csv: negative value");
      row.push_back(static_cast<std::uint32_t>(v));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::invalid_argument("features csv: empty file " + path);

  std::size_t num_nodes = 0;
  for (const auto& r : rows) num_nodes = std::max<std::size_t>(num_nodes, r[0] + 1);

  CategoricalFeatures x;
  x.num_nodes = num_nodes;
  x.num_columns = width - 1;
  x.values.assign(num_nodes * x.num_columns, 1);  // unseen rows default to category 1
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < x.num_columns; ++i) x.set(r[0], i, r[i + 1]);
  }
  if (domains) {
    x.domains = std::move(*domains);
  } else {
    x.domains.assign(x.num_columns, 2);
    for (std::size_t i = 0; i < x.num_columns; ++i) {
      for (std::size_t v = 0; v < num_nodes; ++v) {
        x.domains[i] = std::max(x.domains[i], x.at(v, i));
      }
    }
  }
  x.validate();
  return x;
}

void save_features_csv(const std::string& path, std::size_t num_nodes,
                       std::size_t num_columns,
                       const std::vector<std::uint32_t>& values) {
  if (values.size() != num_nodes * num_columns) {
    throw std::invalid_argument("save_features_csv: values size mismatch");
  }
  auto out = open_output(path);
  out << "node_id";
  for (std::size_t i = 1; i <= num_columns; ++i) out << ",f" << i;
  out << '\n';
  for (std::size_t v = 0; v < num_nodes; ++v) {
    out << v;
    for (std::size_t i = 0; i < num_columns; ++i) out << ',' << values[v * num_columns + i];
    out << '\n';
  }
}

LabelData load_labels_csv(const std::string& path,
                          std::optional<std::size_t> num_classes) {
  auto in = open_input(path);
  std::string line;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> rows;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (first && looks_like_header(fields[0])) {
      first = false;
      continue;
    }
    first = false;
    if (fields.size() != 2) throw std::invalid_argument("labels csv: expected node_id,class");
    const std::int64_t v = parse_int(fields[0], "labels csv");
    const std::int64_t c = parse_int(fields[1], "labels csv");
    if (v < 0 || c < 0) throw std::invalid_argument("labels csv: negative value");
    rows.emplace_back(static_cast<std::uint32_t>(v), static_cast<std::uint32_t>(c));
  }
  std::sort(rows.begin(), rows.end());

  LabelData y;
  std::uint32_t max_class = 0;
  for (const auto& [v, c] : rows) {
    y.labeled_nodes.push_back(v);
    y.classes.push_back(c);
    max_class = std::max(max_class, c);
  }
  y.num_classes = num_classes.value_or(std::max<std::size_t>(2, max_class + 1));
  return y;
}

void save_labels_csv(const std::string& path,
                     const std::vector<std::uint32_t>& labeled_nodes,
                     const std::vector<std::uint32_t>& classes) {
  if (labeled_nodes.size() != classes.size()) {
    throw std::invalid_argument("save_labels_csv: size mismatch");
  }
  auto out = open_output(path);
  out << "node_id,class\n";
  for (std::size_t i = 0; i < labeled_nodes.size(); ++i) {
    out << labeled_nodes[i] << ',' << classes[i] << '\n';
  }
}

NodeSplit load_split_csv(const std::string& path) {
  auto in = open_input(path);
  std::string line;
  NodeSplit s;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (first && looks_like_header(fields[0]) && fields.size() == 2 && fields[1] == "role") {
      first = false;
      continue;
    }
    first = false;
    if (fields.size() != 2) throw std::invalid_argument("splits csv: expected node_id,role");
    const std::int64_t v = parse_int(fields[0], "splits csv");
    if (v < 0) throw std::invalid_argument("splits csv: negative node id");
    const auto id = static_cast<std::uint32_t>(v);
    if (fields[1] == "train") {
      s.train.push_back(id);
    } else if (fields[1] == "val") {
      s.val.push_back(id);
    } else if (fields[1] == "test") {
      s.test.push_back(id);
    } else {
      throw std::invalid_argument("splits csv: unknown role '" + fields[1] + "'");
    }
  }
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.val.begin(), s.val.end());
  std::sort(s.test.begin(), s.test.end());
  return s;
}

void save_split_csv(const std::string& path, const NodeSplit& split) {
  auto out = open_output(path);
  out << "node_id,role\n";
  // Rows sorted by node id so output does not depend on role order.
  std::vector<std::pair<std::uint32_t, const char*>> rows;
  for (auto v : split.train) rows.emplace_back(v, "train");
  for (auto v : split.val) rows.emplace_back(v, "val");
  for (auto v : split.test) rows.emplace_back(v, "test");
  std::sort(rows.begin(), rows.end());
  for (const auto& [v, role] : rows) out << v << ',' << role << '\n';
}

std::vector<std::uint32_t> load_cluster_csv(const std::string& path) {
  auto in = open_input(path);
  std::string line;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> rows;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (first && looks_like_header(fields[0])) {
      first = false;
      continue;
    }
    first = false;
    if (fields.size() != 2) throw std::invalid_argument("clusters csv: expected node_id,cluster");
    const std::int64_t v = parse_int(fields[0], "clusters csv");
    const std::int64_t c = parse_int(fields[1], "clusters csv");
    if (v < 0 || c < 0) throw std::invalid_argument("clusters csv: negative value");
    rows.emplace_back(static_cast<std::uint32_t>(v), static_cast<std::uint32_t>(c));
  }
  std::sort(rows.begin(), rows.end());
  std::vector<std::uint32_t> cluster_of(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].first != i) throw std::invalid_argument("clusters csv: node ids must be dense");
    cluster_of[i] = rows[i].second;
  }
  return cluster_of;
}

void save_cluster_csv(const std::string& path,
                      const std::vector<std::uint32_t>& cluster_of) {
  auto out = open_output(path);
  out << "node_id,cluster\n";
  for (std::size_t v = 0; v < cluster_of.size(); ++v) out << v << ',' << cluster_of[v] << '\n';
}

Dataset load_dataset(const std::string& dir) {
  std::optional<std::size_t> num_nodes;
  std::optional<std::vector<std::uint32_t>> domains;
  std::optional<std::size_t> num_classes;
  {
    std::ifstream meta_in(dir + "/meta.json");
    if (meta_in) {
      nlohmann::json meta = nlohmann::json::parse(meta_in);
      if (meta.contains("num_nodes")) num_nodes = meta["num_nodes"].get<std::size_t>();
      if (meta.contains("domains")) domains = meta["domains"].get<std::vector<std::uint32_t>>();
      if (meta.contains("num_classes")) num_classes = meta["num_classes"].get<std::size_t>();
    }
  }
  Dataset d;
  d.features = load_features_csv(dir + "/features.csv", domains);
  d.graph = load_edge_list(dir + "/edges.txt", num_nodes);
  // Trailing isolated nodes may be absent from the edge file's id range and
  // feature rows may be missing for isolated endpoints; unify on the larger
  // count.
  const std::size_t n =
      std::max({d.graph.num_nodes(), d.features.num_nodes, num_nodes.value_or(0)});
  if (d.graph.num_nodes() < n) d.graph = load_edge_list(dir + "/edges.txt", n);
  if (d.features.num_nodes < n) {
    d.features.values.resize(n * d.features.num_columns, 1);
    d.features.num_nodes = n;
  }
  d.labels = load_labels_csv(dir + "/labels.csv", num_classes);
  if (std::ifstream(dir + "/splits.csv").good())
    d.split = load_split_csv(dir + "/splits.csv");
  d.features.validate();
  d.labels.validate(n);
  return d;
}

void save_dataset(const std::string& dir, const Dataset& data) {
  std::filesystem::create_directories(dir);
  save_edge_list(dir + "/edges.txt", data.graph);
  save_features_csv(dir + "/features.csv", data.features.num_nodes,
                    data.features.num_columns, data.features.values);
  save_labels_csv(dir + "/labels.csv", data.labels.labeled_nodes, data.labels.classes);
  save_split_csv(dir + "/splits.csv", data.split);
  nlohmann::json meta;
  meta["num_nodes"] = std::max(data.graph.num_nodes(), data.features.num_nodes);
  meta["domains"] = data.features.domains;
  meta["num_classes"] = data.labels.num_classes;
  auto out = open_output(dir + "/meta.json");
  out << meta.dump(2) << '\n';
}

}  // namespace ldpgnn
