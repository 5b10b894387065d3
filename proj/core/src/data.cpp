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

#include "ldpgnn/data.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ldpgnn {

void CategoricalFeatures::validate() const {
  if (domains.size() != num_columns) {
    throw std::invalid_argument("CategoricalFeatures: domains size mismatch");
  }
  if (values.size() != num_nodes * num_columns) {
    throw std::invalid_argument("CategoricalFeatures: values size mismatch");
  }
  for (std::uint32_t g : domains) {
    if (g < 2) throw std::invalid_argument("CategoricalFeatures: domain size must be >= 2");
  }
  for (std::size_t v = 0; v < num_nodes; ++v) {
    for (std::size_t i = 0; i < num_columns; ++i) {
      const std::uint32_t x = at(v, i);
      if (x < 1 || x > domains[i]) {
        throw std::invalid_argument("CategoricalFeatures: value outside [1, domain]");
      }
    }
  }
}

void LabelData::validate(std::size_t num_nodes) const {
  if (num_classes < 2) throw std::invalid_argument("LabelData: num_classes must be >= 2");
  if (classes.size() != labeled_nodes.size()) {
    throw std::invalid_argument("LabelData: classes size mismatch");
  }
  if (!std::is_sorted(labeled_nodes.begin(), labeled_nodes.end())) {
    throw std::invalid_argument("LabelData: labeled_nodes must be sorted");
  }
  if (std::adjacent_find(labeled_nodes.begin(), labeled_nodes.end()) !=
      labeled_nodes.end()) {
    throw std::invalid_argument("LabelData: duplicate labeled node");
  }
  for (std::uint32_t v : labeled_nodes) {
    if (v >= num_nodes) throw std::invalid_argument("LabelData: node id out of range");
  }
  for (std::uint32_t c : classes) {
    if (c >= num_classes) throw std::invalid_argument("LabelData: class out of range");
  }
}

NodeSplit make_node_split(std::size_t num_nodes, double train_frac, double val_frac,
                          Rng& rng) {
  if (!(train_frac > 0.0) || !(val_frac > 0.0) || train_frac + val_frac > 1.0 + 1e-12) {
    throw std::invalid_argument("make_node_split: fractions must be positive, sum <= 1");
  }
  std::vector<std::uint32_t> perm(num_nodes);
  std::iota(perm.begin(), perm.end(), 0u);
  rng.shuffle(perm);

  const auto n_train = static_cast<std::size_t>(std::floor(train_frac * num_nodes));
  const auto n_val = static_cast<std::size_t>(std::floor(val_frac * num_nodes));

  NodeSplit s;
  s.train.assign(perm.begin(), perm.begin() + n_train);
  s.val.assign(perm.begin() + n_train, perm.begin() + n_train + n_val);
  s.test.assign(perm.begin() + n_train + n_val, perm.end());
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.val.begin(), s.val.end());
  std::sort(s.test.begin(), s.test.end());
  return s;
}

}  // namespace ldpgnn
