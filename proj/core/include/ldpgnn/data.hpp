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

#ifndef LDPGNN_DATA_HPP_
#define LDPGNN_DATA_HPP_

#include <cstdint>
#include <vector>

#include "ldpgnn/rng.hpp"

namespace ldpgnn {

// Per-node categorical features, row-major.  Column i takes values in
// [1, domains[i]]; every domain size is at least 2.
//
// This type holds raw client-side data.  Server-side operations (frequency
// estimation, reconstruction, training) are typed against the Perturbed* /
// Reconstructed* types and cannot be called with this one.
struct CategoricalFeatures {
  std::size_t num_nodes = 0;
  std::size_t num_columns = 0;
  std::vector<std::uint32_t> domains;  // size num_columns
  std::vector<std::uint32_t> values;   // size num_nodes * num_columns

  std::uint32_t at(std::size_t node, std::size_t col) const {
    return values[node * num_columns + col];
  }
  void set(std::size_t node, std::size_t col, std::uint32_t v) {
    values[node * num_columns + col] = v;
  }

  // Throws std::invalid_argument if shapes disagree, any domain is < 2, or
  // any value falls outside [1, domain].
  void validate() const;
};

// Raw labels for the labeled subset V^L.  Stored as 0-based class indices;
// each implied one-hot row sums to exactly 1 by construction.
struct LabelData {
  std::size_t num_classes = 0;
  std::vector<std::uint32_t> labeled_nodes;  // sorted node ids
  std::vector<std::uint32_t> classes;        // parallel, values in [0, num_classes)

  void validate(std::size_t num_nodes) const;
};

// Disjoint train/val/test node sets (sorted).  Roles need not cover every
// node when the fractions sum below one.
struct NodeSplit {
  std::vector<std::uint32_t> train;
  std::vector<std::uint32_t> val;
  std::vector<std::uint32_t> test;
};

// Seeded uniform split: a shuffled permutation is cut at the given fractions
// (train, then val, remainder test).  Fractions must be positive and sum to
// at most 1.
NodeSplit make_node_split(std::size_t num_nodes, double train_frac, double val_frac,
                          Rng& rng);

}  // namespace ldpgnn

#endif  // LDPGNN_DATA_HPP_
