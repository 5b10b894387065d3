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

#include "ldpgnn/discretize.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>

namespace ldpgnn {

std::vector<std::uint32_t> quantile_discretize(const std::vector<double>& column,
                                               std::uint32_t bins) {
  if (bins < 2) throw std::invalid_argument("quantile_discretize: bins must be >= 2");
  if (column.empty()) throw std::invalid_argument("quantile_discretize: empty column");
  for (double v : column) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("quantile_discretize: non-finite value");
    }
  }
  std::vector<double> sorted = column;
  std::sort(sorted.begin(), sorted.end());

  const std::size_t n = sorted.size();
  std::vector<double> edges(bins - 1);
  for (std::uint32_t k = 1; k < bins; ++k) {
    // Order statistic at rank ceil(n*k/bins), 1-based.
    const std::size_t rank = (n * k + bins - 1) / bins;
    edges[k - 1] = sorted[rank - 1];
  }

  std::vector<std::uint32_t> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint32_t bin = bins;
    for (std::uint32_t k = 0; k + 1 < bins; ++k) {
      if (column[i] <= edges[k]) {
        bin = k + 1;
        break;
      }
    }
    out[i] = bin;
  }
  return out;
}

CategoricalFeatures group_or_reduce(const CategoricalFeatures& features,
                                    std::uint32_t g, bool* partial_trailing_group) {
  if (g == 0) throw std::invalid_argument("group_or_reduce: g must be positive");
  features.validate();
  for (std::uint32_t dom : features.domains) {
    if (dom != 2) throw std::invalid_argument("group_or_reduce: inputs must be binary (domain 2)");
  }
  const std::size_t d = features.num_columns;
  const std::size_t d_out = (d + g - 1) / g;
  const bool partial = d % g != 0;
  if (partial) {
    std::cerr << "group_or_reduce: " << d << " columns with group size " << g
              << " leaves a partial trailing group of " << d % g << " columns\n";
  }
  if (partial_trailing_group) *partial_trailing_group = partial;

  CategoricalFeatures out;
  out.num_nodes = features.num_nodes;
  out.num_columns = d_out;
  out.domains.assign(d_out, 2);
  out.values.assign(out.num_nodes * d_out, 1);
  for (std::size_t v = 0; v < features.num_nodes; ++v) {
    for (std::size_t i = 0; i < d; ++i) {
      if (features.at(v, i) == 2) out.set(v, i / g, 2);
    }
  }
  return out;
}

}  // namespace ldpgnn
