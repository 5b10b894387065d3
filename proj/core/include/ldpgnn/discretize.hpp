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

#ifndef LDPGNN_DISCRETIZE_HPP_
#define LDPGNN_DISCRETIZE_HPP_

#include <cstdint>
#include <vector>

#include "ldpgnn/data.hpp"

namespace ldpgnn {

// Equal-frequency discretization of one real-valued column into `bins`
// categories (1-based).  Bin edges are the order statistics at ranks
// ceil(n*k/bins), k = 1..bins-1; a value lands in the lowest bin whose edge
// is >= the value, so ties always take the lowest admissible bin.  Degenerate
// (all-equal) columns map to bin 1; the reported domain stays `bins`.
// Throws std::invalid_argument for bins < 2, empty input, or non-finite
// values.
std::vector<std::uint32_t> quantile_discretize(const std::vector<double>& column,
                                               std::uint32_t bins);

// Groups consecutive binary columns (values in {1,2}; 2 = bit set) into
// blocks of g, OR-reducing each block: output is 2 iff any member is 2.
// Output has ceil(d/g) columns, all with domain 2.  A partial trailing group
// is accepted and reported through `partial_trailing_group` when non-null.
// Throws std::invalid_argument if any input domain is not 2 or g == 0.
CategoricalFeatures group_or_reduce(const CategoricalFeatures& features,
                                    std::uint32_t g,
                                    bool* partial_trailing_group = nullptr);

}  // namespace ldpgnn

#endif  // LDPGNN_DISCRETIZE_HPP_
