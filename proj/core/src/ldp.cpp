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

#include "ldpgnn/ldp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ldpgnn {

TransitionMatrix TransitionMatrix::grr(std::size_t size, double eps) {
  if (size < 2) throw std::invalid_argument("TransitionMatrix: size must be >= 2");
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw std::invalid_argument("TransitionMatrix: eps must be positive and finite");
  }
  TransitionMatrix t;
  t.size = size;
  const double e = std::exp(eps);
  t.p = e / (e + static_cast<double>(size) - 1.0);
  t.q = 1.0 / (e + static_cast<double>(size) - 1.0);
  return t;
}

TransitionMatrix TransitionMatrix::identity(std::size_t size) {
  if (size < 2) throw std::invalid_argument("TransitionMatrix: size must be >= 2");
  TransitionMatrix t;
  t.size = size;
  t.p = 1.0;
  t.q = 0.0;
  return t;
}

double amplified_budget(double eps_x, std::uint32_t m, std::size_t d) {
  if (!(eps_x > 0.0)) throw std::invalid_argument("amplified_budget: eps_x must be positive");
  if (m < 1 || m > d) throw std::invalid_argument("amplified_budget: need 1 <= m <= d");
  const double beta = static_cast<double>(m) / static_cast<double>(d);
  return std::log1p(beta * std::expm1(static_cast<double>(m) * eps_x));
}

BudgetReport make_budget_report(double eps_x, std::uint32_t m, std::size_t d,
                                double eps_y) {
  if (!(eps_y > 0.0)) throw std::invalid_argument("make_budget_report: eps_y must be positive");
  BudgetReport r;
  r.eps_x = eps_x;
  r.m = m;
  r.d = d;
  r.eps_feature_total = amplified_budget(eps_x, m, d);
  r.eps_y = eps_y;
  r.eps_total = r.eps_feature_total + eps_y;
  return r;
}

std::uint32_t grr_perturb(std::uint32_t value, std::uint32_t gamma, double eps, Rng& rng) {
  if (gamma < 2) throw std::invalid_argument("grr_perturb: gamma must be >= 2");
  if (value < 1 || value > gamma) throw std::invalid_argument("grr_perturb: value out of range");
  const TransitionMatrix t = TransitionMatrix::grr(gamma, eps);
  if (rng.bernoulli(t.p)) return value;
  // Uniform over the gamma - 1 other categories.
  auto other = 1 + static_cast<std::uint32_t>(rng.below(gamma - 1));
  if (other >= value) ++other;
  return other;
}

std::vector<std::uint32_t> grr_fs_perturb(std::span<const std::uint32_t> values,
                                          std::span<const std::uint32_t> domains,
                                          std::uint32_t m, double eps_x, Rng& rng) {
  const std::size_t d = values.size();
  if (domains.size() != d) throw std::invalid_argument("grr_fs_perturb: shape mismatch");
  if (m < 1 || m > d) throw std::invalid_argument("grr_fs_perturb: need 1 <= m <= d");

  // Uniform m-subset by partial Fisher-Yates; the subset stays private.
  std::vector<std::uint32_t> idx(d);
  std::iota(idx.begin(), idx.end(), 0u);
  for (std::uint32_t i = 0; i < m; ++i) {
    std::swap(idx[i], idx[i + rng.below(d - i)]);
  }
  std::vector<bool> sampled(d, false);
  for (std::uint32_t i = 0; i < m; ++i) sampled[idx[i]] = true;

  std::vector<std::uint32_t> out(d);
  for (std::size_t i = 0; i < d; ++i) {
    if (values[i] < 1 || values[i] > domains[i]) {
      throw std::invalid_argument("grr_fs_perturb: value outside [1, domain]");
    }
    if (sampled[i]) {
      out[i] = grr_perturb(values[i], domains[i], eps_x, rng);
    } else {
      out[i] = 1 + static_cast<std::uint32_t>(rng.below(domains[i]));
    }
  }
  return out;
}

std::vector<double> label_perturb(std::span<const double> one_hot,
                                  std::size_t num_classes, double eps_y, Rng& rng) {
  if (one_hot.size() != num_classes || num_classes < 2) {
    throw std::invalid_argument("label_perturb: shape mismatch");
  }
  std::size_t ones = 0;
  std::size_t hot = 0;
  for (std::size_t j = 0; j < num_classes; ++j) {
    if (one_hot[j] == 1.0) {
      ++ones;
      hot = j;
    } else if (one_hot[j] != 0.0) {
      throw std::invalid_argument("label_perturb: entries must be exactly 0 or 1");
    }
  }
  if (ones != 1) throw std::invalid_argument("label_perturb: input must be one-hot");

  const std::uint32_t reported =
      grr_perturb(static_cast<std::uint32_t>(hot) + 1,
                  static_cast<std::uint32_t>(num_classes), eps_y, rng) - 1;
  std::vector<double> out(num_classes, 0.0);
  out[reported] = 1.0;
  return out;
}

PerturbedFeatures perturb_features(const CategoricalFeatures& features,
                                   std::uint32_t m, double eps_x, bool bypass,
                                   std::uint64_t seed) {
  features.validate();
  PerturbedFeatures out;
  out.num_nodes = features.num_nodes;
  out.num_columns = features.num_columns;
  out.domains = features.domains;
  out.seed = seed;
  out.bypass = bypass;
  if (bypass) {
    out.values = features.values;
    out.m = static_cast<std::uint32_t>(features.num_columns);
    out.eps_x = 0.0;
    return out;
  }
  if (m < 1 || m > features.num_columns) {
    throw std::invalid_argument("perturb_features: need 1 <= m <= d");
  }
  out.m = m;
  out.eps_x = eps_x;
  out.values.resize(features.values.size());
  for (std::size_t v = 0; v < features.num_nodes; ++v) {
    Rng rng = derive_rng(seed, v, "feature-perturb");
    std::span<const std::uint32_t> row(features.values.data() + v * features.num_columns,
                                       features.num_columns);
    const auto perturbed = grr_fs_perturb(row, features.domains, m, eps_x, rng);
    std::copy(perturbed.begin(), perturbed.end(),
              out.values.begin() + v * features.num_columns);
  }
  return out;
}

PerturbedLabels perturb_labels(const LabelData& labels, double eps_y, bool bypass,
                               std::uint64_t seed) {
  PerturbedLabels out;
  out.num_classes = labels.num_classes;
  out.labeled_nodes = labels.labeled_nodes;
  out.seed = seed;
  out.bypass = bypass;
  if (bypass) {
    out.classes = labels.classes;
    out.eps_y = 0.0;
    return out;
  }
  out.eps_y = eps_y;
  out.classes.resize(labels.classes.size());
  for (std::size_t i = 0; i < labels.labeled_nodes.size(); ++i) {
    Rng rng = derive_rng(seed, labels.labeled_nodes[i], "label-perturb");
    out.classes[i] =
        grr_perturb(labels.classes[i] + 1,
                    static_cast<std::uint32_t>(labels.num_classes), eps_y, rng) - 1;
  }
  return out;
}

}  // namespace ldpgnn
