// Copyright 2026 The emlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Deterministic expectations against the standard normal law.
//
// A Rule stores nodes and weights already folded with the N(0, 1) density,
// so E[f(Z)] is approximated by sum_i w_i f(z_i) and the weights sum to one.

#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "emlab/error.hpp"

namespace emlab::quadrature {

enum class RuleKind { gauss_hermite, trapezoid_grid };

std::string_view to_string(RuleKind kind);

class Rule {
 public:
  /// Gauss-Hermite rule for the probabilists' weight exp(-z^2 / 2).
  static Rule gauss_hermite(std::size_t node_count = 128);
  /// Composite trapezoid rule on [-half_width, half_width].
  static Rule trapezoid(double half_width = 12.0, double step = 1e-3);

  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }
  std::size_t size() const { return nodes_.size(); }
  RuleKind kind() const { return kind_; }

 private:
  Rule(RuleKind kind, std::vector<double> nodes, std::vector<double> weights);

  RuleKind kind_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// Shared GH-128 rule.
const Rule& default_rule();
/// Shared trapezoid rule on [-12, 12] with step 1e-3.
const Rule& fine_grid();

/// Largest integrand scale for which GH-128 reproduces the fine grid to 1e-12
/// on tanh(scale * z + shift) type integrands.
inline constexpr double kGaussHermiteMaxScale = 1.0;

/// Rule for integrands of the form g(scale * z + shift) with g analytic in a
/// strip of half-width pi/2 around the real axis (tanh, log cosh).
const Rule& rule_for_scale(double scale);

template <class F>
double expect1d(F&& f, const Rule& rule) {
  const auto nodes = rule.nodes();
  const auto weights = rule.weights();
  double total = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double value = f(nodes[i]);
    if (!std::isfinite(value)) throw NumericError("integrand not finite");
    total += weights[i] * value;
  }
  return total;
}

/// Tensor-product rule over two independent standard normals.
template <class F>
double expect2d(F&& f, const Rule& rule) {
  const auto nodes = rule.nodes();
  const auto weights = rule.weights();
  double total = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    double inner = 0.0;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      const double value = f(nodes[i], nodes[j]);
      if (!std::isfinite(value)) throw NumericError("integrand not finite");
      inner += weights[j] * value;
    }
    total += weights[i] * inner;
  }
  return total;
}

}  // namespace emlab::quadrature
