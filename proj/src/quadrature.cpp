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

#include "emlab/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <numbers>
#include <stdexcept>

namespace emlab::quadrature {

namespace {

// Orthonormal probabilists' Hermite polynomials: returns (p_n(x), p_{n-1}(x)).
std::pair<double, double> hermite_pair(std::size_t n, double x) {
  double previous = 0.0;
  double current = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double next = (x * current - std::sqrt(static_cast<double>(k)) * previous) /
                        std::sqrt(static_cast<double>(k + 1));
    previous = current;
    current = next;
  }
  return {current, previous};
}

double christoffel_weight(std::size_t n, double x) {
  double previous = 0.0;
  double current = 1.0;
  double sum = 1.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double next = (x * current - std::sqrt(static_cast<double>(k)) * previous) /
                        std::sqrt(static_cast<double>(k + 1));
    previous = current;
    current = next;
    sum += current * current;
  }
  return 1.0 / sum;
}

}  // namespace

std::string_view to_string(RuleKind kind) {
  switch (kind) {
    case RuleKind::gauss_hermite:
      return "gauss-hermite";
    case RuleKind::trapezoid_grid:
      return "trapezoid-grid";
  }
  return "unknown";
}

Rule::Rule(RuleKind kind, std::vector<double> nodes, std::vector<double> weights)
    : kind_(kind), nodes_(std::move(nodes)), weights_(std::move(weights)) {}

Rule Rule::gauss_hermite(std::size_t node_count) {
  if (node_count < 1) throw std::invalid_argument("gauss-hermite rule needs at least one node");
  const auto n = static_cast<Eigen::Index>(node_count);

  // Golub-Welsch for the starting abscissae, then Newton on p_n.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index k = 1; k < n; ++k) {
    jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(static_cast<double>(k));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi, Eigen::EigenvaluesOnly);
  std::vector<double> nodes(solver.eigenvalues().data(), solver.eigenvalues().data() + n);

  for (double& x : nodes) {
    for (int iter = 0; iter < 8; ++iter) {
      const auto [pn, pn1] = hermite_pair(node_count, x);
      const double derivative = std::sqrt(static_cast<double>(node_count)) * pn1;
      if (derivative == 0.0) break;
      const double delta = pn / derivative;
      x -= delta;
      if (std::abs(delta) <= 1e-15 * std::max(1.0, std::abs(x))) break;
    }
  }
  std::sort(nodes.begin(), nodes.end());
  // Exact symmetry about zero.
  for (std::size_t i = 0; i < node_count / 2; ++i) {
    const double magnitude = 0.5 * (nodes[node_count - 1 - i] - nodes[i]);
    nodes[i] = -magnitude;
    nodes[node_count - 1 - i] = magnitude;
  }
  if (node_count % 2 == 1) nodes[node_count / 2] = 0.0;

  std::vector<double> weights(node_count);
  double total = 0.0;
  for (std::size_t i = 0; i < node_count; ++i) {
    weights[i] = christoffel_weight(node_count, nodes[i]);
    total += weights[i];
  }
  for (double& w : weights) w /= total;
  return Rule(RuleKind::gauss_hermite, std::move(nodes), std::move(weights));
}

Rule Rule::trapezoid(double half_width, double step) {
  if (!(half_width > 0.0) || !(step > 0.0) || step > half_width) {
    throw std::invalid_argument("invalid trapezoid grid");
  }
  const auto intervals = static_cast<std::size_t>(std::llround(2.0 * half_width / step));
  const double h = 2.0 * half_width / static_cast<double>(intervals);
  const double density_scale = h / std::sqrt(2.0 * std::numbers::pi);

  std::vector<double> nodes(intervals + 1);
  std::vector<double> weights(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i) {
    // Offsets from the centre keep the grid exactly symmetric.
    const double z = (static_cast<double>(i) - 0.5 * static_cast<double>(intervals)) * h;
    nodes[i] = z;
    weights[i] = density_scale * std::exp(-0.5 * z * z);
  }
  weights.front() *= 0.5;
  weights.back() *= 0.5;
  return Rule(RuleKind::trapezoid_grid, std::move(nodes), std::move(weights));
}

const Rule& default_rule() {
  static const Rule rule = Rule::gauss_hermite(128);
  return rule;
}

const Rule& fine_grid() {
  static const Rule rule = Rule::trapezoid(12.0, 1e-3);
  return rule;
}

const Rule& rule_for_scale(double scale) {
  return std::abs(scale) <= kGaussHermiteMaxScale ? default_rule() : fine_grid();
}

}  // namespace emlab::quadrature
