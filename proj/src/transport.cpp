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

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

#include "emlab/error.hpp"
#include "emlab/metrics.hpp"

namespace emlab {

namespace {

constexpr double kReducedCostTol = 1e-12;

struct Basis {
  std::size_t m;
  std::size_t n;
  std::vector<char> basic;   // row-major flags
  std::vector<double> flow;  // row-major amounts

  std::size_t at(std::size_t i, std::size_t j) const { return i * n + j; }
};

// Dual potentials u_i + v_j = c_ij on basic cells, u_0 = 0.
void potentials(const Basis& b, std::span<const double> cost, std::vector<double>& u,
                std::vector<double>& v) {
  const double unset = std::numeric_limits<double>::quiet_NaN();
  u.assign(b.m, unset);
  v.assign(b.n, unset);
  u[0] = 0.0;
  // Nodes 0..m-1 are rows, m..m+n-1 columns.
  std::deque<std::size_t> queue{0};
  while (!queue.empty()) {
    const std::size_t node = queue.front();
    queue.pop_front();
    if (node < b.m) {
      for (std::size_t j = 0; j < b.n; ++j) {
        if (b.basic[b.at(node, j)] && std::isnan(v[j])) {
          v[j] = cost[b.at(node, j)] - u[node];
          queue.push_back(b.m + j);
        }
      }
    } else {
      const std::size_t j = node - b.m;
      for (std::size_t i = 0; i < b.m; ++i) {
        if (b.basic[b.at(i, j)] && std::isnan(u[i])) {
          u[i] = cost[b.at(i, j)] - v[j];
          queue.push_back(i);
        }
      }
    }
  }
  for (double x : u) if (std::isnan(x)) throw NumericError("transport basis is not spanning");
  for (double x : v) if (std::isnan(x)) throw NumericError("transport basis is not spanning");
}

// Basic cells on the tree path from column node `j` back to row node `i`.
// Returned in order starting at the cell in column j.
std::vector<std::size_t> tree_path(const Basis& b, std::size_t i, std::size_t j) {
  const std::size_t nodes = b.m + b.n;
  const std::size_t none = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> parent(nodes, none);
  std::deque<std::size_t> queue{i};
  parent[i] = i;
  while (!queue.empty() && parent[b.m + j] == none) {
    const std::size_t node = queue.front();
    queue.pop_front();
    if (node < b.m) {
      for (std::size_t c = 0; c < b.n; ++c) {
        if (b.basic[b.at(node, c)] && parent[b.m + c] == none) {
          parent[b.m + c] = node;
          queue.push_back(b.m + c);
        }
      }
    } else {
      const std::size_t c = node - b.m;
      for (std::size_t r = 0; r < b.m; ++r) {
        if (b.basic[b.at(r, c)] && parent[r] == none) {
          parent[r] = node;
          queue.push_back(r);
        }
      }
    }
  }
  if (parent[b.m + j] == none) throw NumericError("transport basis is not spanning");
  std::vector<std::size_t> cells;
  for (std::size_t node = b.m + j; node != i;) {
    const std::size_t up = parent[node];
    if (node >= b.m) {
      cells.push_back(b.at(up, node - b.m));
    } else {
      cells.push_back(b.at(node, up - b.m));
    }
    node = up;
  }
  return cells;
}

}  // namespace

TransportPlan solve_transport(std::span<const double> supply, std::span<const double> demand,
                              std::span<const double> cost) {
  const std::size_t m = supply.size();
  const std::size_t n = demand.size();
  if (m == 0 || n == 0) throw std::invalid_argument("transport problem needs atoms on both sides");
  if (cost.size() != m * n) throw std::invalid_argument("cost matrix has the wrong size");

  Basis b{m, n, std::vector<char>(m * n, 0), std::vector<double>(m * n, 0.0)};

  // Northwest corner; exactly m + n - 1 basic cells because each step
  // advances one index only.
  std::vector<double> a(supply.begin(), supply.end());
  std::vector<double> d(demand.begin(), demand.end());
  for (std::size_t i = 0, j = 0;;) {
    const double x = (i == m - 1 && j == n - 1) ? std::max(a[i], 0.0) : std::max(std::min(a[i], d[j]), 0.0);
    b.basic[b.at(i, j)] = 1;
    b.flow[b.at(i, j)] = x;
    a[i] -= x;
    d[j] -= x;
    if (i == m - 1 && j == n - 1) break;
    if (j == n - 1 || (i < m - 1 && a[i] <= d[j])) {
      ++i;
    } else {
      ++j;
    }
  }

  std::vector<double> u;
  std::vector<double> v;
  const std::size_t max_pivots = 50 * (m + n) * (m + n) + 100;
  for (std::size_t pivot = 0;; ++pivot) {
    if (pivot > max_pivots) throw NumericError("transport simplex did not terminate");
    potentials(b, cost, u, v);
    std::size_t entering = m * n;
    for (std::size_t c = 0; c < m * n; ++c) {
      if (b.basic[c]) continue;
      if (cost[c] - u[c / n] - v[c % n] < -kReducedCostTol) {
        entering = c;
        break;
      }
    }
    if (entering == m * n) break;

    // Cycle: entering (+), then path cells alternate (-, +, -, ...).
    const auto path = tree_path(b, entering / n, entering % n);
    std::size_t leaving = m * n;
    double step = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < path.size(); k += 2) {
      const std::size_t c = path[k];
      if (b.flow[c] < step || (b.flow[c] == step && c < leaving)) {
        step = b.flow[c];
        leaving = c;
      }
    }
    for (std::size_t k = 0; k < path.size(); ++k) {
      b.flow[path[k]] += (k % 2 == 0) ? -step : step;
    }
    b.flow[leaving] = 0.0;
    b.basic[leaving] = 0;
    b.basic[entering] = 1;
    b.flow[entering] = step;
  }

  TransportPlan plan{b.flow, 0.0};
  for (std::size_t c = 0; c < m * n; ++c) plan.cost += plan.flow[c] * cost[c];
  return plan;
}

MixingMeasure MixingMeasure::from_state(const ParamState& state) {
  if (state.weights.size() != state.locations.size()) {
    throw std::invalid_argument("weights and locations differ in length");
  }
  MixingMeasure out;
  for (std::size_t k = 0; k < state.locations.size(); ++k) {
    out.atoms.push_back({state.weights[k], state.locations[k]});
  }
  return out;
}

void MixingMeasure::validate() const {
  if (atoms.empty()) throw std::invalid_argument("mixing measure has no atoms");
  double total = 0.0;
  for (const auto& atom : atoms) {
    if (!(atom.weight >= 0.0)) throw std::invalid_argument("atom weights must be nonnegative");
    if (atom.location.size() != atoms.front().location.size()) {
      throw std::invalid_argument("atom dimensions differ");
    }
    total += atom.weight;
  }
  if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("atom weights must sum to 1");
}

double wasserstein2(const MixingMeasure& a, const MixingMeasure& b) {
  constexpr std::size_t kMaxAtoms = 16;
  if (a.atoms.empty() || b.atoms.empty()) throw std::invalid_argument("mixing measure has no atoms");
  if (a.atoms.size() > kMaxAtoms || b.atoms.size() > kMaxAtoms) {
    throw std::invalid_argument("at most 16 atoms per measure");
  }
  double total_a = 0.0;
  double total_b = 0.0;
  for (const auto& atom : a.atoms) total_a += atom.weight;
  for (const auto& atom : b.atoms) total_b += atom.weight;
  if (std::abs(total_a - total_b) > 1e-6) throw std::invalid_argument("unbalanced measures");

  const auto dim = a.atoms.front().location.size();
  std::vector<double> supply;
  std::vector<double> demand;
  for (const auto& atom : a.atoms) {
    if (atom.location.size() != dim) throw std::invalid_argument("atom dimensions differ");
    if (!(atom.weight >= 0.0)) throw std::invalid_argument("atom weights must be nonnegative");
    supply.push_back(atom.weight);
  }
  for (const auto& atom : b.atoms) {
    if (atom.location.size() != dim) throw std::invalid_argument("atom dimensions differ");
    if (!(atom.weight >= 0.0)) throw std::invalid_argument("atom weights must be nonnegative");
    demand.push_back(atom.weight);
  }
  std::vector<double> cost;
  cost.reserve(supply.size() * demand.size());
  for (const auto& x : a.atoms) {
    for (const auto& y : b.atoms) cost.push_back((x.location - y.location).squaredNorm());
  }
  const auto plan = solve_transport(supply, demand, cost);
  return std::sqrt(std::max(plan.cost, 0.0));
}

}  // namespace emlab
