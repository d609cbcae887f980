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

// Error metrics, the exact transportation solver behind W2, log-log slope
// fits and trial aggregation.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "emlab/models.hpp"

namespace emlab {

struct Atom {
  double weight;
  Vector location;
};

/// Discrete probability measure on component locations.
struct MixingMeasure {
  std::vector<Atom> atoms;

  static MixingMeasure from_state(const ParamState& state);
  /// Throws std::invalid_argument unless weights are >= 0, sum to 1 within
  /// 1e-9 and all atoms share one dimension.
  void validate() const;
};

/// Balanced transportation problem min <C, X> s.t. X 1 = supply, X^T 1 = demand, X >= 0.
struct TransportPlan {
  std::vector<double> flow;  ///< row-major supply.size() x demand.size()
  double cost = 0.0;
};

/// Transportation simplex (northwest-corner start, MODI potentials, Bland's
/// rule for entering and leaving cells). `cost` is row-major.
TransportPlan solve_transport(std::span<const double> supply, std::span<const double> demand,
                              std::span<const double> cost);

/// Exact W2 with squared Euclidean ground cost. At most 16 atoms per side.
/// Throws std::invalid_argument("unbalanced measures") when the total
/// weights differ by more than 1e-6.
double wasserstein2(const MixingMeasure& a, const MixingMeasure& b);

/// Euclidean error of a symmetric or regression fit against theta*,
/// minimised over the sign flip theta -> -theta when `sign_invariant`.
double euclidean_error(const Vector& estimate, const Vector& truth, bool sign_invariant);

struct SlopeFit {
  double slope;
  double intercept;
};

struct RatePoint {
  double x;    ///< n or d
  double err;  ///< > 0
};

/// Ordinary least squares of log(err) on log(x). Needs two distinct x values
/// and positive errors.
SlopeFit slope_fit(std::span<const RatePoint> points);

struct TrialSummary {
  double mean;
  double sd;      ///< sample standard deviation, n - 1 denominator; 0 for one trial
  double report;  ///< mean + 2 sd
};

TrialSummary aggregate_trials(std::span<const double> errors);

}  // namespace emlab
