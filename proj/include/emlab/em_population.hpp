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

// Population EM operators under N(0, sigma^2 I) (or null-regression) truth.
//
// Every operator is evaluated through the rotation argument: the expectation
// of (2 w_theta(X) - 1) X only has a component along theta, and that
// component depends on ||theta|| alone. The d-dimensional integral therefore
// collapses to a one-dimensional (mixture fits) or two-dimensional
// (regression fit) Gaussian expectation.

#pragma once

#include <vector>

#include "emlab/models.hpp"
#include "emlab/quadrature.hpp"

namespace emlab {

/// Per-iteration log of one EM run. `distance[t]` is the distance of the t-th
/// iterate to the reference point (theta* or the origin); `weight[t]` is the
/// weight iterate for unknown-weight fits and empty otherwise.
struct TrajectoryRecord {
  std::vector<double> distance;
  std::vector<double> weight;
};

/// Scalar map m(r) with M(theta) = m(||theta||) theta / ||theta||:
///   m(r) = sigma * E[V tanh(r V / sigma + lambda)],  lambda = log(pi / (1 - pi)) / 2.
/// `rule` overrides the scale-based quadrature choice.
double symmetric_radial_map(double r, double pi, double sigma,
                            const quadrature::Rule* rule = nullptr);

/// Population EM operator for the fixed-weight symmetric fit.
Vector pop_em_symmetric(const Vector& theta, double pi, double sigma,
                        const quadrature::Rule* rule = nullptr);

struct WeightedLocation {
  double weight;
  Vector location;
};

/// Population operators (M1, M2) for the symmetric fit with unknown weight.
WeightedLocation pop_em_unknown_weight(const Vector& theta, double pi, double sigma = 1.0,
                                       const quadrature::Rule* rule = nullptr);

enum class RegressionRoute {
  automatic,     ///< nested
  tensor,        ///< GH-128 x GH-128 tensor product, accurate to ~1e-10 for r <= 1/2
  nested,        ///< trapezoid in log|V| over trapezoid in log|Y|, ~1e-14 for all r
};

/// m(r) = E[tanh(r V Y) V Y] over independent standard normals V, Y.
double regression_radial_map(double r, RegressionRoute route = RegressionRoute::automatic);

/// Population EM operator for the balanced regression fit under theta* = 0.
Vector pop_em_regression(const Vector& theta, RegressionRoute route = RegressionRoute::automatic);

struct PopOperatorSpec {
  FitSpec fit;
  /// Starting weight for unknown-weight fits.
  double initial_weight = 0.5;
  /// Optional fixed rule; nullptr selects by integrand scale.
  const quadrature::Rule* rule = nullptr;
};

/// Iterates theta^{t+1} = M(theta^t) for `steps` steps. The record holds
/// ||theta^t|| for t = 0..T, stopping early once ||theta^t|| < 1e-12.
TrajectoryRecord pop_trajectory(const PopOperatorSpec& spec, const Vector& theta0, int steps);

/// Experimental: one population EM step for a general k-component fit in
/// d = 1 against a general one-dimensional mixture truth, by quadrature
/// over each true component.
ParamState pop_em_general_1d(const ParamState& state, const GeneralFit& fit, double sigma,
                             const GeneralMixture& truth);

/// Experimental: population trajectory of pop_em_general_1d.
std::vector<ParamState> pop_general_trajectory_1d(const ParamState& start, const GeneralFit& fit,
                                                  double sigma, const GeneralMixture& truth,
                                                  int steps);

}  // namespace emlab
