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

// One-dimensional analysis of the balanced sample EM fixed-point equation
//   theta = (1/n) sum_i x_i tanh(theta x_i / sigma^2).

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "emlab/models.hpp"

namespace emlab {

/// g(theta) = M_n(theta) - theta for a one-dimensional dataset.
double fixed_point_gap(double theta, const Dataset& data, double sigma);

struct RootScanOptions {
  /// Scan step as a fraction of theta_max = max|x_i| + 1.
  double relative_step = 1e-3;
  double bisection_tol = 1e-12;
};

/// Strictly positive roots of g on (0, theta_max], ascending. Negative roots
/// are their mirror images since g is odd.
std::vector<double> find_nonzero_fixed_points(const Dataset& data, double sigma,
                                              const RootScanOptions& options = {});

struct FixedPointScalingRow {
  std::size_t n = 0;
  int trials = 0;
  int nonzero = 0;              ///< trials with a positive fixed point
  double nonzero_fraction = 0;  ///< nonzero / trials
  double median_scaled = 0;     ///< median of theta_hat * n^{1/4} over nonzero trials
};

/// For each n draws `trials` N(0, 1) datasets and records the largest
/// positive fixed point of each.
std::vector<FixedPointScalingRow> fixed_point_scaling_experiment(const std::vector<std::size_t>& n_list,
                                                                 int trials, std::uint64_t master_seed,
                                                                 unsigned workers = 0);

}  // namespace emlab
