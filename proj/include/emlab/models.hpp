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

// Data-generating laws, fitted-model descriptions and seeded samplers.

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "emlab/random.hpp"
#include "emlab/types.hpp"

namespace emlab {

// ---- true models -----------------------------------------------------------

/// N(0, sigma^2 I_d).
struct GaussianNull {
  double sigma = 1.0;
  int dim = 1;
};

/// weight * N(location, sigma^2 I) + (1 - weight) * N(-location, sigma^2 I).
struct TwoMixture {
  Vector location;
  double weight = 0.5;
  double sigma = 1.0;
};

/// Y = X^T coef + sigma * xi with X ~ N(0, I_d), xi ~ N(0, 1).
struct RegressionModel {
  Vector coef;
  double sigma = 1.0;
};

/// sum_k weights[k] * N(locations[k], sigma^2 I).
struct GeneralMixture {
  std::vector<double> weights;
  std::vector<Vector> locations;
  double sigma = 1.0;
};

using TrueModel = std::variant<GaussianNull, TwoMixture, RegressionModel, GeneralMixture>;

/// Throws std::invalid_argument when sigma, weights or dimensions are invalid.
void validate(const TrueModel& model);
int dimension(const TrueModel& model);
double noise_scale(const TrueModel& model);
std::string kind_name(const TrueModel& model);

/// Re-targets a model to dimension d. Locations shorter than d are padded
/// with zeros; gaussian-null simply takes the new dimension.
TrueModel with_dimension(const TrueModel& model, int d);

// ---- parameter state and fitted models -----------------------------------

/// Mixing measure of a fitted model: component weights and locations.
/// Symmetric fits store {theta, -theta} with weights {pi, 1 - pi}.
struct ParamState {
  std::vector<double> weights;
  std::vector<Vector> locations;

  std::size_t components() const { return locations.size(); }
};

/// pi * N(theta, sigma^2 I) + (1 - pi) * N(-theta, sigma^2 I) with pi fixed.
struct SymmetricFit {
  double weight = 0.5;
};

/// Same density with pi estimated alongside theta.
struct SymmetricUnknownWeightFit {};

/// k-component location mixture with shared known sigma. `sign_ties` pairs
/// (i, j) constrain locations[j] = -locations[i].
struct GeneralFit {
  int components = 2;
  std::vector<double> weights;
  bool weights_free = false;
  std::vector<std::pair<int, int>> sign_ties;
};

/// Y | X ~ 1/2 N(theta^T X, sigma^2) + 1/2 N(-theta^T X, sigma^2).
struct RegressionFit {};

struct FitSpec {
  std::variant<SymmetricFit, SymmetricUnknownWeightFit, GeneralFit, RegressionFit> variant;
  double sigma = 1.0;
  int dim = 1;
};

void validate(const FitSpec& fit);
std::string kind_name(const FitSpec& fit);

// ---- datasets ----------------------------------------------------------------

struct Dataset {
  Matrix points;     ///< covariates for regression data
  Vector responses;  ///< empty unless regression data
  std::uint64_t master_seed = 0;
  std::uint64_t trial_index = 0;

  bool is_regression() const { return responses.size() > 0; }
  Eigen::Index size() const { return points.rows(); }
  Eigen::Index dim() const { return points.cols(); }
};

/// Builds a dataset from explicit rows (no seed provenance).
Dataset make_dataset(const std::vector<std::vector<double>>& rows);
Dataset make_regression_dataset(const std::vector<std::vector<double>>& covariates,
                                const std::vector<double>& responses);

/// n i.i.d. draws from a gaussian-null, two-mixture or general-mixture law.
Dataset sample_mixture(const TrueModel& model, std::size_t n, Stream& stream);
Dataset sample_regression(const RegressionModel& model, std::size_t n, Stream& stream);
/// Dispatches on the model kind.
Dataset sample(const TrueModel& model, std::size_t n, Stream& stream);

/// Mixing measure of the true model (regression: {1/2: coef, 1/2: -coef}).
ParamState true_mixing_measure(const TrueModel& model);

}  // namespace emlab
