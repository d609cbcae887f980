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

// Sample EM operators and complete EM runs.

#pragma once

#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Cholesky>

#include "emlab/em_population.hpp"
#include "emlab/models.hpp"
#include "emlab/random.hpp"

namespace emlab {

/// Posterior probability of the +theta component given u = theta^T x / sigma^2:
///   w = 1 / (1 + ((1 - pi) / pi) exp(-2u)),
/// evaluated with the exponent clamped to [-700, 700]. u = 0 gives w = pi.
double component_weight(double u, double pi);

/// Half log-odds lambda = log(pi / (1 - pi)) / 2, so that 2w - 1 = tanh(u + lambda).
double half_log_odds(double pi);

/// M_n(theta) = (1/n) sum_i (2 w_theta(X_i) - 1) X_i.
Vector sample_em_symmetric_step(const Vector& theta, double pi, const Dataset& data, double sigma);

/// (M_{1,n}, M_{2,n}) for the unknown-weight symmetric fit.
std::pair<double, Vector> sample_em_unknown_weight_step(const Vector& theta, double pi,
                                                        const Dataset& data, double sigma = 1.0);

/// Factorised normalised Gram matrix (1/n) sum_i X_i X_i^T of a regression
/// dataset. Throws NumericError("degenerate design") when a pivot falls
/// below 1e-12 * trace / d.
class RegressionDesign {
 public:
  explicit RegressionDesign(const Dataset& data);
  Vector solve(const Vector& rhs) const { return factor_.solve(rhs); }

 private:
  Eigen::LDLT<Eigen::MatrixXd> factor_;
};

/// theta' = ((1/n) sum X X^T)^{-1} (1/n) sum (2 w_theta(X, Y) - 1) X Y.
Vector sample_em_regression_step(const Vector& theta, const Dataset& data,
                                 const RegressionDesign& design, double sigma = 1.0);
Vector sample_em_regression_step(const Vector& theta, const Dataset& data, double sigma = 1.0);

/// M-step shared by the sample and population general-k operators: given
/// per-component responsibility mass and first moments (sum r_k x), returns
/// the updated state. Sign-tied pairs (i, j) get
/// theta_i = (first_i - first_j) / (mass_i + mass_j), theta_j = -theta_i.
/// Components (or tied pairs) with mass below 1e-30 keep their location.
ParamState general_mstep(const ParamState& previous, const GeneralFit& fit,
                         const std::vector<double>& mass, const std::vector<Vector>& first,
                         double total);

/// Log-domain responsibilities of one point, written into `out`.
void responsibilities(const Eigen::Ref<const Vector>& x, const ParamState& state, double sigma,
                      std::vector<double>& out);

/// One EM step for a general k-component location mixture.
ParamState sample_em_general_step(const ParamState& state, const Dataset& data, double sigma,
                                  const GeneralFit& fit);

/// Random initialisation: each location is centers[k] (or 0) plus
/// scale * N(0, I). When `norm` is set the single location of a symmetric
/// or regression fit is rescaled to that Euclidean norm.
struct RandomInit {
  double scale = 1.0;
  std::optional<double> norm;
  /// Starting weight for unknown-weight fits.
  std::optional<double> weight;
  std::vector<Vector> centers;
};

using EmInit = std::variant<ParamState, RandomInit>;

struct EmRunConfig {
  double tol = 1e-8;
  int max_iter = 100000;
  EmInit init = RandomInit{};
  bool record_trajectory = false;
  /// Point trajectory distances are measured from; the origin when unset.
  std::optional<Vector> reference;
};

struct EmResult {
  ParamState params;
  int iterations = 0;
  bool converged = false;
  std::optional<TrajectoryRecord> trajectory;
};

/// Free parameters stacked into one vector (the stopping rule compares these).
Vector free_parameters(const FitSpec& fit, const ParamState& state);

/// Initial state for `fit` from the configured init.
ParamState initial_state(const FitSpec& fit, const EmInit& init, Stream& stream);

/// One EM step for whichever family `fit` describes.
ParamState em_step(const FitSpec& fit, const ParamState& state, const Dataset& data,
                   const RegressionDesign* design = nullptr);

/// Iterates the step operator from the configured init until the Euclidean
/// change of the free parameters is <= tol or max_iter steps were taken.
EmResult run_em(const FitSpec& fit, const Dataset& data, const EmRunConfig& cfg, Stream& stream);

/// Symmetric / regression fits: the location of the +theta component.
inline const Vector& primary_location(const ParamState& state) { return state.locations.front(); }

}  // namespace emlab
