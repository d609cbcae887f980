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

// Closed-form quantities from the convergence analysis of EM for
// over-specified symmetric mixtures.

#pragma once

#include <cstddef>
#include <vector>

#include "emlab/models.hpp"

namespace emlab::theory {

/// p = P(|Z| <= 1) + P(|Z| > 1) / 2 for Z ~ N(0, 1), from the normal CDF.
double contraction_constant();

/// Upper envelope 1 - p + p / (1 + r^2 / (2 sigma^2)) of ||M(theta)|| / ||theta||
/// for the balanced fit. Requires r > 0.
double gamma_up(double theta_norm, double sigma);

/// Lower envelope 1 / (1 + 2 r^2 / sigma^2); requires 0 < r^2 <= 5 sigma^2 / 8.
double gamma_low(double theta_norm, double sigma);

/// Global contraction factor 1 - rho^2 / 2, rho = |1 - 2 pi|, of the
/// unbalanced population operator. Rejects pi = 1/2.
double unbalanced_contraction(double pi);

/// alpha_0 = 0, alpha_{l+1} = alpha_l / 3 + 1/6 for l = 0..L-1 (L + 1 values).
std::vector<double> alpha_sequence(int steps);

/// Index from which alpha_l >= 1/4 - eps is guaranteed: ceil(log(4 / eps) / log 3).
int alpha_index_for(double eps);

struct EpochSchedule {
  double n = 0;
  int d = 0;
  double sigma = 0;
  double delta = 0;
  double eps = 0;
  double theta0_norm = 0;

  int final_epoch = 0;  ///< l_eps = ceil(log(4/eps)/log 3) + 1
  double omega = 0;     ///< sigma^2 (d + log((2 l_eps + 1) / delta)) / n
  std::vector<double> alphas;        ///< alpha_0 .. alpha_{l_eps}
  std::vector<long long> lengths;    ///< t_0 .. t_{l_eps - 1}
  std::vector<long long> cumulative; ///< T_0 .. T_{l_eps - 1}
};

/// Epoch lengths of the localisation argument. Throws
/// std::invalid_argument("sample size below theory threshold") when omega > 1.
EpochSchedule epoch_schedule(double n, int d, double sigma, double delta, double eps,
                             double theta0_norm);

/// Fisher information at theta* = 0 of the (pi, 1 - pi) fit: 1 - 4 pi (1 - pi).
double fisher_beta(double pi);

struct TanhBounds {
  bool lower_ok;
  bool upper_ok;
};

/// Checks y tanh(y) >= y^2 - y^4/3 and y tanh(y) <= y^2 - y^4/3 + 2 y^6/15.
TanhBounds tanh_bounds_check(double y);

/// Signed gaps y tanh y - (y^2 - y^4/3) and (y^2 - y^4/3 + 2y^6/15) - y tanh y.
/// Near zero both are evaluated from the Taylor series of tanh(y)/y so
/// rounding cannot flip their sign.
double tanh_lower_gap(double y);
double tanh_upper_gap(double y);

/// Population log-likelihood of pi N(theta, sigma^2 I) + (1-pi) N(-theta, sigma^2 I)
/// under N(0, sigma^2 I_d) data. Depends on theta only through ||theta||.
double pop_loglik(double theta_norm, double pi, double sigma, int d = 1);

/// Average log mixture density over the sample.
double sample_loglik(const Vector& theta, double pi, const Dataset& data, double sigma);

struct LoglikPoint {
  double theta;
  double value;
};

/// pop_loglik on the grid -3 sigma, -3 sigma + step, ..., 3 sigma (d = 1, signed theta).
std::vector<LoglikPoint> loglik_profile(double pi, double sigma, double step = 1e-3);

/// Grid points whose value is within `tolerance` of the grid maximum.
std::vector<double> argmax_set(const std::vector<LoglikPoint>& profile, double tolerance = 1e-12);

}  // namespace emlab::theory
