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

#include "emlab/theory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "emlab/quadrature.hpp"

namespace emlab::theory {

namespace {

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) throw std::invalid_argument(what);
}

void require_pi(double pi) {
  if (!(pi > 0.0 && pi < 1.0)) throw std::invalid_argument("mixture weight must lie in (0, 1)");
}

// log(pi e^u + (1 - pi) e^{-u}) without overflow.
double log_mixture(double u, double pi) {
  const double a = std::abs(u);
  return a + std::log(pi * std::exp(u - a) + (1.0 - pi) * std::exp(-u - a));
}

}  // namespace

double contraction_constant() {
  static const double p = 0.5 * (1.0 + std::erf(1.0 / std::numbers::sqrt2));
  return p;
}

double gamma_up(double theta_norm, double sigma) {
  require_positive(theta_norm, "theta norm must be positive");
  require_positive(sigma, "invalid scale");
  const double p = contraction_constant();
  return 1.0 - p + p / (1.0 + theta_norm * theta_norm / (2.0 * sigma * sigma));
}

double gamma_low(double theta_norm, double sigma) {
  require_positive(theta_norm, "theta norm must be positive");
  require_positive(sigma, "invalid scale");
  // Relative slack so that theta_norm = sqrt(5/8) sigma itself is accepted.
  if (theta_norm * theta_norm > 5.0 * sigma * sigma / 8.0 * (1.0 + 1e-12)) {
    throw std::invalid_argument("gamma_low requires ||theta||^2 <= 5 sigma^2 / 8");
  }
  return 1.0 / (1.0 + 2.0 * theta_norm * theta_norm / (sigma * sigma));
}

double unbalanced_contraction(double pi) {
  require_pi(pi);
  if (pi == 0.5) throw std::invalid_argument("balanced fit is not globally contractive");
  const double rho = std::abs(1.0 - 2.0 * pi);
  return 1.0 - rho * rho / 2.0;
}

std::vector<double> alpha_sequence(int steps) {
  if (steps < 1) throw std::invalid_argument("steps must be >= 1");
  std::vector<double> alphas{0.0};
  for (int l = 0; l < steps; ++l) alphas.push_back(alphas.back() / 3.0 + 1.0 / 6.0);
  return alphas;
}

int alpha_index_for(double eps) {
  require_positive(eps, "eps must be positive");
  return static_cast<int>(std::ceil(std::log(4.0 / eps) / std::log(3.0)));
}

EpochSchedule epoch_schedule(double n, int d, double sigma, double delta, double eps,
                             double theta0_norm) {
  require_positive(n, "n must be positive");
  require_positive(sigma, "invalid scale");
  require_positive(theta0_norm, "theta0 norm must be positive");
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  if (!(eps > 0.0 && eps < 0.25)) throw std::invalid_argument("eps must lie in (0, 1/4)");

  EpochSchedule s;
  s.n = n;
  s.d = d;
  s.sigma = sigma;
  s.delta = delta;
  s.eps = eps;
  s.theta0_norm = theta0_norm;
  s.final_epoch = alpha_index_for(eps) + 1;
  s.omega = sigma * sigma * (d + std::log((2.0 * s.final_epoch + 1.0) / delta)) / n;
  if (s.omega > 1.0) throw std::invalid_argument("sample size below theory threshold");
  s.alphas = alpha_sequence(s.final_epoch);

  const double p = contraction_constant();
  const double t0 = std::ceil((2.0 / p) * std::log(theta0_norm / (std::numbers::sqrt2 * sigma * std::sqrt(s.omega))));
  s.lengths.push_back(std::max(0LL, static_cast<long long>(t0)));
  for (int l = 1; l < s.final_epoch; ++l) {
    const double t = std::ceil(2.0 / (p * std::pow(s.omega, 2.0 * s.alphas[static_cast<std::size_t>(l) + 1])) *
                               std::log(1.0 / s.omega));
    s.lengths.push_back(static_cast<long long>(t));
  }
  long long total = 0;
  for (auto t : s.lengths) s.cumulative.push_back(total += t);
  return s;
}

double fisher_beta(double pi) {
  require_pi(pi);
  return 1.0 - 4.0 * pi * (1.0 - pi);
}

double tanh_lower_gap(double y) {
  const double y2 = y * y;
  if (std::abs(y) < 1e-2) {
    // tanh(y)/y = 1 - y^2/3 + 2y^4/15 - 17y^6/315 + 62y^8/2835 - ...
    return y2 * y2 * y2 * (2.0 / 15.0 - 17.0 / 315.0 * y2 + 62.0 / 2835.0 * y2 * y2);
  }
  return y * std::tanh(y) - (y2 - y2 * y2 / 3.0);
}

double tanh_upper_gap(double y) {
  const double y2 = y * y;
  if (std::abs(y) < 1e-2) {
    return y2 * y2 * y2 * y2 * (17.0 / 315.0 - 62.0 / 2835.0 * y2);
  }
  return (y2 - y2 * y2 / 3.0 + 2.0 * y2 * y2 * y2 / 15.0) - y * std::tanh(y);
}

TanhBounds tanh_bounds_check(double y) {
  return {tanh_lower_gap(y) >= 0.0, tanh_upper_gap(y) >= 0.0};
}

double pop_loglik(double theta_norm, double pi, double sigma, int d) {
  require_pi(pi);
  require_positive(sigma, "invalid scale");
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
  const double r = std::abs(theta_norm);
  const double scale = r / sigma;
  // With X = sigma Z: log density = -d/2 log(2 pi sigma^2) - ||Z||^2/2
  //   - r^2 / (2 sigma^2) + log(pi e^u + (1 - pi) e^{-u}),  u = r Z_1 / sigma.
  const double base = -0.5 * d * std::log(2.0 * std::numbers::pi * sigma * sigma) - 0.5 * d -
                      0.5 * scale * scale;
  if (r == 0.0) return base;
  const double mix = quadrature::expect1d([&](double z) { return log_mixture(scale * z, pi); },
                                          quadrature::rule_for_scale(scale));
  return base + mix;
}

double sample_loglik(const Vector& theta, double pi, const Dataset& data, double sigma) {
  require_pi(pi);
  require_positive(sigma, "invalid scale");
  if (data.size() == 0) throw std::invalid_argument("empty sample");
  if (data.dim() != theta.size()) throw std::invalid_argument("data dimension does not match parameter");
  const double var = sigma * sigma;
  const double d = static_cast<double>(theta.size());
  const double norm_const = -0.5 * d * std::log(2.0 * std::numbers::pi * var);
  double total = 0.0;
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    const auto x = data.points.row(i);
    const double u = x.dot(theta) / var;
    total += norm_const - 0.5 * (x.squaredNorm() + theta.squaredNorm()) / var + log_mixture(u, pi);
  }
  return total / static_cast<double>(data.size());
}

std::vector<LoglikPoint> loglik_profile(double pi, double sigma, double step) {
  require_positive(step, "grid step must be positive");
  require_positive(sigma, "invalid scale");
  const auto half = static_cast<long long>(std::llround(3.0 * sigma / step));
  std::vector<LoglikPoint> out;
  out.reserve(static_cast<std::size_t>(2 * half + 1));
  for (long long i = -half; i <= half; ++i) {
    const double theta = static_cast<double>(i) * step;
    // The log-likelihood is even in theta under the symmetric truth.
    out.push_back({theta, pop_loglik(theta, pi, sigma, 1)});
  }
  return out;
}

std::vector<double> argmax_set(const std::vector<LoglikPoint>& profile, double tolerance) {
  if (profile.empty()) return {};
  double best = profile.front().value;
  for (const auto& p : profile) best = std::max(best, p.value);
  std::vector<double> out;
  for (const auto& p : profile) {
    if (p.value >= best - tolerance * std::max(1.0, std::abs(best))) out.push_back(p.theta);
  }
  return out;
}

}  // namespace emlab::theory
