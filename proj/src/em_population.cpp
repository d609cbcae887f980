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

#include "emlab/em_population.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "emlab/em_sample.hpp"

namespace emlab {

namespace {

using quadrature::expect1d;
using quadrature::Rule;

constexpr double kTrajectoryFloor = 1e-12;

void require_pi(double pi) {
  if (!(pi > 0.0 && pi < 1.0)) throw std::invalid_argument("mixture weight must lie in (0, 1)");
}

void require_sigma(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("invalid scale");
}

// 2 E[f(X); X > 0] for X ~ N(0, 1), by the trapezoid rule in s = log x.
// The substitution removes the kink of tanh(a x) x at scale 1/a, so the
// rule is uniformly accurate in a.
template <class F>
double half_line_expect(F f) {
  constexpr double kStep = 0.1;
  const double lo = std::log(1e-9);
  const int count = static_cast<int>((std::log(9.5) - lo) / kStep) + 1;
  double total = 0.0;
  for (int i = 0; i < count; ++i) {
    const double x = std::exp(lo + i * kStep);
    total += f(x) * x * std::exp(-0.5 * x * x);
  }
  return 2.0 * kStep * total / std::sqrt(2.0 * std::numbers::pi);
}

Vector along(const Vector& theta, double norm, double magnitude) {
  return theta * (magnitude / norm);
}

}  // namespace

double symmetric_radial_map(double r, double pi, double sigma, const Rule* rule) {
  require_sigma(sigma);
  require_pi(pi);
  if (!(r >= 0.0)) throw std::invalid_argument("radius must be non-negative");
  if (r == 0.0) return 0.0;
  const double scale = r / sigma;
  const double lambda = half_log_odds(pi);
  const Rule& q = rule ? *rule : quadrature::rule_for_scale(scale);
  return sigma * expect1d([&](double v) { return v * std::tanh(scale * v + lambda); }, q);
}

Vector pop_em_symmetric(const Vector& theta, double pi, double sigma, const Rule* rule) {
  require_sigma(sigma);
  require_pi(pi);
  const double r = theta.norm();
  if (r == 0.0) return Vector::Zero(theta.size());
  return along(theta, r, symmetric_radial_map(r, pi, sigma, rule));
}

WeightedLocation pop_em_unknown_weight(const Vector& theta, double pi, double sigma,
                                       const Rule* rule) {
  require_sigma(sigma);
  require_pi(pi);
  const double r = theta.norm();
  if (r == 0.0) return {pi, Vector::Zero(theta.size())};
  const double scale = r / sigma;
  const double lambda = half_log_odds(pi);
  const Rule& q = rule ? *rule : quadrature::rule_for_scale(scale);
  // E[w] = (1 + E[tanh(u + lambda)]) / 2 with u = r V / sigma.
  const double mean_tanh = expect1d([&](double v) { return std::tanh(scale * v + lambda); }, q);
  const double radial = sigma * expect1d([&](double v) { return v * std::tanh(scale * v + lambda); }, q);
  return {0.5 * (1.0 + mean_tanh), along(theta, r, radial)};
}

double regression_radial_map(double r, RegressionRoute route) {
  if (!(r >= 0.0)) throw std::invalid_argument("radius must be non-negative");
  if (r == 0.0) return 0.0;
  if (route == RegressionRoute::automatic) route = RegressionRoute::nested;
  if (route == RegressionRoute::tensor) {
    return quadrature::expect2d(
        [r](double v, double y) {
          const double product = v * y;
          return product * std::tanh(r * product);
        },
        quadrature::default_rule());
  }
  // The integrand is even in V and in Y, so both axes fold onto (0, inf).
  return half_line_expect([r](double v) {
    return v * half_line_expect([a = r * v](double y) { return y * std::tanh(a * y); });
  });
}

Vector pop_em_regression(const Vector& theta, RegressionRoute route) {
  const double r = theta.norm();
  if (r == 0.0) return Vector::Zero(theta.size());
  return along(theta, r, regression_radial_map(r, route));
}

TrajectoryRecord pop_trajectory(const PopOperatorSpec& spec, const Vector& theta0, int steps) {
  if (steps < 1) throw std::invalid_argument("steps must be >= 1");
  validate(spec.fit);
  if (theta0.size() != spec.fit.dim) throw std::invalid_argument("theta0 dimension mismatch");

  TrajectoryRecord record;
  Vector theta = theta0;
  double weight = spec.initial_weight;
  const bool unknown = std::holds_alternative<SymmetricUnknownWeightFit>(spec.fit.variant);
  if (unknown) require_pi(weight);

  record.distance.push_back(theta.norm());
  if (unknown) record.weight.push_back(weight);

  for (int t = 0; t < steps && theta.norm() >= kTrajectoryFloor; ++t) {
    if (const auto* sym = std::get_if<SymmetricFit>(&spec.fit.variant)) {
      theta = pop_em_symmetric(theta, sym->weight, spec.fit.sigma, spec.rule);
    } else if (unknown) {
      auto next = pop_em_unknown_weight(theta, weight, spec.fit.sigma, spec.rule);
      weight = next.weight;
      theta = std::move(next.location);
    } else if (std::holds_alternative<RegressionFit>(spec.fit.variant)) {
      theta = pop_em_regression(theta);
    } else {
      throw std::invalid_argument("population operator not available for general fits");
    }
    record.distance.push_back(theta.norm());
    if (unknown) record.weight.push_back(weight);
  }
  return record;
}

ParamState pop_em_general_1d(const ParamState& state, const GeneralFit& fit, double sigma,
                             const GeneralMixture& truth) {
  require_sigma(sigma);
  validate(TrueModel{truth});
  const auto k = state.components();
  if (static_cast<int>(k) != fit.components) throw std::invalid_argument("component count mismatch");
  for (const auto& loc : state.locations) {
    if (loc.size() != 1) throw std::invalid_argument("general population EM is one-dimensional");
  }
  if (truth.locations.front().size() != 1) {
    throw std::invalid_argument("general population EM is one-dimensional");
  }

  // Sharpest logistic transition between two fitted components, in units
  // of the true component's standard deviation.
  double spread = 0.0;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      spread = std::max(spread, std::abs(state.locations[a][0] - state.locations[b][0]));
    }
  }
  const auto& rule = quadrature::rule_for_scale(spread * truth.sigma / (sigma * sigma));

  std::vector<double> mass(k, 0.0);
  std::vector<Vector> first(k, Vector::Zero(1));
  std::vector<double> resp;
  Vector x(1);
  for (std::size_t j = 0; j < truth.weights.size(); ++j) {
    if (truth.weights[j] == 0.0) continue;
    const double mu = truth.locations[j][0];
    const auto nodes = rule.nodes();
    const auto weights = rule.weights();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      x[0] = mu + truth.sigma * nodes[i];
      responsibilities(x, state, sigma, resp);
      const double w = truth.weights[j] * weights[i];
      for (std::size_t c = 0; c < k; ++c) {
        mass[c] += w * resp[c];
        first[c][0] += w * resp[c] * x[0];
      }
    }
  }
  return general_mstep(state, fit, mass, first, 1.0);
}

std::vector<ParamState> pop_general_trajectory_1d(const ParamState& start, const GeneralFit& fit,
                                                  double sigma, const GeneralMixture& truth,
                                                  int steps) {
  if (steps < 1) throw std::invalid_argument("steps must be >= 1");
  std::vector<ParamState> out{start};
  out.reserve(static_cast<std::size_t>(steps) + 1);
  for (int t = 0; t < steps; ++t) out.push_back(pop_em_general_1d(out.back(), fit, sigma, truth));
  return out;
}

}  // namespace emlab
