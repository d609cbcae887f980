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

#include "emlab/em_sample.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "emlab/error.hpp"

namespace emlab {

namespace {

constexpr double kExponentClamp = 700.0;
constexpr double kEmptyMass = 1e-30;

void require_data(const Dataset& data, Eigen::Index dim) {
  if (data.size() == 0) throw std::invalid_argument("empty sample");
  if (data.dim() != dim) throw std::invalid_argument("data dimension does not match parameter");
}

void require_pi(double pi) {
  if (!(pi > 0.0 && pi < 1.0)) throw std::invalid_argument("mixture weight must lie in (0, 1)");
}

void require_sigma(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("invalid scale");
}

ParamState symmetric_state(double pi, const Vector& theta) {
  return ParamState{{pi, 1.0 - pi}, {theta, -theta}};
}

}  // namespace

double half_log_odds(double pi) { return 0.5 * std::log(pi / (1.0 - pi)); }

double component_weight(double u, double pi) {
  const double exponent = std::clamp(-2.0 * (u + half_log_odds(pi)), -kExponentClamp, kExponentClamp);
  return 1.0 / (1.0 + std::exp(exponent));
}

Vector sample_em_symmetric_step(const Vector& theta, double pi, const Dataset& data, double sigma) {
  require_pi(pi);
  require_sigma(sigma);
  require_data(data, theta.size());
  const double lambda = half_log_odds(pi);
  Vector factor = data.points * theta;
  const double inv_var = 1.0 / (sigma * sigma);
  for (Eigen::Index i = 0; i < factor.size(); ++i) factor[i] = std::tanh(factor[i] * inv_var + lambda);
  return (data.points.transpose() * factor) / static_cast<double>(data.size());
}

std::pair<double, Vector> sample_em_unknown_weight_step(const Vector& theta, double pi,
                                                        const Dataset& data, double sigma) {
  require_pi(pi);
  require_sigma(sigma);
  require_data(data, theta.size());
  Vector factor = data.points * theta;
  const double inv_var = 1.0 / (sigma * sigma);
  double weight_sum = 0.0;
  for (Eigen::Index i = 0; i < factor.size(); ++i) {
    const double w = component_weight(factor[i] * inv_var, pi);
    weight_sum += w;
    factor[i] = 2.0 * w - 1.0;
  }
  const auto n = static_cast<double>(data.size());
  return {weight_sum / n, (data.points.transpose() * factor) / n};
}

RegressionDesign::RegressionDesign(const Dataset& data) {
  if (data.size() == 0) throw std::invalid_argument("empty sample");
  const Eigen::MatrixXd gram =
      (data.points.transpose() * data.points) / static_cast<double>(data.size());
  factor_.compute(gram);
  const double threshold = 1e-12 * gram.trace() / static_cast<double>(gram.rows());
  if (factor_.info() != Eigen::Success || !(gram.trace() > 0.0) ||
      factor_.vectorD().cwiseAbs().minCoeff() < threshold) {
    throw NumericError("degenerate design");
  }
}

Vector sample_em_regression_step(const Vector& theta, const Dataset& data,
                                 const RegressionDesign& design, double sigma) {
  require_sigma(sigma);
  require_data(data, theta.size());
  if (!data.is_regression()) throw std::invalid_argument("regression step needs responses");
  Vector factor = data.points * theta;
  const double inv_var = 1.0 / (sigma * sigma);
  for (Eigen::Index i = 0; i < factor.size(); ++i) {
    const double y = data.responses[i];
    factor[i] = std::tanh(y * factor[i] * inv_var) * y;
  }
  const Vector rhs = (data.points.transpose() * factor) / static_cast<double>(data.size());
  return design.solve(rhs);
}

Vector sample_em_regression_step(const Vector& theta, const Dataset& data, double sigma) {
  return sample_em_regression_step(theta, data, RegressionDesign(data), sigma);
}

void responsibilities(const Eigen::Ref<const Vector>& x, const ParamState& state, double sigma,
                      std::vector<double>& out) {
  const auto k = state.components();
  out.resize(k);
  const double inv_two_var = 0.5 / (sigma * sigma);
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < k; ++c) {
    const double w = state.weights[c];
    out[c] = w > 0.0 ? std::log(w) - (x - state.locations[c]).squaredNorm() * inv_two_var
                     : -std::numeric_limits<double>::infinity();
    top = std::max(top, out[c]);
  }
  double total = 0.0;
  for (auto& value : out) {
    value = std::exp(value - top);
    total += value;
  }
  for (auto& value : out) value /= total;
}

ParamState general_mstep(const ParamState& previous, const GeneralFit& fit,
                         const std::vector<double>& mass, const std::vector<Vector>& first,
                         double total) {
  const auto k = previous.components();
  ParamState next = previous;
  std::vector<bool> tied(k, false);
  for (const auto& [i, j] : fit.sign_ties) {
    const auto a = static_cast<std::size_t>(i);
    const auto b = static_cast<std::size_t>(j);
    tied[a] = tied[b] = true;
    const double pair_mass = mass[a] + mass[b];
    if (pair_mass < kEmptyMass) continue;
    next.locations[a] = (first[a] - first[b]) / pair_mass;
    next.locations[b] = -next.locations[a];
  }
  for (std::size_t c = 0; c < k; ++c) {
    if (tied[c] || mass[c] < kEmptyMass) continue;
    next.locations[c] = first[c] / mass[c];
  }
  if (fit.weights_free) {
    for (std::size_t c = 0; c < k; ++c) next.weights[c] = mass[c] / total;
  }
  return next;
}

ParamState sample_em_general_step(const ParamState& state, const Dataset& data, double sigma,
                                  const GeneralFit& fit) {
  require_sigma(sigma);
  if (fit.components < 2 || static_cast<int>(state.components()) < 2) {
    throw std::invalid_argument("general fit needs k >= 2");
  }
  if (static_cast<int>(state.components()) != fit.components ||
      state.weights.size() != state.locations.size()) {
    throw std::invalid_argument("component count mismatch");
  }
  require_data(data, state.locations.front().size());

  const auto k = state.components();
  const auto d = data.dim();
  std::vector<double> mass(k, 0.0);
  std::vector<Vector> first(k, Vector::Zero(d));
  std::vector<double> resp;
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    const Vector x = data.points.row(i).transpose();
    responsibilities(x, state, sigma, resp);
    for (std::size_t c = 0; c < k; ++c) {
      mass[c] += resp[c];
      first[c].noalias() += resp[c] * x;
    }
  }
  return general_mstep(state, fit, mass, first, static_cast<double>(data.size()));
}

Vector free_parameters(const FitSpec& fit, const ParamState& state) {
  if (std::holds_alternative<SymmetricFit>(fit.variant) ||
      std::holds_alternative<RegressionFit>(fit.variant)) {
    return primary_location(state);
  }
  if (std::holds_alternative<SymmetricUnknownWeightFit>(fit.variant)) {
    Vector out(state.locations.front().size() + 1);
    out[0] = state.weights.front();
    out.tail(state.locations.front().size()) = state.locations.front();
    return out;
  }
  const auto& general = std::get<GeneralFit>(fit.variant);
  const auto k = static_cast<Eigen::Index>(state.components());
  const auto d = state.locations.front().size();
  Vector out(k * d + (general.weights_free ? k : 0));
  for (Eigen::Index c = 0; c < k; ++c) out.segment(c * d, d) = state.locations[static_cast<std::size_t>(c)];
  if (general.weights_free) {
    for (Eigen::Index c = 0; c < k; ++c) out[k * d + c] = state.weights[static_cast<std::size_t>(c)];
  }
  return out;
}

ParamState initial_state(const FitSpec& fit, const EmInit& init, Stream& stream) {
  if (const auto* explicit_state = std::get_if<ParamState>(&init)) {
    ParamState state = *explicit_state;
    if (state.locations.empty()) throw std::invalid_argument("explicit init has no locations");
    for (const auto& loc : state.locations) {
      if (loc.size() != fit.dim) throw std::invalid_argument("init dimension mismatch");
    }
    if (const auto* sym = std::get_if<SymmetricFit>(&fit.variant)) {
      return symmetric_state(sym->weight, state.locations.front());
    }
    if (std::holds_alternative<RegressionFit>(fit.variant)) {
      return symmetric_state(0.5, state.locations.front());
    }
    if (std::holds_alternative<SymmetricUnknownWeightFit>(fit.variant)) {
      const double pi = state.weights.empty() ? 0.5 : state.weights.front();
      require_pi(pi);
      return symmetric_state(pi, state.locations.front());
    }
    const auto& general = std::get<GeneralFit>(fit.variant);
    if (static_cast<int>(state.components()) != general.components) {
      throw std::invalid_argument("init component count mismatch");
    }
    if (state.weights.empty()) state.weights = general.weights;
    for (const auto& [i, j] : general.sign_ties) {
      state.locations[static_cast<std::size_t>(j)] = -state.locations[static_cast<std::size_t>(i)];
    }
    return state;
  }

  const auto& random = std::get<RandomInit>(init);
  auto draw = [&](std::size_t component) {
    Vector loc(fit.dim);
    for (Eigen::Index j = 0; j < loc.size(); ++j) loc[j] = random.scale * stream.normal();
    if (component < random.centers.size()) {
      const auto& center = random.centers[component];
      if (center.size() != fit.dim) throw std::invalid_argument("init center dimension mismatch");
      loc += center;
    }
    return loc;
  };
  auto rescale = [&](Vector loc) {
    if (random.norm) {
      const double norm = loc.norm();
      if (norm > 0.0) loc *= *random.norm / norm;
    }
    return loc;
  };

  if (const auto* sym = std::get_if<SymmetricFit>(&fit.variant)) {
    return symmetric_state(sym->weight, rescale(draw(0)));
  }
  if (std::holds_alternative<RegressionFit>(fit.variant)) return symmetric_state(0.5, rescale(draw(0)));
  if (std::holds_alternative<SymmetricUnknownWeightFit>(fit.variant)) {
    const double pi = random.weight.value_or(0.5);
    require_pi(pi);
    return symmetric_state(pi, rescale(draw(0)));
  }
  const auto& general = std::get<GeneralFit>(fit.variant);
  ParamState state;
  state.weights = general.weights;
  for (int c = 0; c < general.components; ++c) state.locations.push_back(draw(static_cast<std::size_t>(c)));
  for (const auto& [i, j] : general.sign_ties) {
    state.locations[static_cast<std::size_t>(j)] = -state.locations[static_cast<std::size_t>(i)];
  }
  return state;
}

ParamState em_step(const FitSpec& fit, const ParamState& state, const Dataset& data,
                   const RegressionDesign* design) {
  if (const auto* sym = std::get_if<SymmetricFit>(&fit.variant)) {
    return symmetric_state(sym->weight,
                           sample_em_symmetric_step(primary_location(state), sym->weight, data, fit.sigma));
  }
  if (std::holds_alternative<SymmetricUnknownWeightFit>(fit.variant)) {
    auto [pi, theta] =
        sample_em_unknown_weight_step(primary_location(state), state.weights.front(), data, fit.sigma);
    return symmetric_state(pi, theta);
  }
  if (std::holds_alternative<RegressionFit>(fit.variant)) {
    const Vector next = design ? sample_em_regression_step(primary_location(state), data, *design, fit.sigma)
                               : sample_em_regression_step(primary_location(state), data, fit.sigma);
    return symmetric_state(0.5, next);
  }
  return sample_em_general_step(state, data, fit.sigma, std::get<GeneralFit>(fit.variant));
}

namespace {

double trajectory_distance(const FitSpec& fit, const ParamState& state, const Vector& reference) {
  if (std::holds_alternative<GeneralFit>(fit.variant)) {
    double largest = 0.0;
    for (const auto& loc : state.locations) largest = std::max(largest, loc.norm());
    return largest;
  }
  return (primary_location(state) - reference).norm();
}

}  // namespace

EmResult run_em(const FitSpec& fit, const Dataset& data, const EmRunConfig& cfg, Stream& stream) {
  validate(fit);
  if (!(cfg.tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (cfg.max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
  if (data.dim() != fit.dim) throw std::invalid_argument("data dimension does not match fit");
  if (std::holds_alternative<RegressionFit>(fit.variant) != data.is_regression()) {
    throw std::invalid_argument("fit family does not match dataset kind");
  }

  std::optional<RegressionDesign> design;
  if (data.is_regression()) design.emplace(data);

  EmResult result;
  ParamState state = initial_state(fit, cfg.init, stream);
  const Vector reference = cfg.reference.value_or(Vector::Zero(fit.dim));
  const bool unknown = std::holds_alternative<SymmetricUnknownWeightFit>(fit.variant);
  if (cfg.record_trajectory) {
    result.trajectory.emplace();
    result.trajectory->distance.push_back(trajectory_distance(fit, state, reference));
    if (unknown) result.trajectory->weight.push_back(state.weights.front());
  }

  Vector current = free_parameters(fit, state);
  while (result.iterations < cfg.max_iter) {
    ParamState next = em_step(fit, state, data, design ? &*design : nullptr);
    Vector next_free = free_parameters(fit, next);
    if (!next_free.allFinite()) throw NumericError("EM iterate not finite");
    ++result.iterations;
    const double change = (next_free - current).norm();
    state = std::move(next);
    current = std::move(next_free);
    if (cfg.record_trajectory) {
      result.trajectory->distance.push_back(trajectory_distance(fit, state, reference));
      if (unknown) result.trajectory->weight.push_back(state.weights.front());
    }
    if (change <= cfg.tol) {
      result.converged = true;
      break;
    }
  }
  result.params = std::move(state);
  return result;
}

}  // namespace emlab
