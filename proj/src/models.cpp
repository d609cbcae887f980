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

#include "emlab/models.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace emlab {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_sigma(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("invalid scale");
}

void require_simplex(const std::vector<double>& weights) {
  if (weights.empty()) throw std::invalid_argument("empty weight vector");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("negative mixture weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("mixture weights must sum to 1");
}

Vector pad(const Vector& v, int d) {
  if (v.size() > d) throw std::invalid_argument("location longer than target dimension");
  Vector out = Vector::Zero(d);
  out.head(v.size()) = v;
  return out;
}

void fill_normal(Eigen::Ref<Eigen::RowVectorXd> row, Stream& stream) {
  for (Eigen::Index j = 0; j < row.size(); ++j) row[j] = stream.normal();
}

}  // namespace

void validate(const TrueModel& model) {
  std::visit(Overloaded{
                 [](const GaussianNull& m) {
                   require_sigma(m.sigma);
                   if (m.dim < 1) throw std::invalid_argument("dimension must be >= 1");
                 },
                 [](const TwoMixture& m) {
                   require_sigma(m.sigma);
                   if (m.location.size() < 1) throw std::invalid_argument("dimension must be >= 1");
                   if (!(m.weight > 0.0 && m.weight < 1.0)) {
                     throw std::invalid_argument("mixture weight must lie in (0, 1)");
                   }
                 },
                 [](const RegressionModel& m) {
                   require_sigma(m.sigma);
                   if (m.coef.size() < 1) throw std::invalid_argument("dimension must be >= 1");
                 },
                 [](const GeneralMixture& m) {
                   require_sigma(m.sigma);
                   require_simplex(m.weights);
                   if (m.locations.size() != m.weights.size()) {
                     throw std::invalid_argument("weights and locations differ in length");
                   }
                   const auto d = m.locations.front().size();
                   if (d < 1) throw std::invalid_argument("dimension must be >= 1");
                   for (const auto& loc : m.locations) {
                     if (loc.size() != d) throw std::invalid_argument("location dimensions differ");
                   }
                 },
             },
             model);
}

int dimension(const TrueModel& model) {
  return std::visit(Overloaded{
                        [](const GaussianNull& m) { return m.dim; },
                        [](const TwoMixture& m) { return static_cast<int>(m.location.size()); },
                        [](const RegressionModel& m) { return static_cast<int>(m.coef.size()); },
                        [](const GeneralMixture& m) {
                          return m.locations.empty() ? 0 : static_cast<int>(m.locations.front().size());
                        },
                    },
                    model);
}

double noise_scale(const TrueModel& model) {
  return std::visit([](const auto& m) { return m.sigma; }, model);
}

std::string kind_name(const TrueModel& model) {
  return std::visit(Overloaded{
                        [](const GaussianNull&) { return std::string("gaussian-null"); },
                        [](const TwoMixture&) { return std::string("two-mixture"); },
                        [](const RegressionModel&) { return std::string("regression"); },
                        [](const GeneralMixture&) { return std::string("general-mixture"); },
                    },
                    model);
}

TrueModel with_dimension(const TrueModel& model, int d) {
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
  return std::visit(Overloaded{
                        [d](GaussianNull m) -> TrueModel {
                          m.dim = d;
                          return m;
                        },
                        [d](TwoMixture m) -> TrueModel {
                          m.location = pad(m.location, d);
                          return m;
                        },
                        [d](RegressionModel m) -> TrueModel {
                          m.coef = pad(m.coef, d);
                          return m;
                        },
                        [d](GeneralMixture m) -> TrueModel {
                          for (auto& loc : m.locations) loc = pad(loc, d);
                          return m;
                        },
                    },
                    model);
}

void validate(const FitSpec& fit) {
  require_sigma(fit.sigma);
  if (fit.dim < 1) throw std::invalid_argument("dimension must be >= 1");
  std::visit(Overloaded{
                 [](const SymmetricFit& f) {
                   if (!(f.weight > 0.0 && f.weight < 1.0)) {
                     throw std::invalid_argument("mixture weight must lie in (0, 1)");
                   }
                 },
                 [](const SymmetricUnknownWeightFit&) {},
                 [](const GeneralFit& f) {
                   if (f.components < 2) throw std::invalid_argument("general fit needs k >= 2");
                   if (static_cast<int>(f.weights.size()) != f.components) {
                     throw std::invalid_argument("general fit needs one weight per component");
                   }
                   require_simplex(f.weights);
                   for (const auto& [i, j] : f.sign_ties) {
                     if (i < 0 || j < 0 || i >= f.components || j >= f.components || i == j) {
                       throw std::invalid_argument("invalid sign tie");
                     }
                   }
                 },
                 [](const RegressionFit&) {},
             },
             fit.variant);
}

std::string kind_name(const FitSpec& fit) {
  return std::visit(Overloaded{
                        [](const SymmetricFit& f) {
                          return std::string(f.weight == 0.5 ? "balanced" : "unbalanced");
                        },
                        [](const SymmetricUnknownWeightFit&) { return std::string("unknown-weight"); },
                        [](const GeneralFit&) { return std::string("general"); },
                        [](const RegressionFit&) { return std::string("regression"); },
                    },
                    fit.variant);
}

Dataset make_dataset(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw std::invalid_argument("empty sample");
  const auto d = rows.front().size();
  Dataset data;
  data.points.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != d) throw std::invalid_argument("rows differ in dimension");
    for (std::size_t j = 0; j < d; ++j) {
      data.points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return data;
}

Dataset make_regression_dataset(const std::vector<std::vector<double>>& covariates,
                                const std::vector<double>& responses) {
  if (covariates.size() != responses.size()) {
    throw std::invalid_argument("covariates and responses differ in length");
  }
  Dataset data = make_dataset(covariates);
  data.responses = Eigen::Map<const Vector>(responses.data(), static_cast<Eigen::Index>(responses.size()));
  return data;
}

Dataset sample_mixture(const TrueModel& model, std::size_t n, Stream& stream) {
  if (n == 0) throw std::invalid_argument("empty sample");
  validate(model);
  const int d = dimension(model);
  Dataset data;
  data.master_seed = stream.master_seed();
  data.trial_index = stream.trial_index();
  data.points.resize(static_cast<Eigen::Index>(n), d);

  std::visit(Overloaded{
                 [&](const GaussianNull& m) {
                   for (Eigen::Index i = 0; i < data.points.rows(); ++i) {
                     fill_normal(data.points.row(i), stream);
                   }
                   data.points *= m.sigma;
                 },
                 [&](const TwoMixture& m) {
                   for (Eigen::Index i = 0; i < data.points.rows(); ++i) {
                     const double sign = stream.uniform() < m.weight ? 1.0 : -1.0;
                     fill_normal(data.points.row(i), stream);
                     data.points.row(i) = m.sigma * data.points.row(i) + sign * m.location.transpose();
                   }
                 },
                 [&](const RegressionModel&) {
                   throw std::invalid_argument("use sample_regression for regression models");
                 },
                 [&](const GeneralMixture& m) {
                   for (Eigen::Index i = 0; i < data.points.rows(); ++i) {
                     const double u = stream.uniform();
                     std::size_t k = 0;
                     double cumulative = m.weights[0];
                     while (u >= cumulative && k + 1 < m.weights.size()) cumulative += m.weights[++k];
                     fill_normal(data.points.row(i), stream);
                     data.points.row(i) = m.sigma * data.points.row(i) + m.locations[k].transpose();
                   }
                 },
             },
             model);
  return data;
}

Dataset sample_regression(const RegressionModel& model, std::size_t n, Stream& stream) {
  if (n == 0) throw std::invalid_argument("empty sample");
  validate(TrueModel{model});
  const auto d = model.coef.size();
  Dataset data;
  data.master_seed = stream.master_seed();
  data.trial_index = stream.trial_index();
  data.points.resize(static_cast<Eigen::Index>(n), d);
  data.responses.resize(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < data.points.rows(); ++i) {
    fill_normal(data.points.row(i), stream);
    data.responses[i] = data.points.row(i).dot(model.coef) + model.sigma * stream.normal();
  }
  return data;
}

Dataset sample(const TrueModel& model, std::size_t n, Stream& stream) {
  if (const auto* regression = std::get_if<RegressionModel>(&model)) {
    return sample_regression(*regression, n, stream);
  }
  return sample_mixture(model, n, stream);
}

ParamState true_mixing_measure(const TrueModel& model) {
  return std::visit(Overloaded{
                        [](const GaussianNull& m) {
                          return ParamState{{1.0}, {Vector::Zero(m.dim)}};
                        },
                        [](const TwoMixture& m) {
                          return ParamState{{m.weight, 1.0 - m.weight}, {m.location, -m.location}};
                        },
                        [](const RegressionModel& m) {
                          return ParamState{{0.5, 0.5}, {m.coef, -m.coef}};
                        },
                        [](const GeneralMixture& m) { return ParamState{m.weights, m.locations}; },
                    },
                    model);
}

}  // namespace emlab
