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

#include <doctest.h>

#include <cmath>
#include <limits>

#include <Eigen/LU>

#include "emlab/em_sample.hpp"
#include "test_support.hpp"

using namespace emlab;
using emlab::test::bisect;
using emlab::test::line_data;
using emlab::test::vec;

namespace {

Dataset null_data(std::size_t n, int d, std::uint64_t trial) {
  Stream s = derive_stream(77, trial);
  return sample(GaussianNull{1.0, d}, n, s);
}

}  // namespace

TEST_SUITE("em_sample") {

TEST_CASE("weight function") {
  CHECK(component_weight(0.0, 0.3) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(component_weight(1e6, 0.3) == 1.0);
  CHECK(component_weight(-1e6, 0.3) == doctest::Approx(0.0).epsilon(1e-300));
  CHECK(2 * component_weight(0.7, 0.2) - 1 == doctest::Approx(std::tanh(0.7 + half_log_odds(0.2))).epsilon(1e-14));
}

TEST_CASE("symmetric step examples") {
  const auto data = line_data({0.5, 1.5, -0.2, 2.0});
  const double mean = (0.5 + 1.5 - 0.2 + 2.0) / 4;
  CHECK(sample_em_symmetric_step(vec({0.0}), 0.3, data, 1.0)[0] == doctest::Approx(-0.4 * mean).epsilon(1e-14));
  CHECK(sample_em_symmetric_step(vec({0.0}), 0.5, data, 1.0)[0] == 0.0);
  CHECK(sample_em_symmetric_step(vec({1.0}), 0.5, line_data({1.0, -1.0}), 1.0)[0] ==
        doctest::Approx(std::tanh(1.0)).epsilon(1e-15));

  const double root = bisect([](double t) { return 2 * std::tanh(2 * t) - t; }, 0.5, 3.0);
  CHECK(root == doctest::Approx(1.9986).epsilon(1e-4));
  CHECK(sample_em_symmetric_step(vec({root}), 0.5, line_data({2.0, -2.0}), 1.0)[0] ==
        doctest::Approx(root).epsilon(1e-13));
  CHECK_THROWS_AS(sample_em_symmetric_step(vec({1.0, 0.0}), 0.5, data, 1.0), std::invalid_argument);
}

TEST_CASE("unknown-weight step examples") {
  const auto data = line_data({0.5, 1.5, -0.2, 2.0});
  const auto [pi0, theta0] = sample_em_unknown_weight_step(vec({0.0}), 0.3, data);
  CHECK(pi0 == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(theta0[0] == doctest::Approx(-0.4 * 0.95).epsilon(1e-14));

  const auto [pi1, theta1] = sample_em_unknown_weight_step(vec({0.8}), 0.3, line_data({1.3}));
  CHECK(pi1 == doctest::Approx(component_weight(0.8 * 1.3, 0.3)).epsilon(1e-15));
  CHECK(pi1 > 0.0);
  CHECK(pi1 < 1.0);
  CHECK(theta1[0] == doctest::Approx((2 * pi1 - 1) * 1.3).epsilon(1e-14));

  const auto [pi2, theta2] = sample_em_unknown_weight_step(vec({0.0}), 0.5, line_data({0.9, -0.9}));
  CHECK(pi2 == 0.5);
  CHECK(theta2[0] == 0.0);
}

TEST_CASE("regression step") {
  const auto data = make_regression_dataset({{1.0}, {1.0}}, {2.0, -2.0});
  CHECK(sample_em_regression_step(vec({1.0}), data)[0] == doctest::Approx(2 * std::tanh(2.0)).epsilon(1e-14));
  CHECK(sample_em_regression_step(vec({0.0}), data)[0] == 0.0);

  Stream s = derive_stream(5, 5);
  const auto random = sample(RegressionModel{vec({0.0, 0.0, 0.0}), 1.0}, 300, s);
  CHECK(sample_em_regression_step(Vector::Zero(3), random).norm() == 0.0);
  // Direct normal-equation oracle for a nonzero theta.
  const Vector theta = vec({0.3, -0.1, 0.2});
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(3, 3);
  Vector rhs = Vector::Zero(3);
  for (Eigen::Index i = 0; i < random.size(); ++i) {
    const Vector x = random.points.row(i).transpose();
    const double y = random.responses[i];
    gram += x * x.transpose();
    rhs += std::tanh(y * x.dot(theta)) * y * x;
  }
  const Vector oracle = gram.partialPivLu().solve(rhs);
  CHECK((sample_em_regression_step(theta, random) - oracle).norm() < 1e-12);

  const auto degenerate = make_regression_dataset({{1.0, 2.0}, {2.0, 4.0}, {-1.0, -2.0}}, {1.0, 0.5, 0.3});
  CHECK_THROWS_WITH_AS(sample_em_regression_step(vec({0.1, 0.1}), degenerate), "degenerate design", NumericError);
}

TEST_CASE("general step") {
  const auto data = null_data(500, 2, 1);
  const GeneralFit tied{2, {0.5, 0.5}, false, {{0, 1}}};
  const Vector theta = vec({0.4, -0.3});
  const auto next = sample_em_general_step({{0.5, 0.5}, {theta, -theta}}, data, 1.0, tied);
  const Vector reference = sample_em_symmetric_step(theta, 0.5, data, 1.0);
  CHECK((next.locations[0] - reference).norm() < 1e-13);
  CHECK((next.locations[1] + reference).norm() < 1e-13);

  const auto constant = line_data({2.5, 2.5, 2.5});
  const GeneralFit three{3, {0.2, 0.3, 0.5}, true, {}};
  const auto collapsed = sample_em_general_step({{0.2, 0.3, 0.5}, {vec({-1.0}), vec({0.0}), vec({4.0})}}, constant,
                                                1.0, three);
  for (const auto& loc : collapsed.locations) CHECK(loc[0] == doctest::Approx(2.5).epsilon(1e-14));

  // Far-away data: finite responsibilities, empty components keep their place.
  const auto far = line_data({1e6, 1e6 + 1});
  const GeneralFit two{2, {0.5, 0.5}, true, {}};
  const auto stable = sample_em_general_step({{0.5, 0.5}, {vec({0.0}), vec({-1e8})}}, far, 1.0, two);
  for (const auto& loc : stable.locations) CHECK(std::isfinite(loc[0]));
  for (double w : stable.weights) CHECK(std::isfinite(w));
  CHECK(stable.locations[1][0] == -1e8);

  CHECK_THROWS_AS(sample_em_general_step({{1.0}, {vec({0.0})}}, far, 1.0, GeneralFit{1, {1.0}, false, {}}),
                  std::invalid_argument);
}

TEST_CASE("two free locations with fixed weights centre the mixture") {
  const auto data = null_data(10000, 1, 2);
  EmRunConfig cfg;
  cfg.max_iter = 5000;
  Stream s = derive_stream(77, 1000);
  const FitSpec fit{GeneralFit{2, {0.3, 0.7}, false, {}}, 1.0, 1};
  const auto result = run_em(fit, data, cfg, s);
  const auto& loc = result.params.locations;
  CHECK(std::abs(0.3 * loc[0][0] + 0.7 * loc[1][0]) <= 0.05);
}

TEST_CASE("run_em examples") {
  EmRunConfig cfg;
  cfg.init = ParamState{{}, {vec({0.5})}};
  Stream s = derive_stream(1, 1);
  const FitSpec balanced{SymmetricFit{0.5}, 1.0, 1};
  const auto data = line_data({1.5, -1.5});
  const auto result = run_em(balanced, data, cfg, s);
  CHECK(result.converged);
  const double theta = result.params.locations[0][0];
  CHECK(std::abs(theta - sample_em_symmetric_step(vec({theta}), 0.5, data, 1.0)[0]) <= cfg.tol);
  CHECK(theta == doctest::Approx(1.5 * std::tanh(1.5 * theta)).epsilon(1e-6));

  const FitSpec unbalanced{SymmetricFit{0.3}, 1.0, 1};
  EmRunConfig random;
  const auto big = null_data(10000, 1, 3);
  const auto fast = run_em(unbalanced, big, random, s);
  CHECK(fast.converged);
  CHECK(fast.iterations <= 500);

  EmRunConfig once;
  once.max_iter = 1;
  CHECK(run_em(balanced, big, once, s).iterations == 1);
  once.max_iter = 0;
  CHECK_THROWS_AS(run_em(balanced, big, once, s), std::invalid_argument);
}

TEST_CASE("fixed-point consistency of converged runs") {
  for (std::uint64_t trial = 0; trial < 10; ++trial) {
    const auto data = null_data(2000, 2, 100 + trial);
    Stream s = derive_stream(3, trial);
    for (const FitSpec& fit : {FitSpec{SymmetricFit{0.3}, 1.0, 2}, FitSpec{SymmetricUnknownWeightFit{}, 1.0, 2},
                               FitSpec{GeneralFit{3, {0.2, 0.3, 0.5}, true, {}}, 1.0, 2}}) {
      EmRunConfig cfg;
      cfg.max_iter = 20000;
      const auto result = run_em(fit, data, cfg, s);
      if (!result.converged) continue;
      const auto again = em_step(fit, result.params, data);
      CHECK((free_parameters(fit, again) - free_parameters(fit, result.params)).norm() <= 2 * cfg.tol);
    }
  }
}

TEST_CASE("sign equivariance of balanced runs") {
  const auto data = null_data(1000, 3, 4);
  const FitSpec fit{SymmetricFit{0.5}, 1.0, 3};
  const Vector start = vec({0.9, -0.4, 0.2});
  EmRunConfig plus;
  plus.init = ParamState{{}, {start}};
  EmRunConfig minus;
  minus.init = ParamState{{}, {Vector(-start)}};
  Stream s = derive_stream(1, 2);
  const auto a = run_em(fit, data, plus, s);
  const auto b = run_em(fit, data, minus, s);
  CHECK(a.iterations == b.iterations);
  CHECK((a.params.locations[0] + b.params.locations[0]).norm() == 0.0);
}

TEST_CASE("balanced trajectories are non-expansive past sqrt(2) sigma") {
  for (int d : {1, 2}) {
    const std::size_t n = 4000;
    const auto data = null_data(n, d, 200 + static_cast<std::uint64_t>(d));
    EmRunConfig cfg;
    cfg.max_iter = 3000;
    cfg.record_trajectory = true;
    Vector start = Vector::Zero(d);
    start[0] = 3.0;
    cfg.init = ParamState{{}, {start}};
    Stream s = derive_stream(1, 3);
    const auto result = run_em(FitSpec{SymmetricFit{0.5}, 1.0, d}, data, cfg, s);
    const auto& dist = result.trajectory->distance;
    const double floor = 2 * std::pow(static_cast<double>(d) / n, 0.25);
    std::size_t t = 0;
    while (t < dist.size() && dist[t] > std::sqrt(2.0)) ++t;
    REQUIRE(t < dist.size());
    for (; t + 1 < dist.size(); ++t) CHECK(dist[t + 1] <= std::max(dist[t], floor));
  }
}

TEST_CASE("initial states") {
  Stream s = derive_stream(9, 9);
  const FitSpec unknown{SymmetricUnknownWeightFit{}, 1.0, 2};
  const auto state = initial_state(unknown, RandomInit{1.0, 0.03, 0.1, {}}, s);
  CHECK(state.weights[0] == 0.1);
  CHECK(state.locations[0].norm() == doctest::Approx(0.03).epsilon(1e-14));
  CHECK((state.locations[1] + state.locations[0]).norm() == 0.0);

  const FitSpec tied{GeneralFit{3, {0.25, 0.25, 0.5}, false, {{0, 1}}}, 1.0, 1};
  const auto g = initial_state(tied, RandomInit{1.0, std::nullopt, std::nullopt, {vec({0.0}), vec({0.0}), vec({10.0})}}, s);
  CHECK(g.locations[1][0] == -g.locations[0][0]);
  CHECK(std::abs(g.locations[2][0] - 10.0) < 6.0);
}

}  // TEST_SUITE
