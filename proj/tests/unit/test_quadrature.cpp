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

#include "emlab/em_population.hpp"
#include "emlab/quadrature.hpp"

using namespace emlab;
using namespace emlab::quadrature;

TEST_SUITE("quadrature") {

TEST_CASE("expect1d reproduces Gaussian moments") {
  for (const Rule* rule : {&default_rule(), &fine_grid()}) {
    CHECK(expect1d([](double) { return 1.0; }, *rule) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(expect1d([](double z) { return z * z; }, *rule) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(expect1d([](double z) { return z * z * z * z; }, *rule) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(std::abs(expect1d([](double z) { return z; }, *rule)) < 1e-14);
  }
  // 2n - 1 exactness: E Z^10 = 945.
  CHECK(expect1d([](double z) { return std::pow(z, 10); }, default_rule()) == doctest::Approx(945.0).epsilon(1e-12));
}

TEST_CASE("expect2d tensor product") {
  const auto& rule = default_rule();
  CHECK(std::abs(expect2d([](double v, double y) { return v * y; }, rule)) < 1e-14);
  CHECK(expect2d([](double v, double y) { return v * v * y * y; }, rule) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(expect2d([](double v, double y) { return std::pow(v * y, 4); }, rule) == doctest::Approx(9.0).epsilon(1e-12));
}

TEST_CASE("non-finite integrand is rejected") {
  const double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_WITH_AS(expect1d([&](double z) { return z > 0 ? inf : 0.0; }, default_rule()),
                       "integrand not finite", NumericError);
  CHECK_THROWS_AS(expect2d([](double, double) { return std::nan(""); }, default_rule()), NumericError);
}

TEST_CASE("rule invariants") {
  for (const Rule* rule : {&default_rule(), &fine_grid()}) {
    double total = 0.0;
    for (double w : rule->weights()) {
      CHECK(w > 0.0);
      total += w;
    }
    CHECK(std::abs(total - 1.0) < 1e-12);
    const auto nodes = rule->nodes();
    for (std::size_t i = 1; i < nodes.size(); ++i) CHECK(nodes[i] > nodes[i - 1]);
  }
  CHECK(default_rule().size() == 128);
  CHECK(default_rule().kind() == RuleKind::gauss_hermite);
  CHECK(fine_grid().size() == 24001);
  CHECK(fine_grid().kind() == RuleKind::trapezoid_grid);
  CHECK(to_string(RuleKind::trapezoid_grid) == "trapezoid-grid");
}

TEST_CASE("Gauss-Hermite and trapezoid agree on population integrands") {
  // Where GH-128 is selected (integrand scale <= 1) the two rules agree to 1e-8.
  const auto& gh = default_rule();
  const auto& grid = fine_grid();
  for (double r : {1e-3, 0.05, 0.3, 0.7, 1.0}) {
    for (double pi : {0.1, 0.3, 0.5}) {
      CHECK(std::abs(symmetric_radial_map(r, pi, 1.0, &gh) - symmetric_radial_map(r, pi, 1.0, &grid)) < 1e-8);
    }
  }
  // Scale-selected rule against the grid across the whole range used by tests.
  for (double r : {2.0, 10.0, 100.0}) {
    CHECK(std::abs(symmetric_radial_map(r, 0.5, 1.0) - symmetric_radial_map(r, 0.5, 1.0, &grid)) < 1e-12);
    CHECK(&rule_for_scale(r) == &grid);
  }
  CHECK(&rule_for_scale(0.5) == &gh);
}

TEST_CASE("doubling the node count leaves population values unchanged") {
  const Rule gh256 = Rule::gauss_hermite(256);
  for (double r : {0.01, 0.2, 0.5, 1.0}) {
    for (double pi : {0.1, 0.5}) {
      CHECK(std::abs(symmetric_radial_map(r, pi, 1.0, &gh256) - symmetric_radial_map(r, pi, 1.0)) < 1e-9);
    }
  }
  const Rule coarse = Rule::trapezoid(12.0, 5e-4);
  for (double r : {5.0, 50.0}) {
    CHECK(std::abs(symmetric_radial_map(r, 0.3, 1.0, &coarse) - symmetric_radial_map(r, 0.3, 1.0)) < 1e-9);
  }
}

}  // TEST_SUITE
