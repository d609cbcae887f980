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
#include <set>

#include "emlab/models.hpp"
#include "test_support.hpp"

using namespace emlab;
using emlab::test::vec;

namespace {

struct Moments {
  double mean = 0;
  double var = 0;
  double second = 0;
};

Moments column_moments(const Dataset& data, Eigen::Index col = 0) {
  const auto x = data.points.col(col);
  Moments m;
  m.mean = x.mean();
  m.second = x.squaredNorm() / static_cast<double>(x.size());
  m.var = m.second - m.mean * m.mean;
  return m;
}

}  // namespace

TEST_SUITE("models") {

TEST_CASE("gaussian-null sampler moments") {
  Stream s = derive_stream(7, 0);
  const auto data = sample_mixture(GaussianNull{1.0, 1}, 1'000'000, s);
  const auto m = column_moments(data);
  CHECK(std::abs(m.mean) <= 0.004);
  CHECK(m.var >= 0.99);
  CHECK(m.var <= 1.01);
  CHECK(data.master_seed == 7);
  CHECK(data.trial_index == 0);
}

TEST_CASE("two-mixture sampler moments") {
  Stream s = derive_stream(7, 1);
  const auto data = sample_mixture(TwoMixture{vec({5.0}), 0.5, 1.0}, 1'000'000, s);
  CHECK(column_moments(data).second == doctest::Approx(26.0).epsilon(0.2 / 26.0));
  // Unbalanced weight: mean (2 pi - 1) theta*, SE about 5e-3.
  Stream s2 = derive_stream(7, 2);
  const auto skewed = sample_mixture(TwoMixture{vec({5.0}), 0.3, 1.0}, 1'000'000, s2);
  CHECK(std::abs(column_moments(skewed).mean - (-2.0)) < 0.015);
}

TEST_CASE("general-mixture sampler moments") {
  Stream s = derive_stream(7, 3);
  const GeneralMixture model{{0.4, 0.6}, {vec({0.0, 0.0}), vec({4.0, 4.0})}, 1.0};
  const auto data = sample_mixture(model, 1'000'000, s);
  // mean 2.4 per coordinate, variance 1 + 16 * 0.24 = 4.84, SE 2.2e-3.
  for (Eigen::Index j = 0; j < 2; ++j) {
    const auto m = column_moments(data, j);
    CHECK(std::abs(m.mean - 2.4) < 3 * 2.2e-3);
    CHECK(std::abs(m.var - 4.84) < 0.03);
  }
}

TEST_CASE("regression sampler") {
  Stream s = derive_stream(9, 0);
  const auto null = sample_regression(RegressionModel{vec({0.0}), 1.0}, 1'000'000, s);
  const auto x = null.points.col(0);
  const Vector& y = null.responses;
  const double cov = (x.array() * y.array()).mean() - x.mean() * y.mean();
  const double corr = cov / std::sqrt((x.array() - x.mean()).square().mean() * (y.array() - y.mean()).square().mean());
  CHECK(std::abs(corr) <= 0.004);

  Stream s2 = derive_stream(9, 1);
  const auto alt = sample_regression(RegressionModel{vec({0.7}), 1.0}, 1'000'000, s2);
  CHECK(std::abs((alt.points.col(0).array() * alt.responses.array()).mean() - 0.7) < 0.01);
  CHECK(alt.is_regression());
}

TEST_CASE("empty sample is rejected") {
  Stream s = derive_stream(1, 1);
  CHECK_THROWS_WITH_AS(sample_mixture(GaussianNull{}, 0, s), "empty sample", std::invalid_argument);
  CHECK_THROWS_WITH_AS(sample_regression(RegressionModel{vec({0.0}), 1.0}, 0, s), "empty sample",
                       std::invalid_argument);
}

TEST_CASE("derive_stream determinism and separation") {
  Stream a = derive_stream(42, 0);
  Stream b = derive_stream(42, 0);
  for (int i = 0; i < 1000; ++i) REQUIRE(a.next_u64() == b.next_u64());

  std::set<std::uint64_t> first;
  for (std::uint64_t t = 0; t < 10000; ++t) first.insert(derive_stream(42, t).next_u64());
  CHECK(first.size() == 10000);
  CHECK(derive_stream(42, 0).next_u64() != derive_stream(43, 0).next_u64());

  Stream c = derive_stream(42, 5);
  Stream d = derive_stream(42, 5);
  for (int i = 0; i < 100; ++i) REQUIRE(c.normal() == d.normal());
  for (int i = 0; i < 100; ++i) {
    const double u = c.uniform();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("model validation") {
  CHECK_THROWS_AS(validate(TrueModel{GaussianNull{0.0, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(validate(TrueModel{TwoMixture{vec({1.0}), 1.0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(validate(TrueModel{GeneralMixture{{0.5, 0.6}, {vec({0.0}), vec({1.0})}, 1.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(validate(TrueModel{GeneralMixture{{0.5, 0.5}, {vec({0.0}), vec({1.0, 2.0})}, 1.0}}),
                  std::invalid_argument);
  CHECK_NOTHROW(validate(TrueModel{GeneralMixture{{0.5, 0.5}, {vec({0.0}), vec({1.0})}, 1.0}}));
  CHECK_THROWS_AS(validate(FitSpec{SymmetricFit{0.0}, 1.0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(validate(FitSpec{GeneralFit{1, {1.0}, false, {}}, 1.0, 1}), std::invalid_argument);
  CHECK(kind_name(FitSpec{SymmetricFit{0.5}, 1.0, 1}) == "balanced");
  CHECK(kind_name(FitSpec{SymmetricFit{0.3}, 1.0, 1}) == "unbalanced");
}

TEST_CASE("with_dimension pads locations") {
  const auto model = with_dimension(TrueModel{TwoMixture{vec({5.0}), 0.3, 1.0}}, 3);
  const auto& two = std::get<TwoMixture>(model);
  CHECK(two.location.size() == 3);
  CHECK(two.location[0] == 5.0);
  CHECK(two.location[2] == 0.0);
  CHECK(dimension(with_dimension(TrueModel{GaussianNull{1.0, 1}}, 8)) == 8);
}

TEST_CASE("true mixing measures") {
  const auto m = true_mixing_measure(TwoMixture{vec({2.0}), 0.3, 1.0});
  REQUIRE(m.components() == 2);
  CHECK(m.weights[0] == 0.3);
  CHECK(m.locations[1][0] == -2.0);
  const auto null = true_mixing_measure(GaussianNull{1.0, 2});
  REQUIRE(null.components() == 1);
  CHECK(null.locations[0].norm() == 0.0);
}

}  // TEST_SUITE
