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

#include <algorithm>
#include <cmath>
#include <limits>

#include "emlab/metrics.hpp"
#include "test_support.hpp"
#include "transport_oracle.hpp"

using namespace emlab;
using emlab::test::vec;

namespace {

std::vector<double> random_simplex(std::size_t k, Stream& s) {
  std::vector<double> w(k);
  double total = 0.0;
  for (auto& x : w) total += (x = -std::log(s.uniform()));
  for (auto& x : w) x /= total;
  return w;
}

MixingMeasure random_measure(std::size_t atoms, int d, Stream& s) {
  MixingMeasure m;
  const auto w = random_simplex(atoms, s);
  for (std::size_t k = 0; k < atoms; ++k) {
    Vector loc(d);
    for (int j = 0; j < d; ++j) loc[j] = 2.0 * s.normal();
    m.atoms.push_back({w[k], loc});
  }
  return m;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("wasserstein examples") {
  MixingMeasure a{{{0.3, vec({1.0, 2.0})}, {0.7, vec({-1.0, 0.5})}}};
  CHECK(wasserstein2(a, a) < 1e-12);
  MixingMeasure u{{{1.0, vec({1.0, 2.0})}}};
  MixingMeasure v{{{1.0, vec({-2.0, 6.0})}}};
  CHECK(wasserstein2(u, v) == doctest::Approx(5.0).epsilon(1e-15));

  for (double pi : {0.1, 0.3, 0.5}) {
    const double t1 = 0.8;
    const double t2 = -0.35;
    MixingMeasure fitted{{{pi, vec({t1})}, {1 - pi, vec({t2})}}};
    MixingMeasure origin{{{1.0, vec({0.0})}}};
    CHECK(wasserstein2(fitted, origin) == doctest::Approx(std::sqrt(pi * t1 * t1 + (1 - pi) * t2 * t2)).epsilon(1e-15));
  }

  MixingMeasure light{{{0.9, vec({0.0})}}};
  CHECK_THROWS_WITH_AS(wasserstein2(u, light), "unbalanced measures", std::invalid_argument);
  MixingMeasure wrong_dim{{{1.0, vec({0.0})}}};
  CHECK_THROWS_AS(wasserstein2(u, wrong_dim), std::invalid_argument);
}

TEST_CASE("transport simplex equals vertex enumeration") {
  Stream s = derive_stream(12, 0);
  for (std::size_t m : {2u, 3u}) {
    for (int rep = 0; rep < 200; ++rep) {
      const auto a = random_simplex(m, s);
      const auto b = random_simplex(3, s);
      std::vector<double> c(m * 3);
      for (auto& x : c) x = s.uniform() * 10.0;
      const auto plan = solve_transport(a, b, c);
      CHECK(plan.cost == doctest::Approx(emlab::test::brute_force_cost(a, b, c)).epsilon(1e-10));
      for (std::size_t i = 0; i < m; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < 3; ++j) {
          CHECK(plan.flow[i * 3 + j] >= -1e-15);
          row += plan.flow[i * 3 + j];
        }
        CHECK(row == doctest::Approx(a[i]).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("degenerate transport problems terminate") {
  // Equal marginals make the northwest corner degenerate at every step.
  const std::vector<double> a{0.25, 0.25, 0.25, 0.25};
  std::vector<double> c(16);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) c[i * 4 + j] = (i == 3 - j) ? 0.0 : 1.0;
  CHECK(solve_transport(a, a, c).cost == doctest::Approx(0.0));

  Stream s = derive_stream(12, 1);
  for (int rep = 0; rep < 50; ++rep) {
    const auto x = random_measure(16, 2, s);
    const auto y = random_measure(16, 2, s);
    const double w = wasserstein2(x, y);
    CHECK(std::isfinite(w));
    CHECK(w >= 0.0);
  }
}

TEST_CASE("metric properties") {
  Stream s = derive_stream(12, 2);
  for (int rep = 0; rep < 1000; ++rep) {
    const int d = 1 + static_cast<int>(s.next_u64() % 3);
    const auto x = random_measure(1 + s.next_u64() % 4, d, s);
    const auto y = random_measure(1 + s.next_u64() % 4, d, s);
    const auto z = random_measure(1 + s.next_u64() % 4, d, s);
    const double xy = wasserstein2(x, y);
    CHECK(std::abs(xy - wasserstein2(y, x)) <= 1e-12 * (1.0 + xy));
    CHECK(xy <= wasserstein2(x, z) + wasserstein2(z, y) + 1e-9);
  }
  for (int rep = 0; rep < 100; ++rep) {
    const auto x = random_measure(4, 2, s);
    const auto y = random_measure(3, 2, s);
    auto shuffled = x;
    std::reverse(shuffled.atoms.begin(), shuffled.atoms.end());
    std::swap(shuffled.atoms[0], shuffled.atoms[2]);
    CHECK(wasserstein2(shuffled, y) == doctest::Approx(wasserstein2(x, y)).epsilon(1e-12));
  }
}

TEST_CASE("mixing measure validation") {
  MixingMeasure ok{{{0.5, vec({0.0})}, {0.5, vec({1.0})}}};
  CHECK_NOTHROW(ok.validate());
  MixingMeasure bad{{{0.5, vec({0.0})}, {0.6, vec({1.0})}}};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  const auto from = MixingMeasure::from_state(ParamState{{0.3, 0.7}, {vec({1.0}), vec({-1.0})}});
  CHECK(from.atoms.size() == 2);
  CHECK(from.atoms[1].location[0] == -1.0);
}

TEST_CASE("euclidean error") {
  CHECK(euclidean_error(vec({-1.0, 0.0}), vec({1.0, 0.0}), true) == 0.0);
  CHECK(euclidean_error(vec({-1.0, 0.0}), vec({1.0, 0.0}), false) == 2.0);
}

TEST_CASE("slope fit") {
  std::vector<RatePoint> half;
  std::vector<RatePoint> quarter;
  for (double n : {100.0, 316.0, 1000.0, 3162.0, 10000.0}) {
    half.push_back({n, 3.0 * std::pow(n, -0.5)});
    quarter.push_back({n, 0.7 * std::pow(n, -0.25)});
  }
  const auto h = slope_fit(half);
  CHECK(h.slope == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(h.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(slope_fit(quarter).slope == doctest::Approx(-0.25).epsilon(1e-12));
  const std::vector<RatePoint> single{{100.0, 1.0}, {100.0, 2.0}};
  CHECK_THROWS_AS(slope_fit(single), std::invalid_argument);
  const std::vector<RatePoint> one{{100.0, 1.0}};
  CHECK_THROWS_AS(slope_fit(one), std::invalid_argument);
  const std::vector<RatePoint> zero{{100.0, 1.0}, {200.0, 0.0}};
  CHECK_THROWS_AS(slope_fit(zero), std::invalid_argument);
}

TEST_CASE("trial aggregation") {
  const std::vector<double> same(5, 0.3);
  const auto s = aggregate_trials(same);
  CHECK(s.mean == doctest::Approx(0.3));
  CHECK(s.sd == 0.0);
  CHECK(s.report == doctest::Approx(0.3));
  const std::vector<double> two{0.0, 2.0};
  const auto t = aggregate_trials(two);
  CHECK(t.mean == 1.0);
  CHECK(t.sd == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(t.report == doctest::Approx(1 + 2 * std::sqrt(2.0)).epsilon(1e-15));
  const std::vector<double> one{0.4};
  CHECK(aggregate_trials(one).sd == 0.0);
  CHECK_THROWS_AS(aggregate_trials(std::vector<double>{}), std::invalid_argument);
}

}  // TEST_SUITE
