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

#include <filesystem>
#include <fstream>

#include "emlab/config.hpp"
#include "emlab/harness.hpp"
#include "test_support.hpp"

using namespace emlab;
using emlab::test::vec;

TEST_SUITE("config") {

TEST_CASE("experiment config round trip") {
  for (const auto& info : scenario_catalog()) {
    for (const auto& cfg : scenario_preset(info.id, 42)) {
      const auto j = to_json(cfg);
      const auto back = experiment_from_json(j);
      CHECK(to_json(back) == j);
      CHECK(back.master_seed == 42);
    }
  }
}

TEST_CASE("parsing a hand-written config") {
  const auto j = nlohmann::json::parse(R"({
    "scenario": "custom",
    "truth": {"kind": "two-mixture", "location": [2.0], "weight": 0.3},
    "fit": {"kind": "unbalanced", "weight": 0.3},
    "n_grid": [100, 400],
    "trials": 5,
    "master_seed": 9,
    "em": {"tol": 1e-6, "max_iter": 50, "init": {"kind": "explicit", "locations": [[1.5]]}},
    "metrics": ["euclidean", "w2"]
  })");
  const auto cfg = experiment_from_json(j);
  CHECK(cfg.scenario == "custom");
  CHECK(std::get<TwoMixture>(cfg.truth).location[0] == 2.0);
  CHECK(std::get<SymmetricFit>(cfg.fit.variant).weight == 0.3);
  CHECK(cfg.d_grid == std::vector<int>{1});
  CHECK(cfg.em.max_iter == 50);
  CHECK(std::get<ParamState>(cfg.em.init).locations[0][0] == 1.5);
  CHECK(cfg.metrics.size() == 2);
}

TEST_CASE("general fit and general truth") {
  const auto fit = fit_from_json(nlohmann::json::parse(
      R"({"kind": "general", "components": 3, "weights": [0.25, 0.25, 0.5], "sign_ties": [[0, 1]]})"));
  const auto& g = std::get<GeneralFit>(fit.variant);
  CHECK(g.components == 3);
  CHECK(g.sign_ties.size() == 1);
  CHECK_FALSE(g.weights_free);
  const auto free = std::get<GeneralFit>(fit_from_json(nlohmann::json::parse(
      R"({"kind": "general", "components": 4, "weights_free": true})")).variant);
  CHECK(free.weights == std::vector<double>(4, 0.25));

  const auto truth = true_model_from_json(nlohmann::json::parse(
      R"({"kind": "general-mixture", "weights": [0.4, 0.6], "locations": [[0, 0], [4, 4]]})"));
  CHECK(dimension(truth) == 2);
  CHECK(to_json(truth)["kind"] == "general-mixture");
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(true_model_from_json(nlohmann::json::parse(R"({"kind": "cauchy"})")), std::invalid_argument);
  CHECK_THROWS_AS(fit_from_json(nlohmann::json::parse(R"({"kind": "unbalanced"})")), std::invalid_argument);
  CHECK_THROWS_AS(experiment_from_json(nlohmann::json::parse(R"({"scenario": "x"})")), std::invalid_argument);
  CHECK_THROWS_AS(true_model_from_json(nlohmann::json::parse(R"({"kind": "two-mixture", "location": "a"})")),
                  std::invalid_argument);
  auto cfg = scenario_preset("snr-null", 1).front();
  cfg.trials = 0;
  CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
  cfg.trials = 1;
  cfg.n_grid.clear();
  CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
}

TEST_CASE("reading files") {
  const auto dir = std::filesystem::temp_directory_path() / "emlab_config_test";
  std::filesystem::create_directories(dir);
  CHECK_THROWS_AS(read_json_file(dir / "missing.json"), IoError);
  {
    std::ofstream(dir / "bad.json") << "{ not json";
  }
  CHECK_THROWS_AS(read_json_file(dir / "bad.json"), std::invalid_argument);
  {
    std::ofstream(dir / "good.json") << R"({"a": 1})";
  }
  CHECK(read_json_file(dir / "good.json")["a"] == 1);
  std::filesystem::remove_all(dir);
}

}  // TEST_SUITE
