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

// Experiment configuration and its JSON form.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "emlab/em_sample.hpp"
#include "emlab/models.hpp"

namespace emlab {

/// One rate experiment: for each (n, d) pair, `trials` independent
/// (dataset, init, EM run) triples. Truth and fit are re-targeted to each d.
struct ExperimentConfig {
  std::string scenario;
  TrueModel truth = GaussianNull{};
  FitSpec fit;
  std::vector<std::size_t> n_grid;
  std::vector<int> d_grid{1};
  int trials = 1;
  std::uint64_t master_seed = 0;
  EmRunConfig em;
  /// "euclidean", "w2" or "component:<fit k>:<truth j>".
  std::vector<std::string> metrics{"euclidean"};
  std::filesystem::path output;
};

/// Throws std::invalid_argument naming the first violated constraint.
void validate(const ExperimentConfig& cfg);

nlohmann::json to_json(const TrueModel& model);
nlohmann::json to_json(const FitSpec& fit);
nlohmann::json to_json(const EmRunConfig& em);
nlohmann::json to_json(const ExperimentConfig& cfg);
nlohmann::json to_json(const ParamState& state);

TrueModel true_model_from_json(const nlohmann::json& j);
FitSpec fit_from_json(const nlohmann::json& j);
EmRunConfig em_config_from_json(const nlohmann::json& j);
ExperimentConfig experiment_from_json(const nlohmann::json& j);
ParamState param_state_from_json(const nlohmann::json& j);

/// Reads a JSON document. Missing or unreadable files raise IoError; malformed
/// JSON raises std::invalid_argument.
nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace emlab
