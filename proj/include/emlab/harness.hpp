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

// Monte-Carlo experiment runner, scenario presets and the deviation and
// epoch-trace experiments.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "emlab/config.hpp"
#include "emlab/metrics.hpp"
#include "emlab/theory.hpp"

namespace emlab {

struct TrialRow {
  std::string scenario;
  std::size_t n = 0;
  int d = 0;
  int trial = 0;
  std::string metric;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct RateRow {
  std::string scenario;  ///< "<scenario>#<metric>" when the config has several metrics
  std::string metric;
  std::size_t n = 0;
  int d = 0;
  int trials = 0;
  double mean = 0.0;
  double sd = 0.0;
  double report = 0.0;
};

struct SlopeRow {
  std::string scenario;
  std::string series;  ///< "d=<d>" (log report vs log n) or "n=<n>" (vs log d)
  double slope = 0.0;
  double intercept = 0.0;
};

struct RateTable {
  std::vector<TrialRow> trials;
  std::vector<RateRow> rows;
  std::vector<SlopeRow> slopes;

  void append(const RateTable& other);
  std::optional<SlopeRow> find_slope(const std::string& scenario, const std::string& series) const;
};

/// Value of one metric for a finished run. Throws std::invalid_argument for
/// a metric that does not apply to the fit.
double evaluate_metric(const std::string& metric, const FitSpec& fit, const ParamState& estimate,
                       const TrueModel& truth);

/// Runs every (n, d, trial) of the config; n and d are visited in ascending
/// order and the output does not depend on `workers` (0 = hardware threads).
RateTable run_scenario(const ExperimentConfig& cfg, unsigned workers = 0);

/// Writes <stem>_trials.csv, <stem>_aggregate.csv and <stem>_slopes.csv.
void write_rate_table(const RateTable& table, const std::filesystem::path& dir, const std::string& stem);

struct ScenarioInfo {
  std::string id;
  std::string summary;
};

/// Built-in scenario ids with one-line descriptions.
const std::vector<ScenarioInfo>& scenario_catalog();

/// Experiment configs behind a scenario id. Throws std::invalid_argument for
/// unknown ids.
std::vector<ExperimentConfig> scenario_preset(const std::string& id, std::uint64_t master_seed);

/// Grid used by the rate presets over n.
const std::vector<std::size_t>& default_n_grid();

struct DeviationResult {
  std::size_t n = 0;
  int d = 0;
  double radius = 0.0;
  double pi = 0.5;
  int grid_size = 0;
  std::vector<double> per_trial;  ///< max over the grid of ||M_n(theta) - M(theta)||
  double mean = 0.0;
};

/// Empirical surrogate of sup_{||theta|| <= r} ||M_n(theta) - M(theta)|| under
/// N(0, I_d) data: maximises over `grid_size` points drawn uniformly from
/// the ball. Requires d <= 3.
DeviationResult deviation_sup_estimate(std::size_t n, int d, double radius, double pi, int grid_size,
                                       int trials, std::uint64_t master_seed, unsigned workers = 0);

struct EpochTraceRow {
  int epoch = 0;
  double threshold = 0.0;       ///< sqrt(2) sigma omega^{alpha_l}
  long long observed = -1;      ///< first t with ||theta^t|| <= threshold; -1 if never
  long long theory_bound = 0;   ///< T_{l-1} (0 for l = 0)
};

struct EpochTrace {
  theory::EpochSchedule schedule;
  std::vector<EpochTraceRow> rows;
  std::vector<double> norms;  ///< ||theta^t||, t = 0..T_{l_eps - 1}
  double final_norm = 0.0;
};

/// Balanced sample EM on N(0, sigma^2 I_d) data from theta0, run for the
/// schedule's total iteration count T_{l_eps - 1}.
EpochTrace epoch_trace(std::size_t n, int d, double sigma, double delta, double eps, const Vector& theta0,
                       std::uint64_t master_seed, std::uint64_t trial_index = 0);

}  // namespace emlab
