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

#include "emlab/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "emlab/csv.hpp"
#include "emlab/em_population.hpp"
#include "emlab/em_sample.hpp"
#include "emlab/parallel.hpp"

namespace emlab {

namespace {

Vector pad(const Vector& v, int d) {
  if (v.size() > d) throw std::invalid_argument("vector longer than target dimension");
  Vector out = Vector::Zero(d);
  out.head(v.size()) = v;
  return out;
}

EmRunConfig em_for_dimension(EmRunConfig em, int d) {
  if (auto* state = std::get_if<ParamState>(&em.init)) {
    for (auto& loc : state->locations) loc = pad(loc, d);
  } else {
    for (auto& c : std::get<RandomInit>(em.init).centers) c = pad(c, d);
  }
  if (em.reference) em.reference = pad(*em.reference, d);
  return em;
}

Vector symmetric_truth(const TrueModel& truth) {
  if (const auto* null = std::get_if<GaussianNull>(&truth)) return Vector::Zero(null->dim);
  if (const auto* two = std::get_if<TwoMixture>(&truth)) return two->location;
  if (const auto* reg = std::get_if<RegressionModel>(&truth)) return reg->coef;
  throw std::invalid_argument("euclidean metric needs a gaussian-null, two-mixture or regression truth");
}

int parse_index(std::string_view text) {
  int value = -1;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || value < 0) {
    throw std::invalid_argument("bad component index in metric");
  }
  return value;
}

std::string metric_label(const ExperimentConfig& cfg, const std::string& metric) {
  return cfg.metrics.size() > 1 ? cfg.scenario + "#" + metric : cfg.scenario;
}

template <class T>
std::vector<T> sorted_unique(std::vector<T> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

SlopeRow fit_series(const std::string& scenario, const std::string& series, std::vector<RatePoint> pts) {
  SlopeRow row{scenario, series, std::nan(""), std::nan("")};
  try {
    const auto fit = slope_fit(pts);
    row.slope = fit.slope;
    row.intercept = fit.intercept;
  } catch (const std::invalid_argument&) {
    // A zero report (exact recovery) has no log; the series stays NaN.
  }
  return row;
}

}  // namespace

void RateTable::append(const RateTable& other) {
  trials.insert(trials.end(), other.trials.begin(), other.trials.end());
  rows.insert(rows.end(), other.rows.begin(), other.rows.end());
  slopes.insert(slopes.end(), other.slopes.begin(), other.slopes.end());
}

std::optional<SlopeRow> RateTable::find_slope(const std::string& scenario, const std::string& series) const {
  for (const auto& s : slopes) {
    if (s.scenario == scenario && s.series == series) return s;
  }
  return std::nullopt;
}

double evaluate_metric(const std::string& metric, const FitSpec& fit, const ParamState& estimate,
                       const TrueModel& truth) {
  if (metric == "euclidean") {
    if (std::holds_alternative<GeneralFit>(fit.variant)) {
      throw std::invalid_argument("euclidean metric needs a symmetric or regression fit");
    }
    const auto* sym = std::get_if<SymmetricFit>(&fit.variant);
    const bool sign_invariant = !sym || sym->weight == 0.5;
    return euclidean_error(primary_location(estimate), symmetric_truth(truth), sign_invariant);
  }
  if (metric == "w2") {
    return wasserstein2(MixingMeasure::from_state(estimate),
                        MixingMeasure::from_state(true_mixing_measure(truth)));
  }
  constexpr std::string_view prefix = "component:";
  if (metric.starts_with(prefix)) {
    const std::string_view rest = std::string_view(metric).substr(prefix.size());
    const auto colon = rest.find(':');
    if (colon == std::string_view::npos) throw std::invalid_argument("component metric needs two indices");
    const auto k = static_cast<std::size_t>(parse_index(rest.substr(0, colon)));
    const auto j = static_cast<std::size_t>(parse_index(rest.substr(colon + 1)));
    const auto reference = true_mixing_measure(truth);
    if (k >= estimate.locations.size() || j >= reference.locations.size()) {
      throw std::invalid_argument("component index out of range in metric " + metric);
    }
    return (estimate.locations[k] - reference.locations[j]).norm();
  }
  throw std::invalid_argument("unknown metric '" + metric + "'");
}

RateTable run_scenario(const ExperimentConfig& cfg, unsigned workers) {
  validate(cfg);
  const auto n_grid = sorted_unique(cfg.n_grid);
  const auto d_grid = sorted_unique(cfg.d_grid);
  const std::size_t trials = static_cast<std::size_t>(cfg.trials);
  const std::size_t metrics = cfg.metrics.size();

  struct Cell {
    TrueModel truth;
    FitSpec fit;
    EmRunConfig em;
  };
  std::vector<Cell> cells;
  for (int d : d_grid) {
    Cell cell{with_dimension(cfg.truth, d), cfg.fit, em_for_dimension(cfg.em, d)};
    cell.fit.dim = d;
    validate(cell.truth);
    validate(cell.fit);
    cells.push_back(std::move(cell));
  }

  // Work item w -> (n index, d index, trial), row-major in that order.
  const std::size_t items = n_grid.size() * d_grid.size() * trials;
  std::vector<TrialRow> rows(items * metrics);
  parallel_for(items, workers, [&](std::size_t w) {
    const std::size_t t = w % trials;
    const std::size_t di = (w / trials) % d_grid.size();
    const std::size_t ni = w / (trials * d_grid.size());
    const auto& cell = cells[di];
    const std::size_t n = n_grid[ni];
    const int d = d_grid[di];
    Stream stream = derive_stream(cfg.master_seed,
                                  combine_index(combine_index(n, static_cast<std::uint64_t>(d)), t));
    const Dataset data = sample(cell.truth, n, stream);
    const EmResult result = run_em(cell.fit, data, cell.em, stream);
    for (std::size_t m = 0; m < metrics; ++m) {
      rows[w * metrics + m] = TrialRow{cfg.scenario, n, d, static_cast<int>(t), cfg.metrics[m],
                                       evaluate_metric(cfg.metrics[m], cell.fit, result.params, cell.truth),
                                       result.iterations, result.converged};
    }
  });

  RateTable table;
  table.trials = std::move(rows);
  for (std::size_t m = 0; m < metrics; ++m) {
    const std::string label = metric_label(cfg, cfg.metrics[m]);
    for (std::size_t ni = 0; ni < n_grid.size(); ++ni) {
      for (std::size_t di = 0; di < d_grid.size(); ++di) {
        std::vector<double> values;
        for (std::size_t t = 0; t < trials; ++t) {
          const std::size_t w = (ni * d_grid.size() + di) * trials + t;
          values.push_back(table.trials[w * metrics + m].value);
        }
        const auto s = aggregate_trials(values);
        table.rows.push_back({label, cfg.metrics[m], n_grid[ni], d_grid[di], cfg.trials, s.mean, s.sd, s.report});
      }
    }
    auto report_at = [&](std::size_t ni, std::size_t di) {
      return table.rows[table.rows.size() - n_grid.size() * d_grid.size() + ni * d_grid.size() + di].report;
    };
    if (n_grid.size() >= 2) {
      for (std::size_t di = 0; di < d_grid.size(); ++di) {
        std::vector<RatePoint> pts;
        for (std::size_t ni = 0; ni < n_grid.size(); ++ni) {
          pts.push_back({static_cast<double>(n_grid[ni]), report_at(ni, di)});
        }
        table.slopes.push_back(fit_series(label, "d=" + std::to_string(d_grid[di]), std::move(pts)));
      }
    }
    if (d_grid.size() >= 2) {
      for (std::size_t ni = 0; ni < n_grid.size(); ++ni) {
        std::vector<RatePoint> pts;
        for (std::size_t di = 0; di < d_grid.size(); ++di) {
          pts.push_back({static_cast<double>(d_grid[di]), report_at(ni, di)});
        }
        table.slopes.push_back(fit_series(label, "n=" + std::to_string(n_grid[ni]), std::move(pts)));
      }
    }
  }
  return table;
}

void write_rate_table(const RateTable& table, const std::filesystem::path& dir, const std::string& stem) {
  csv::write_file(dir / (stem + "_trials.csv"), [&](std::ostream& out) {
    csv::Writer w(out);
    w.header({"scenario", "n", "d", "trial", "metric", "value", "iterations", "converged"});
    for (const auto& r : table.trials) {
      w.field(r.scenario).field(r.n).field(r.d).field(r.trial).field(r.metric).field(r.value)
          .field(r.iterations).field(r.converged).end_row();
    }
  });
  csv::write_file(dir / (stem + "_aggregate.csv"), [&](std::ostream& out) {
    csv::Writer w(out);
    w.header({"scenario", "n", "d", "trials", "mean", "std", "report"});
    for (const auto& r : table.rows) {
      w.field(r.scenario).field(r.n).field(r.d).field(r.trials).field(r.mean).field(r.sd).field(r.report)
          .end_row();
    }
  });
  csv::write_file(dir / (stem + "_slopes.csv"), [&](std::ostream& out) {
    csv::Writer w(out);
    w.header({"scenario", "series", "slope", "intercept"});
    for (const auto& s : table.slopes) w.field(s.scenario).field(s.series).field(s.slope).field(s.intercept).end_row();
  });
}

const std::vector<std::size_t>& default_n_grid() {
  static const std::vector<std::size_t> grid{100, 316, 1000, 3162, 10000, 31623};
  return grid;
}

const std::vector<ScenarioInfo>& scenario_catalog() {
  static const std::vector<ScenarioInfo> catalog{
      {"snr-strong", "two-mixture truth at theta*=5, symmetric fit with pi in {0.1, 0.3, 0.5}, rate in n"},
      {"snr-null", "gaussian-null truth, symmetric fit with pi in {0.1, 0.3, 0.5}, rate in n"},
      {"unbalanced-rates", "gaussian-null truth, pi=0.3 fit, n in {1600, 12800}, d in {1..128}"},
      {"balanced-rates", "gaussian-null truth, pi=0.5 fit, n in {1600, 12800}, d in {1..128}"},
      {"more-cases", "gaussian-null truth, general k=2 (fixed and free weights) and k=3 fits, W2 rate"},
      {"two-mixture", "two-component truth, three-component fit with one sign-tied pair"},
      {"more-mixtures", "d=2, free weights: k=3 on a null truth and k=4 on a two-component truth"},
      {"unknown-weights", "d=2 null truth, unknown-weight fit from pi0=0.1 and pi0=0.49"},
      {"regression-null", "null mixture of regressions, balanced regression fit, rate in n"},
  };
  return catalog;
}

namespace {

std::string pi_tag(double pi) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "pi=%g", pi);
  return buf;
}

ExperimentConfig rate_base(const std::string& scenario, std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.scenario = scenario;
  cfg.n_grid = default_n_grid();
  cfg.d_grid = {1};
  cfg.trials = 100;
  cfg.master_seed = seed;
  cfg.em.tol = 1e-8;
  cfg.em.max_iter = 5000;
  cfg.em.init = RandomInit{1.0, 1.0, std::nullopt, {}};
  return cfg;
}

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

}  // namespace

std::vector<ExperimentConfig> scenario_preset(const std::string& id, std::uint64_t seed) {
  std::vector<ExperimentConfig> out;
  if (id == "snr-strong" || id == "snr-null") {
    const bool strong = id == "snr-strong";
    for (double pi : {0.1, 0.3, 0.5}) {
      auto cfg = rate_base(id + "[" + pi_tag(pi) + "]", seed);
      if (strong) {
        cfg.truth = TwoMixture{vec({5.0}), pi, 1.0};
        cfg.em.init = RandomInit{1.0, std::nullopt, std::nullopt, {vec({5.0})}};
      } else {
        cfg.truth = GaussianNull{1.0, 1};
      }
      cfg.fit = FitSpec{SymmetricFit{pi}, 1.0, 1};
      out.push_back(std::move(cfg));
    }
  } else if (id == "unbalanced-rates" || id == "balanced-rates") {
    const double pi = id == "balanced-rates" ? 0.5 : 0.3;
    auto cfg = rate_base(id, seed);
    cfg.truth = GaussianNull{1.0, 1};
    cfg.fit = FitSpec{SymmetricFit{pi}, 1.0, 1};
    cfg.n_grid = {1600, 12800};
    cfg.d_grid = {1, 2, 4, 8, 16, 32, 64, 128};
    cfg.trials = 25;
    out.push_back(std::move(cfg));
  } else if (id == "more-cases") {
    for (double pi : {0.1, 0.3, 0.5}) {
      auto cfg = rate_base(id + "[k=2," + pi_tag(pi) + "]", seed);
      cfg.fit = FitSpec{GeneralFit{2, {pi, 1.0 - pi}, false, {}}, 1.0, 1};
      cfg.em.init = RandomInit{};
      cfg.metrics = {"w2"};
      out.push_back(std::move(cfg));
    }
    auto free = rate_base(id + "[k=2,free]", seed);
    free.fit = FitSpec{GeneralFit{2, {0.5, 0.5}, true, {}}, 1.0, 1};
    free.em.init = RandomInit{};
    free.metrics = {"w2"};
    out.push_back(std::move(free));
    auto three = rate_base(id + "[k=3]", seed);
    three.fit = FitSpec{GeneralFit{3, {1.0 / 3, 1.0 / 3, 1.0 / 3}, false, {}}, 1.0, 1};
    three.em.init = RandomInit{};
    three.metrics = {"w2"};
    out.push_back(std::move(three));
  } else if (id == "two-mixture") {
    auto cfg = rate_base(id, seed);
    cfg.truth = GeneralMixture{{0.5, 0.5}, {vec({0.0}), vec({10.0})}, 1.0};
    cfg.fit = FitSpec{GeneralFit{3, {0.25, 0.25, 0.5}, false, {{0, 1}}}, 1.0, 1};
    cfg.em.init = RandomInit{1.0, std::nullopt, std::nullopt, {vec({0.0}), vec({0.0}), vec({10.0})}};
    cfg.metrics = {"w2", "component:2:1"};
    out.push_back(std::move(cfg));
  } else if (id == "more-mixtures") {
    auto a = rate_base(id + "[k=3,null]", seed);
    a.truth = GaussianNull{1.0, 2};
    a.d_grid = {2};
    a.fit = FitSpec{GeneralFit{3, {1.0 / 3, 1.0 / 3, 1.0 / 3}, true, {}}, 1.0, 2};
    a.em.init = RandomInit{};
    a.metrics = {"w2"};
    out.push_back(std::move(a));
    auto b = rate_base(id + "[k=4,two-component]", seed);
    b.truth = GeneralMixture{{0.4, 0.6}, {vec({0.0, 0.0}), vec({4.0, 4.0})}, 1.0};
    b.d_grid = {2};
    b.fit = FitSpec{GeneralFit{4, {0.25, 0.25, 0.25, 0.25}, true, {}}, 1.0, 2};
    b.em.init = RandomInit{1.0, std::nullopt, std::nullopt,
                           {vec({0.0, 0.0}), vec({0.0, 0.0}), vec({4.0, 4.0}), vec({4.0, 4.0})}};
    b.metrics = {"w2"};
    out.push_back(std::move(b));
  } else if (id == "unknown-weights") {
    auto a = rate_base(id + "[pi0=0.1]", seed);
    a.truth = GaussianNull{1.0, 2};
    a.d_grid = {2};
    a.fit = FitSpec{SymmetricUnknownWeightFit{}, 1.0, 2};
    a.em.init = RandomInit{1.0, 0.03, 0.1, {}};
    out.push_back(std::move(a));
    auto b = rate_base(id + "[pi0=0.49]", seed);
    b.truth = GaussianNull{1.0, 2};
    b.d_grid = {2};
    b.fit = FitSpec{SymmetricUnknownWeightFit{}, 1.0, 2};
    b.em.init = RandomInit{1.0, 1.0, 0.49, {}};
    out.push_back(std::move(b));
  } else if (id == "regression-null") {
    auto cfg = rate_base(id, seed);
    cfg.truth = RegressionModel{vec({0.0}), 1.0};
    cfg.fit = FitSpec{RegressionFit{}, 1.0, 1};
    out.push_back(std::move(cfg));
  } else {
    std::string known;
    for (const auto& s : scenario_catalog()) known += (known.empty() ? "" : ", ") + s.id;
    throw std::invalid_argument("unknown scenario '" + id + "' (known: " + known + ")");
  }
  return out;
}

DeviationResult deviation_sup_estimate(std::size_t n, int d, double radius, double pi, int grid_size,
                                       int trials, std::uint64_t master_seed, unsigned workers) {
  if (trials < 1) throw std::invalid_argument("no trials");
  if (grid_size < 1) throw std::invalid_argument("grid size must be >= 1");
  if (d < 1 || d > 3) throw std::invalid_argument("deviation grid needs 1 <= d <= 3");
  if (!(radius >= 0.0)) throw std::invalid_argument("radius must be nonnegative");
  if (!(pi > 0.0 && pi < 1.0)) throw std::invalid_argument("mixture weight must lie in (0, 1)");
  if (n < 1) throw std::invalid_argument("empty sample");

  DeviationResult out{n, d, radius, pi, grid_size, std::vector<double>(static_cast<std::size_t>(trials)), 0.0};
  const TrueModel truth = GaussianNull{1.0, d};
  parallel_for(out.per_trial.size(), workers, [&](std::size_t t) {
    Stream stream = derive_stream(master_seed, combine_index(combine_index(n, static_cast<std::uint64_t>(d)), t));
    const Dataset data = sample(truth, n, stream);
    double worst = 0.0;
    for (int g = 0; g < grid_size; ++g) {
      Vector theta(d);
      for (int j = 0; j < d; ++j) theta[j] = stream.normal();
      const double norm = theta.norm();
      const double r = radius * std::pow(stream.uniform(), 1.0 / d);
      theta = norm > 0.0 ? Vector(theta * (r / norm)) : Vector(Vector::Zero(d));
      const Vector gap = sample_em_symmetric_step(theta, pi, data, 1.0) - pop_em_symmetric(theta, pi, 1.0);
      worst = std::max(worst, gap.norm());
    }
    out.per_trial[t] = worst;
  });
  for (double v : out.per_trial) out.mean += v;
  out.mean /= trials;
  return out;
}

EpochTrace epoch_trace(std::size_t n, int d, double sigma, double delta, double eps, const Vector& theta0,
                       std::uint64_t master_seed, std::uint64_t trial_index) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  if (theta0.size() != d) throw std::invalid_argument("theta0 dimension mismatch");
  EpochTrace trace;
  trace.schedule = theory::epoch_schedule(static_cast<double>(n), d, sigma, delta, eps, theta0.norm());
  const auto& s = trace.schedule;
  constexpr long long kMaxIterations = 10'000'000;
  const long long total = std::min(s.cumulative.back(), kMaxIterations);

  Stream stream = derive_stream(master_seed, combine_index(combine_index(n, static_cast<std::uint64_t>(d)), trial_index));
  const Dataset data = sample(GaussianNull{sigma, d}, n, stream);

  for (int l = 0; l <= s.final_epoch; ++l) {
    trace.rows.push_back({l, std::numbers::sqrt2 * sigma * std::pow(s.omega, s.alphas[static_cast<std::size_t>(l)]),
                          -1, l == 0 ? 0 : s.cumulative[static_cast<std::size_t>(l) - 1]});
  }
  Vector theta = theta0;
  auto record = [&](long long t) {
    const double norm = theta.norm();
    trace.norms.push_back(norm);
    for (auto& row : trace.rows) {
      if (row.observed < 0 && norm <= row.threshold) row.observed = t;
    }
  };
  record(0);
  for (long long t = 1; t <= total; ++t) {
    theta = sample_em_symmetric_step(theta, 0.5, data, sigma);
    record(t);
  }
  trace.final_norm = trace.norms.back();
  return trace;
}

}  // namespace emlab
