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

// emlab command-line tool.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "emlab/config.hpp"
#include "emlab/csv.hpp"
#include "emlab/em_population.hpp"
#include "emlab/em_sample.hpp"
#include "emlab/error.hpp"
#include "emlab/fixedpoint.hpp"
#include "emlab/harness.hpp"
#include "emlab/metrics.hpp"
#include "emlab/theory.hpp"

namespace fs = std::filesystem;
using namespace emlab;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitIo = 3;

struct SeedOptions {
  std::optional<std::uint64_t> seed;
  bool allow_nondeterministic = false;

  void attach(CLI::App* app) {
    app->add_option("--seed", seed, "Master seed for all random streams");
    app->add_flag("--allow-nondeterministic", allow_nondeterministic,
                  "Run without --seed using a seed drawn from the system entropy source");
  }

  /// Resolution order: --seed, then a seed stored in a config file, then
  /// entropy (only with --allow-nondeterministic).
  std::uint64_t resolve(std::optional<std::uint64_t> from_config = std::nullopt) const {
    if (seed) return *seed;
    if (from_config) return *from_config;
    if (!allow_nondeterministic) {
      throw std::invalid_argument("--seed is required (pass --allow-nondeterministic to run unseeded)");
    }
    std::random_device rd;
    const std::uint64_t drawn = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    std::cerr << "using nondeterministic seed " << drawn << "\n";
    return drawn;
  }
};

fs::path output_root(const std::optional<std::string>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("EM_LAB_OUT"); env && *env) return env;
  return "emlab_out";
}

Vector to_vector(const std::vector<double>& values) {
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

std::string scenario_list() {
  std::string text = "Scenarios:\n";
  std::size_t width = 0;
  for (const auto& s : scenario_catalog()) width = std::max(width, s.id.size());
  for (const auto& s : scenario_catalog()) {
    text += "  " + s.id + std::string(width + 2 - s.id.size(), ' ') + s.summary + "\n";
  }
  return text;
}

// ---- pop-em ----------------------------------------------------------------

struct PopEmArgs {
  std::string fit = "balanced";
  std::vector<double> theta0{1.0};
  int steps = 100;
  double pi = 0.5;
  double sigma = 1.0;
  std::optional<std::string> out;
};

void run_pop_em(const PopEmArgs& a) {
  const auto emit = [&](const std::function<void(std::ostream&)>& fill) {
    if (a.out) {
      csv::write_file(*a.out, fill);
      std::cout << "wrote " << *a.out << "\n";
    } else {
      fill(std::cout);
    }
  };

  if (a.fit == "two-mixture") {
    // Experimental: 1/2 N(0, 1) + 1/2 N(10, 1) fitted by 1/4, 1/4, 1/2 with
    // locations (theta, -theta, mu).
    const GeneralMixture truth{{0.5, 0.5}, {Vector::Zero(1), Vector::Constant(1, 10.0)}, 1.0};
    const GeneralFit fit{3, {0.25, 0.25, 0.5}, false, {{0, 1}}};
    std::vector<double> start = a.theta0;
    if (start.size() == 1) start = {start[0], -start[0], 10.5};
    if (start.size() != 3) throw std::invalid_argument("two-mixture needs one or three starting locations");
    ParamState state{fit.weights, {Vector::Constant(1, start[0]), Vector::Constant(1, -start[0]),
                                   Vector::Constant(1, start[2])}};
    const auto path = pop_general_trajectory_1d(state, fit, a.sigma, truth, a.steps);
    const auto reference = MixingMeasure::from_state(true_mixing_measure(truth));
    emit([&](std::ostream& out) {
      csv::Writer w(out);
      w.header({"t", "w2", "theta_1", "theta_2", "theta_3"});
      for (std::size_t t = 0; t < path.size(); ++t) {
        w.field(t).field(wasserstein2(MixingMeasure::from_state(path[t]), reference));
        for (const auto& loc : path[t].locations) w.field(loc[0]);
        w.end_row();
      }
    });
    return;
  }

  PopOperatorSpec spec;
  spec.fit.sigma = a.sigma;
  spec.fit.dim = static_cast<int>(a.theta0.size());
  if (a.fit == "balanced") {
    spec.fit.variant = SymmetricFit{0.5};
  } else if (a.fit == "unbalanced") {
    if (a.pi == 0.5) throw std::invalid_argument("--fit unbalanced needs --pi different from 0.5");
    spec.fit.variant = SymmetricFit{a.pi};
  } else if (a.fit == "regression") {
    spec.fit.variant = RegressionFit{};
  } else if (a.fit == "unknown-weight") {
    spec.fit.variant = SymmetricUnknownWeightFit{};
    spec.initial_weight = a.pi;
  } else {
    throw std::invalid_argument("unknown fit '" + a.fit + "'");
  }
  const auto record = pop_trajectory(spec, to_vector(a.theta0), a.steps);
  const bool weights = !record.weight.empty();
  emit([&](std::ostream& out) {
    csv::Writer w(out);
    if (weights) {
      w.header({"t", "distance", "weight"});
    } else {
      w.header({"t", "distance"});
    }
    for (std::size_t t = 0; t < record.distance.size(); ++t) {
      w.field(t).field(record.distance[t]);
      if (weights) w.field(record.weight[t]);
      w.end_row();
    }
  });
}

// ---- run-em ----------------------------------------------------------------

void run_single_em(const std::string& config_path, const SeedOptions& seeds, const std::optional<std::string>& out) {
  const auto j = read_json_file(config_path);
  TrueModel truth;
  FitSpec fit;
  std::size_t n = 0;
  std::uint64_t trial = 0;
  EmRunConfig em;
  std::optional<std::uint64_t> config_seed;
  std::vector<std::string> metrics;
  try {
    truth = true_model_from_json(j.at("truth"));
    fit = fit_from_json(j.at("fit"));
    n = j.at("n").get<std::size_t>();
    trial = j.value("trial", std::uint64_t{0});
    if (j.contains("em")) em = em_config_from_json(j.at("em"));
    if (j.contains("master_seed")) config_seed = j.at("master_seed").get<std::uint64_t>();
    metrics = j.value("metrics", std::vector<std::string>{});
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("invalid run-em config: ") + e.what());
  }
  validate(truth);
  validate(fit);
  if (dimension(truth) != fit.dim) throw std::invalid_argument("truth and fit dimensions differ");
  const std::uint64_t seed = seeds.resolve(config_seed);

  Stream stream = derive_stream(seed, trial);
  const Dataset data = sample(truth, n, stream);
  const EmResult result = run_em(fit, data, em, stream);

  nlohmann::json doc = {{"params", to_json(result.params)},
                        {"iterations", result.iterations},
                        {"converged", result.converged},
                        {"master_seed", seed},
                        {"trial", trial}};
  for (const auto& m : metrics) doc["metrics"][m] = evaluate_metric(m, fit, result.params, truth);
  if (result.trajectory) {
    doc["trajectory"]["distance"] = result.trajectory->distance;
    if (!result.trajectory->weight.empty()) doc["trajectory"]["weight"] = result.trajectory->weight;
  }
  if (out) {
    csv::write_file(*out, [&](std::ostream& os) { os << doc.dump(2) << "\n"; });
    std::cout << "wrote " << *out << "\n";
  } else {
    std::cout << doc.dump(2) << "\n";
  }
}

// ---- rates -----------------------------------------------------------------

struct RatesArgs {
  std::optional<std::string> scenario;
  std::optional<std::string> config;
  std::optional<std::string> out;
  std::optional<int> trials;
  std::vector<std::size_t> n_grid;
  unsigned workers = 0;
};

void run_rates(const RatesArgs& a, const SeedOptions& seeds) {
  if (!a.scenario && !a.config) throw std::invalid_argument("rates needs --scenario or --config");
  std::vector<ExperimentConfig> configs;
  std::string stem;
  if (a.config) {
    auto cfg = experiment_from_json(read_json_file(*a.config));
    cfg.master_seed = seeds.resolve(cfg.master_seed);
    stem = a.scenario.value_or(cfg.scenario);
    configs.push_back(std::move(cfg));
  } else {
    configs = scenario_preset(*a.scenario, seeds.resolve());
    stem = *a.scenario;
  }
  const fs::path dir = output_root(a.out);
  RateTable all;
  for (auto& cfg : configs) {
    if (a.trials) cfg.trials = *a.trials;
    if (!a.n_grid.empty()) cfg.n_grid = a.n_grid;
    if (cfg.output.empty()) cfg.output = dir;
    all.append(run_scenario(cfg, a.workers));
  }
  write_rate_table(all, dir, stem);
  for (const auto& s : all.slopes) {
    std::printf("%-40s %-10s slope %+.4f\n", s.scenario.c_str(), s.series.c_str(), s.slope);
  }
  std::cout << "wrote " << (dir / (stem + "_{trials,aggregate,slopes}.csv")).string() << "\n";
}

// ---- tables ----------------------------------------------------------------

void run_fixed_points(const std::vector<std::size_t>& n_list, int trials, std::uint64_t seed, unsigned workers,
                      const fs::path& out) {
  const auto rows = fixed_point_scaling_experiment(n_list, trials, seed, workers);
  csv::write_file(out, [&](std::ostream& os) {
    csv::Writer w(os);
    w.header({"n", "trials", "nonzero", "nonzero_fraction", "median_scaled"});
    for (const auto& r : rows) {
      w.field(r.n).field(r.trials).field(r.nonzero).field(r.nonzero_fraction).field(r.median_scaled).end_row();
    }
  });
  for (const auto& r : rows) {
    std::printf("n=%-8zu nonzero %.3f  median |theta|*n^(1/4) %.4f\n", r.n, r.nonzero_fraction, r.median_scaled);
  }
  std::cout << "wrote " << out.string() << "\n";
}

struct EpochArgs {
  std::size_t n = 100000;
  int d = 1;
  double sigma = 1.0;
  double delta = 0.1;
  double eps = 0.05;
  double theta0_norm = 1.0;
  std::uint64_t trial = 0;
  std::optional<std::string> out;
};

void run_epoch_trace(const EpochArgs& a, std::uint64_t seed) {
  Vector theta0 = Vector::Zero(a.d);
  theta0[0] = a.theta0_norm;
  const auto trace = epoch_trace(a.n, a.d, a.sigma, a.delta, a.eps, theta0, seed, a.trial);
  const fs::path out = a.out ? fs::path(*a.out) : output_root(std::nullopt) / "epoch_trace.csv";
  csv::write_file(out, [&](std::ostream& os) {
    csv::Writer w(os);
    w.header({"epoch", "alpha", "threshold", "observed", "theory_bound"});
    for (const auto& r : trace.rows) {
      w.field(r.epoch).field(trace.schedule.alphas[static_cast<std::size_t>(r.epoch)]).field(r.threshold)
          .field(r.observed).field(r.theory_bound).end_row();
    }
  });
  std::printf("omega %.6g, epochs %d, iterations %zu, final norm %.6g\n", trace.schedule.omega,
              trace.schedule.final_epoch, trace.norms.size() - 1, trace.final_norm);
  for (const auto& r : trace.rows) {
    std::printf("epoch %d  threshold %.6g  observed %lld  T %lld\n", r.epoch, r.threshold, r.observed, r.theory_bound);
  }
  std::cout << "wrote " << out.string() << "\n";
}

struct DeviationArgs {
  std::vector<std::size_t> n_list{2500, 10000};
  int d = 1;
  double radius = 1.0;
  double pi = 0.5;
  int grid = 200;
  int trials = 50;
  unsigned workers = 0;
  std::optional<std::string> out;
};

void run_deviation(const DeviationArgs& a, std::uint64_t seed) {
  std::vector<DeviationResult> results;
  for (auto n : a.n_list) results.push_back(deviation_sup_estimate(n, a.d, a.radius, a.pi, a.grid, a.trials, seed, a.workers));
  const fs::path out = a.out ? fs::path(*a.out) : output_root(std::nullopt) / "deviation.csv";
  csv::write_file(out, [&](std::ostream& os) {
    csv::Writer w(os);
    w.header({"n", "d", "radius", "pi", "grid", "trials", "mean_sup_deviation"});
    for (const auto& r : results) {
      w.field(r.n).field(r.d).field(r.radius).field(r.pi).field(r.grid_size).field(static_cast<int>(r.per_trial.size()))
          .field(r.mean).end_row();
    }
  });
  for (const auto& r : results) std::printf("n=%-8zu mean sup deviation %.6g\n", r.n, r.mean);
  std::cout << "wrote " << out.string() << "\n";
}

void run_loglik(double pi, double sigma, double step, const std::optional<std::string>& out_flag) {
  const auto profile = theory::loglik_profile(pi, sigma, step);
  const auto best = theory::argmax_set(profile);
  const fs::path out = out_flag ? fs::path(*out_flag) : output_root(std::nullopt) / "loglik.csv";
  csv::write_file(out, [&](std::ostream& os) {
    csv::Writer w(os);
    w.header({"theta", "loglik"});
    for (const auto& p : profile) w.field(p.theta).field(p.value).end_row();
  });
  std::printf("fisher beta %.6g; argmax set has %zu grid points in [%g, %g]\n", theory::fisher_beta(pi), best.size(),
              best.front(), best.back());
  std::cout << "wrote " << out.string() << "\n";
}

void print_value(double v) { std::cout << csv::format(v) << "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"emlab: EM for over-specified Gaussian mixtures"};
  app.require_subcommand(1);

  // pop-em
  PopEmArgs pop;
  auto* pop_cmd = app.add_subcommand("pop-em", "Population EM trajectory (CSV)");
  pop_cmd->add_option("--fit", pop.fit, "balanced | unbalanced | regression | unknown-weight | two-mixture")
      ->check(CLI::IsMember({"balanced", "unbalanced", "regression", "unknown-weight", "two-mixture"}));
  pop_cmd->add_option("--theta0", pop.theta0, "Starting location (one value per coordinate)");
  pop_cmd->add_option("--steps", pop.steps, "Number of EM steps")->check(CLI::PositiveNumber);
  pop_cmd->add_option("--pi", pop.pi, "Fixed weight (unbalanced) or starting weight (unknown-weight)");
  pop_cmd->add_option("--sigma", pop.sigma, "Noise scale");
  pop_cmd->add_option("--out", pop.out, "Output CSV (stdout when omitted)");
  SeedOptions pop_seed;
  pop_seed.attach(pop_cmd);

  // run-em
  std::string run_config;
  std::optional<std::string> run_out;
  SeedOptions run_seed;
  auto* run_cmd = app.add_subcommand("run-em", "Single sample EM run from a JSON config (JSON result)");
  run_cmd->add_option("--config", run_config, "JSON with truth, fit, n, [master_seed, trial, em, metrics]")->required();
  run_cmd->add_option("--out", run_out, "Output JSON (stdout when omitted)");
  run_seed.attach(run_cmd);

  // rates
  RatesArgs rates;
  SeedOptions rates_seed;
  auto* rates_cmd = app.add_subcommand("rates", "Monte-Carlo rate experiment (CSV tables and slopes)");
  std::vector<std::string> ids;
  for (const auto& s : scenario_catalog()) ids.push_back(s.id);
  rates_cmd->add_option("--scenario", rates.scenario, "Scenario id")->check(CLI::IsMember(ids));
  rates_cmd->add_option("--config", rates.config, "ExperimentConfig JSON");
  rates_cmd->add_option("--out", rates.out, "Output directory (default $EM_LAB_OUT or ./emlab_out)");
  rates_cmd->add_option("--trials", rates.trials, "Override the trial count")->check(CLI::PositiveNumber);
  rates_cmd->add_option("--n-grid", rates.n_grid, "Override the n grid")->delimiter(',');
  rates_cmd->add_option("--workers", rates.workers, "Worker threads (0 = all cores)");
  rates_cmd->footer(scenario_list());
  rates_seed.attach(rates_cmd);

  // fixed-points
  std::vector<std::size_t> fp_n{100, 1000, 10000};
  int fp_trials = 200;
  unsigned fp_workers = 0;
  std::optional<std::string> fp_out;
  SeedOptions fp_seed;
  auto* fp_cmd = app.add_subcommand("fixed-points", "Nonzero fixed points of balanced sample EM (d = 1)");
  fp_cmd->add_option("--n-list", fp_n, "Sample sizes")->delimiter(',');
  fp_cmd->add_option("--trials", fp_trials, "Datasets per sample size")->check(CLI::PositiveNumber);
  fp_cmd->add_option("--workers", fp_workers, "Worker threads (0 = all cores)");
  fp_cmd->add_option("--out", fp_out, "Output CSV");
  fp_seed.attach(fp_cmd);

  // epoch-trace
  EpochArgs epoch;
  SeedOptions epoch_seed;
  auto* epoch_cmd = app.add_subcommand("epoch-trace", "Sample EM trajectory against the epoch schedule");
  epoch_cmd->add_option("--n", epoch.n, "Sample size");
  epoch_cmd->add_option("--d", epoch.d, "Dimension");
  epoch_cmd->add_option("--sigma", epoch.sigma, "Noise scale");
  epoch_cmd->add_option("--delta", epoch.delta, "Failure probability in (0, 1)");
  epoch_cmd->add_option("--eps", epoch.eps, "Target exponent slack in (0, 1/4)");
  epoch_cmd->add_option("--theta0-norm", epoch.theta0_norm, "Norm of the starting point (along e1)");
  epoch_cmd->add_option("--trial", epoch.trial, "Trial index of the random stream");
  epoch_cmd->add_option("--out", epoch.out, "Output CSV");
  epoch_seed.attach(epoch_cmd);

  // deviation
  DeviationArgs dev;
  SeedOptions dev_seed;
  auto* dev_cmd = app.add_subcommand("deviation", "Sup deviation between sample and population EM operators");
  dev_cmd->add_option("--n-list", dev.n_list, "Sample sizes")->delimiter(',');
  dev_cmd->add_option("--d", dev.d, "Dimension (1 to 3)");
  dev_cmd->add_option("--radius", dev.radius, "Ball radius");
  dev_cmd->add_option("--pi", dev.pi, "Fit weight");
  dev_cmd->add_option("--grid", dev.grid, "Random grid points per trial");
  dev_cmd->add_option("--trials", dev.trials, "Trials");
  dev_cmd->add_option("--workers", dev.workers, "Worker threads (0 = all cores)");
  dev_cmd->add_option("--out", dev.out, "Output CSV");
  dev_seed.attach(dev_cmd);

  // loglik
  double ll_pi = 0.5;
  double ll_sigma = 1.0;
  double ll_step = 1e-3;
  std::optional<std::string> ll_out;
  SeedOptions ll_seed;
  auto* ll_cmd = app.add_subcommand("loglik", "Population log-likelihood profile on [-3 sigma, 3 sigma]");
  ll_cmd->add_option("--pi", ll_pi, "Fit weight");
  ll_cmd->add_option("--sigma", ll_sigma, "Noise scale");
  ll_cmd->add_option("--grid", ll_step, "Grid step");
  ll_cmd->add_option("--out", ll_out, "Output CSV");
  ll_seed.attach(ll_cmd);

  // theory
  auto* theory_cmd = app.add_subcommand("theory", "Closed-form quantities");
  theory_cmd->require_subcommand(1);
  int alpha_steps = 10;
  auto* alpha_cmd = theory_cmd->add_subcommand("alpha", "alpha_0 .. alpha_L");
  alpha_cmd->add_option("--steps", alpha_steps, "L")->required();
  double g_theta = 0.1;
  double g_sigma = 1.0;
  auto* gamma_cmd = theory_cmd->add_subcommand("gamma", "gamma_low and gamma_up");
  gamma_cmd->add_option("--theta", g_theta, "||theta||")->required();
  gamma_cmd->add_option("--sigma", g_sigma, "Noise scale");
  double f_pi = 0.5;
  auto* fisher_cmd = theory_cmd->add_subcommand("fisher", "Fisher information 1 - 4 pi (1 - pi)");
  fisher_cmd->add_option("--pi", f_pi, "Fit weight")->required();
  double c_pi = 0.3;
  auto* contraction_cmd = theory_cmd->add_subcommand("contraction", "Unbalanced contraction factor");
  contraction_cmd->add_option("--pi", c_pi, "Fit weight")->required();
  double t_y = 1.0;
  auto* tanh_cmd = theory_cmd->add_subcommand("tanh", "Polynomial bounds on y tanh(y)");
  tanh_cmd->add_option("--y", t_y, "Argument")->required();
  EpochArgs sched;
  auto* sched_cmd = theory_cmd->add_subcommand("schedule", "Epoch schedule");
  sched_cmd->add_option("--n", sched.n, "Sample size");
  sched_cmd->add_option("--d", sched.d, "Dimension");
  sched_cmd->add_option("--sigma", sched.sigma, "Noise scale");
  sched_cmd->add_option("--delta", sched.delta, "Failure probability");
  sched_cmd->add_option("--eps", sched.eps, "Exponent slack");
  sched_cmd->add_option("--theta0-norm", sched.theta0_norm, "Starting norm");
  SeedOptions theory_seed;
  theory_seed.attach(theory_cmd);
  // Set last so that subcommands do not inherit it.
  app.footer(scenario_list());

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*pop_cmd) {
      run_pop_em(pop);
    } else if (*run_cmd) {
      run_single_em(run_config, run_seed, run_out);
    } else if (*rates_cmd) {
      run_rates(rates, rates_seed);
    } else if (*fp_cmd) {
      const fs::path out = fp_out ? fs::path(*fp_out) : output_root(std::nullopt) / "fixed_points.csv";
      run_fixed_points(fp_n, fp_trials, fp_seed.resolve(), fp_workers, out);
    } else if (*epoch_cmd) {
      run_epoch_trace(epoch, epoch_seed.resolve());
    } else if (*dev_cmd) {
      run_deviation(dev, dev_seed.resolve());
    } else if (*ll_cmd) {
      run_loglik(ll_pi, ll_sigma, ll_step, ll_out);
    } else if (*alpha_cmd) {
      for (double a : theory::alpha_sequence(alpha_steps)) print_value(a);
    } else if (*gamma_cmd) {
      std::cout << "gamma_up " << csv::format(theory::gamma_up(g_theta, g_sigma)) << "\n";
      if (g_theta * g_theta <= 5.0 * g_sigma * g_sigma / 8.0) {
        std::cout << "gamma_low " << csv::format(theory::gamma_low(g_theta, g_sigma)) << "\n";
      }
    } else if (*fisher_cmd) {
      print_value(theory::fisher_beta(f_pi));
    } else if (*contraction_cmd) {
      print_value(theory::unbalanced_contraction(c_pi));
    } else if (*tanh_cmd) {
      const auto b = theory::tanh_bounds_check(t_y);
      std::cout << "lower " << (b.lower_ok ? "ok" : "violated") << "\nupper " << (b.upper_ok ? "ok" : "violated")
                << "\n";
    } else if (*sched_cmd) {
      const auto s = theory::epoch_schedule(static_cast<double>(sched.n), sched.d, sched.sigma, sched.delta,
                                            sched.eps, sched.theta0_norm);
      std::cout << "omega " << csv::format(s.omega) << "\nl_eps " << s.final_epoch << "\n";
      csv::Writer w(std::cout);
      w.header({"epoch", "alpha_next", "length", "cumulative"});
      for (std::size_t l = 0; l < s.lengths.size(); ++l) {
        w.field(l).field(s.alphas[l + 1]).field(s.lengths[l]).field(s.cumulative[l]).end_row();
      }
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return 0;
}
