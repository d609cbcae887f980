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

#include "emlab/config.hpp"

#include <fstream>
#include <stdexcept>

#include "emlab/error.hpp"

namespace emlab {

using nlohmann::json;

namespace {

json vec_json(const Vector& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

Vector vec_from(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("expected a numeric array");
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

std::vector<Vector> vecs_from(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("expected an array of vectors");
  std::vector<Vector> out;
  for (const auto& item : j) out.push_back(vec_from(item));
  return out;
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  const auto it = j.find(key);
  return it == j.end() ? fallback : it->get<T>();
}

const json& require(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw std::invalid_argument(std::string("missing field '") + key + "'");
  return *it;
}

// Wraps nlohmann type errors so they surface as configuration errors.
template <class F>
auto config_guard(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("invalid config: ") + e.what());
  }
}

}  // namespace

void validate(const ExperimentConfig& cfg) {
  if (cfg.scenario.empty()) throw std::invalid_argument("scenario id is empty");
  if (cfg.n_grid.empty()) throw std::invalid_argument("n grid is empty");
  if (cfg.d_grid.empty()) throw std::invalid_argument("d grid is empty");
  if (cfg.trials < 1) throw std::invalid_argument("trials must be >= 1");
  for (auto n : cfg.n_grid) if (n < 1) throw std::invalid_argument("sample sizes must be >= 1");
  for (auto d : cfg.d_grid) if (d < 1) throw std::invalid_argument("dimensions must be >= 1");
  if (cfg.metrics.empty()) throw std::invalid_argument("no metric configured");
  if (!(cfg.em.tol >= 0.0)) throw std::invalid_argument("tolerance must be nonnegative");
  if (cfg.em.max_iter < 0) throw std::invalid_argument("max_iter must be nonnegative");
  validate(cfg.truth);
  validate(cfg.fit);
}

json to_json(const TrueModel& model) {
  return std::visit(
      [](const auto& m) -> json {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, GaussianNull>) {
          return {{"kind", "gaussian-null"}, {"sigma", m.sigma}, {"dim", m.dim}};
        } else if constexpr (std::is_same_v<T, TwoMixture>) {
          return {{"kind", "two-mixture"}, {"location", vec_json(m.location)}, {"weight", m.weight},
                  {"sigma", m.sigma}};
        } else if constexpr (std::is_same_v<T, RegressionModel>) {
          return {{"kind", "regression"}, {"coef", vec_json(m.coef)}, {"sigma", m.sigma}};
        } else {
          json locs = json::array();
          for (const auto& l : m.locations) locs.push_back(vec_json(l));
          return {{"kind", "general-mixture"}, {"weights", m.weights}, {"locations", locs},
                  {"sigma", m.sigma}};
        }
      },
      model);
}

TrueModel true_model_from_json(const json& j) {
  return config_guard([&]() -> TrueModel {
    const auto kind = require(j, "kind").get<std::string>();
    const double sigma = get_or(j, "sigma", 1.0);
    if (kind == "gaussian-null") return GaussianNull{sigma, get_or(j, "dim", 1)};
    if (kind == "two-mixture") {
      return TwoMixture{vec_from(require(j, "location")), get_or(j, "weight", 0.5), sigma};
    }
    if (kind == "regression") return RegressionModel{vec_from(require(j, "coef")), sigma};
    if (kind == "general-mixture") {
      return GeneralMixture{require(j, "weights").get<std::vector<double>>(),
                            vecs_from(require(j, "locations")), sigma};
    }
    throw std::invalid_argument("unknown true model kind '" + kind + "'");
  });
}

json to_json(const FitSpec& fit) {
  json out = std::visit(
      [](const auto& f) -> json {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, SymmetricFit>) {
          return {{"kind", f.weight == 0.5 ? "balanced" : "unbalanced"}, {"weight", f.weight}};
        } else if constexpr (std::is_same_v<T, SymmetricUnknownWeightFit>) {
          return {{"kind", "unknown-weight"}};
        } else if constexpr (std::is_same_v<T, RegressionFit>) {
          return {{"kind", "regression"}};
        } else {
          json ties = json::array();
          for (const auto& [a, b] : f.sign_ties) ties.push_back({a, b});
          return {{"kind", "general"}, {"components", f.components}, {"weights", f.weights},
                  {"weights_free", f.weights_free}, {"sign_ties", ties}};
        }
      },
      fit.variant);
  out["sigma"] = fit.sigma;
  out["dim"] = fit.dim;
  return out;
}

FitSpec fit_from_json(const json& j) {
  return config_guard([&] {
    FitSpec fit;
    fit.sigma = get_or(j, "sigma", 1.0);
    fit.dim = get_or(j, "dim", 1);
    const auto kind = require(j, "kind").get<std::string>();
    if (kind == "balanced") {
      fit.variant = SymmetricFit{0.5};
    } else if (kind == "unbalanced" || kind == "symmetric") {
      fit.variant = SymmetricFit{require(j, "weight").get<double>()};
    } else if (kind == "unknown-weight") {
      fit.variant = SymmetricUnknownWeightFit{};
    } else if (kind == "regression") {
      fit.variant = RegressionFit{};
    } else if (kind == "general") {
      GeneralFit g;
      g.components = require(j, "components").get<int>();
      g.weights = get_or(j, "weights", std::vector<double>{});
      if (g.weights.empty() && g.components > 0) {
        g.weights.assign(static_cast<std::size_t>(g.components), 1.0 / g.components);
      }
      g.weights_free = get_or(j, "weights_free", false);
      for (const auto& tie : get_or(j, "sign_ties", json::array())) {
        g.sign_ties.emplace_back(tie.at(0).get<int>(), tie.at(1).get<int>());
      }
      fit.variant = std::move(g);
    } else {
      throw std::invalid_argument("unknown fit kind '" + kind + "'");
    }
    return fit;
  });
}

json to_json(const ParamState& state) {
  json locs = json::array();
  for (const auto& l : state.locations) locs.push_back(vec_json(l));
  return {{"weights", state.weights}, {"locations", locs}};
}

ParamState param_state_from_json(const json& j) {
  return config_guard([&] {
    ParamState state;
    state.locations = vecs_from(require(j, "locations"));
    state.weights = get_or(j, "weights", std::vector<double>{});
    return state;
  });
}

json to_json(const EmRunConfig& em) {
  json init;
  if (const auto* state = std::get_if<ParamState>(&em.init)) {
    init = to_json(*state);
    init["kind"] = "explicit";
  } else {
    const auto& r = std::get<RandomInit>(em.init);
    init = {{"kind", "random"}, {"scale", r.scale}};
    if (r.norm) init["norm"] = *r.norm;
    if (r.weight) init["weight"] = *r.weight;
    if (!r.centers.empty()) {
      json centers = json::array();
      for (const auto& c : r.centers) centers.push_back(vec_json(c));
      init["centers"] = centers;
    }
  }
  json out = {{"tol", em.tol}, {"max_iter", em.max_iter}, {"init", init},
              {"record_trajectory", em.record_trajectory}};
  if (em.reference) out["reference"] = vec_json(*em.reference);
  return out;
}

EmRunConfig em_config_from_json(const json& j) {
  return config_guard([&] {
    EmRunConfig em;
    em.tol = get_or(j, "tol", em.tol);
    em.max_iter = get_or(j, "max_iter", em.max_iter);
    em.record_trajectory = get_or(j, "record_trajectory", false);
    if (j.contains("reference")) em.reference = vec_from(j.at("reference"));
    if (j.contains("init")) {
      const auto& init = j.at("init");
      const auto kind = get_or(init, "kind", std::string("random"));
      if (kind == "explicit") {
        em.init = param_state_from_json(init);
      } else if (kind == "random") {
        RandomInit r;
        r.scale = get_or(init, "scale", 1.0);
        if (init.contains("norm")) r.norm = init.at("norm").get<double>();
        if (init.contains("weight")) r.weight = init.at("weight").get<double>();
        if (init.contains("centers")) r.centers = vecs_from(init.at("centers"));
        em.init = std::move(r);
      } else {
        throw std::invalid_argument("unknown init kind '" + kind + "'");
      }
    }
    return em;
  });
}

json to_json(const ExperimentConfig& cfg) {
  return {{"scenario", cfg.scenario},
          {"truth", to_json(cfg.truth)},
          {"fit", to_json(cfg.fit)},
          {"n_grid", cfg.n_grid},
          {"d_grid", cfg.d_grid},
          {"trials", cfg.trials},
          {"master_seed", cfg.master_seed},
          {"em", to_json(cfg.em)},
          {"metrics", cfg.metrics},
          {"output", cfg.output.string()}};
}

ExperimentConfig experiment_from_json(const json& j) {
  return config_guard([&] {
    ExperimentConfig cfg;
    cfg.scenario = require(j, "scenario").get<std::string>();
    cfg.truth = true_model_from_json(require(j, "truth"));
    cfg.fit = fit_from_json(require(j, "fit"));
    cfg.n_grid = require(j, "n_grid").get<std::vector<std::size_t>>();
    cfg.d_grid = get_or(j, "d_grid", std::vector<int>{dimension(cfg.truth)});
    cfg.trials = get_or(j, "trials", 1);
    cfg.master_seed = get_or(j, "master_seed", std::uint64_t{0});
    if (j.contains("em")) cfg.em = em_config_from_json(j.at("em"));
    cfg.metrics = get_or(j, "metrics", std::vector<std::string>{"euclidean"});
    cfg.output = get_or(j, "output", std::string{});
    validate(cfg);
    return cfg;
  });
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("malformed JSON in " + path.string() + ": " + e.what());
  }
}

}  // namespace emlab
