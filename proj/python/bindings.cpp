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

// Python bindings for the emlab core. Vectors and sample matrices map to
// numpy arrays; configs and rate tables cross the boundary as JSON text.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "emlab/config.hpp"
#include "emlab/em_population.hpp"
#include "emlab/em_sample.hpp"
#include "emlab/error.hpp"
#include "emlab/fixedpoint.hpp"
#include "emlab/harness.hpp"
#include "emlab/metrics.hpp"
#include "emlab/theory.hpp"

namespace py = pybind11;
using namespace emlab;

namespace {

nlohmann::json table_json(const RateTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : table.rows) {
    rows.push_back({{"scenario", r.scenario}, {"metric", r.metric}, {"n", r.n}, {"d", r.d}, {"trials", r.trials},
                    {"mean", r.mean}, {"sd", r.sd}, {"report", r.report}});
  }
  nlohmann::json slopes = nlohmann::json::array();
  for (const auto& s : table.slopes) {
    slopes.push_back({{"scenario", s.scenario}, {"series", s.series}, {"slope", s.slope}, {"intercept", s.intercept}});
  }
  return {{"rows", rows}, {"slopes", slopes}};
}

MixingMeasure measure_from(const std::vector<double>& weights, const std::vector<Vector>& locations) {
  if (weights.size() != locations.size()) throw std::invalid_argument("weights and locations differ in length");
  MixingMeasure m;
  for (std::size_t i = 0; i < weights.size(); ++i) m.atoms.push_back({weights[i], locations[i]});
  return m;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "EM for over-specified Gaussian mixtures: operators, theory bounds and rate experiments.";
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  m.def("symmetric_radial_map", [](double r, double pi, double sigma) { return symmetric_radial_map(r, pi, sigma); },
        py::arg("r"), py::arg("pi"), py::arg("sigma") = 1.0);
  m.def("pop_em_symmetric", [](const Vector& theta, double pi, double sigma) {
    return pop_em_symmetric(theta, pi, sigma);
  }, py::arg("theta"), py::arg("pi"), py::arg("sigma") = 1.0);
  m.def("pop_em_unknown_weight", [](const Vector& theta, double pi, double sigma) {
    const auto out = pop_em_unknown_weight(theta, pi, sigma);
    return py::make_tuple(out.weight, out.location);
  }, py::arg("theta"), py::arg("pi"), py::arg("sigma") = 1.0);
  m.def("pop_em_regression", [](const Vector& theta) { return pop_em_regression(theta); }, py::arg("theta"));
  m.def("regression_radial_map", [](double r) { return regression_radial_map(r); }, py::arg("r"));

  m.def("sample_em_symmetric_step", [](const Vector& theta, double pi, const Matrix& points, double sigma) {
    Dataset data;
    data.points = points;
    return sample_em_symmetric_step(theta, pi, data, sigma);
  }, py::arg("theta"), py::arg("pi"), py::arg("points"), py::arg("sigma") = 1.0);
  m.def("find_nonzero_fixed_points", [](const Vector& x, double sigma) {
    Dataset data;
    data.points = x;
    return find_nonzero_fixed_points(data, sigma);
  }, py::arg("x"), py::arg("sigma") = 1.0);

  m.def("wasserstein2", [](const std::vector<double>& wa, const std::vector<Vector>& la, const std::vector<double>& wb,
                           const std::vector<Vector>& lb) {
    return wasserstein2(measure_from(wa, la), measure_from(wb, lb));
  }, py::arg("weights_a"), py::arg("locations_a"), py::arg("weights_b"), py::arg("locations_b"));

  m.def("contraction_constant", &theory::contraction_constant);
  m.def("gamma_up", &theory::gamma_up, py::arg("theta_norm"), py::arg("sigma") = 1.0);
  m.def("gamma_low", &theory::gamma_low, py::arg("theta_norm"), py::arg("sigma") = 1.0);
  m.def("unbalanced_contraction", &theory::unbalanced_contraction, py::arg("pi"));
  m.def("alpha_sequence", &theory::alpha_sequence, py::arg("steps"));
  m.def("fisher_beta", &theory::fisher_beta, py::arg("pi"));
  m.def("tanh_bounds_check", [](double y) {
    const auto b = theory::tanh_bounds_check(y);
    return py::make_tuple(b.lower_ok, b.upper_ok);
  }, py::arg("y"));

  m.def("scenario_ids", [] {
    std::vector<std::string> ids;
    for (const auto& s : scenario_catalog()) ids.push_back(s.id);
    return ids;
  });
  m.def("scenario_configs_json", [](const std::string& id, std::uint64_t seed) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& cfg : scenario_preset(id, seed)) out.push_back(to_json(cfg));
    return out.dump();
  }, py::arg("scenario"), py::arg("seed"));
  m.def("run_scenario_json", [](const std::string& config, unsigned workers) {
    const auto cfg = experiment_from_json(nlohmann::json::parse(config));
    RateTable table;
    {
      py::gil_scoped_release release;
      table = run_scenario(cfg, workers);
    }
    return table_json(table).dump();
  }, py::arg("config"), py::arg("workers") = 0);
}
