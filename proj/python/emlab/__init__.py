# Copyright 2026 The emlab Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""EM for over-specified Gaussian mixtures.

Thin layer over the compiled core: array-valued operators are re-exported
as is, and JSON-speaking experiment entry points are wrapped to take and
return Python dicts.
"""

import json

from ._core import (
    IoError,
    NumericError,
    alpha_sequence,
    contraction_constant,
    find_nonzero_fixed_points,
    fisher_beta,
    gamma_low,
    gamma_up,
    pop_em_regression,
    pop_em_symmetric,
    pop_em_unknown_weight,
    regression_radial_map,
    sample_em_symmetric_step,
    scenario_ids,
    symmetric_radial_map,
    tanh_bounds_check,
    unbalanced_contraction,
    wasserstein2,
)
from . import _core


def scenario_configs(scenario, seed):
    """Experiment configs behind a built-in scenario id, as dicts."""
    return json.loads(_core.scenario_configs_json(scenario, seed))


def run_scenario(config, workers=0):
    """Run one experiment config (dict) and return its rate table as a dict."""
    return json.loads(_core.run_scenario_json(json.dumps(config), workers))


__all__ = [
    "IoError",
    "NumericError",
    "alpha_sequence",
    "contraction_constant",
    "find_nonzero_fixed_points",
    "fisher_beta",
    "gamma_low",
    "gamma_up",
    "pop_em_regression",
    "pop_em_symmetric",
    "pop_em_unknown_weight",
    "regression_radial_map",
    "run_scenario",
    "sample_em_symmetric_step",
    "scenario_configs",
    "scenario_ids",
    "symmetric_radial_map",
    "tanh_bounds_check",
    "unbalanced_contraction",
    "wasserstein2",
]
