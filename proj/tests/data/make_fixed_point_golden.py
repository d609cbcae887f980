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

"""Regenerates fixed_point_golden.json.

Independent oracle for the C++ root finder: numpy draws the datasets, the
positive roots of g(t) = mean(x tanh(t x)) - t are bracketed on a uniform
grid of 20001 points over (0, max|x| + 1] and polished with scipy's brentq.
"""

import json
import pathlib

import numpy as np
from scipy.optimize import brentq


def positive_roots(x):
    def g(t):
        return float(np.mean(x * np.tanh(t * x)) - t)

    hi = float(np.max(np.abs(x))) + 1.0
    grid = np.linspace(hi * 1e-6, hi, 20001)
    values = np.mean(x[None, :] * np.tanh(grid[:, None] * x[None, :]), axis=1) - grid
    roots = []
    for a, b, ga, gb in zip(grid[:-1], grid[1:], values[:-1], values[1:]):
        if ga == 0.0:
            roots.append(float(a))
        elif ga * gb < 0.0:
            roots.append(brentq(g, a, b, xtol=1e-15, rtol=1e-15))
    return roots


def main():
    rng = np.random.default_rng(20261016)
    cases = []
    for n in rng.integers(10, 201, size=98):
        x = rng.standard_normal(int(n))
        cases.append({"data": x.tolist(), "roots": positive_roots(x)})
    # Two-point law +-a: the root solves t = a tanh(a t), present iff a > 1.
    for a in (0.8, 1.5):
        x = np.array([a, -a, a, -a])
        cases.append({"data": x.tolist(), "roots": positive_roots(x)})
    out = pathlib.Path(__file__).with_name("fixed_point_golden.json")
    out.write_text(json.dumps({"license": "Apache-2.0; Copyright 2026 The emlab Authors", "sigma": 1.0, "cases": cases}, indent=1) + "\n")
    with_root = sum(1 for c in cases if c["roots"])
    print(f"{len(cases)} datasets, {with_root} with a positive root")


if __name__ == "__main__":
    main()
