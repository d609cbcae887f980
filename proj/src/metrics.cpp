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

#include "emlab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace emlab {

double euclidean_error(const Vector& estimate, const Vector& truth, bool sign_invariant) {
  if (estimate.size() != truth.size()) throw std::invalid_argument("dimension mismatch");
  const double direct = (estimate - truth).norm();
  if (!sign_invariant) return direct;
  return std::min(direct, (estimate + truth).norm());
}

SlopeFit slope_fit(std::span<const RatePoint> points) {
  if (points.size() < 2) throw std::invalid_argument("slope fit needs at least two points");
  double mx = 0.0;
  double my = 0.0;
  for (const auto& p : points) {
    if (!(p.x > 0.0)) throw std::invalid_argument("slope fit needs positive abscissae");
    if (!(p.err > 0.0) || !std::isfinite(p.err)) throw std::invalid_argument("slope fit needs positive errors");
    mx += std::log(p.x);
    my += std::log(p.err);
  }
  const double k = static_cast<double>(points.size());
  mx /= k;
  my /= k;
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& p : points) {
    const double dx = std::log(p.x) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(p.err) - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("slope fit needs two distinct abscissae");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

TrialSummary aggregate_trials(std::span<const double> errors) {
  if (errors.empty()) throw std::invalid_argument("no trials to aggregate");
  double mean = 0.0;
  for (double e : errors) mean += e;
  mean /= static_cast<double>(errors.size());
  double sd = 0.0;
  if (errors.size() > 1) {
    double ss = 0.0;
    for (double e : errors) ss += (e - mean) * (e - mean);
    sd = std::sqrt(ss / static_cast<double>(errors.size() - 1));
  }
  return {mean, sd, mean + 2.0 * sd};
}

}  // namespace emlab
