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

#include "emlab/fixedpoint.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "emlab/parallel.hpp"

namespace emlab {

double fixed_point_gap(double theta, const Dataset& data, double sigma) {
  const auto x = data.points.col(0);
  const double scale = theta / (sigma * sigma);
  double total = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) total += x[i] * std::tanh(scale * x[i]);
  return total / static_cast<double>(x.size()) - theta;
}

std::vector<double> find_nonzero_fixed_points(const Dataset& data, double sigma,
                                              const RootScanOptions& options) {
  if (data.dim() != 1) throw std::invalid_argument("fixed-point analysis needs d = 1");
  if (data.size() == 0) throw std::invalid_argument("empty sample");
  if (!(sigma > 0.0)) throw std::invalid_argument("invalid scale");

  const double theta_max = data.points.col(0).cwiseAbs().maxCoeff() + 1.0;
  const double step = options.relative_step * theta_max;

  // g(0) = 0, so the sign just right of zero is the sign of
  // g'(0) = mean(x^2) / sigma^2 - 1 (negative when that vanishes).
  const double slope = data.points.col(0).squaredNorm() / static_cast<double>(data.size()) / (sigma * sigma) - 1.0;
  auto sign_of = [](double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); };
  int left_sign = slope > 0.0 ? 1 : -1;
  double left = 0.0;

  std::vector<double> roots;
  const auto steps = static_cast<int>(std::ceil(theta_max / step));
  for (int s = 1; s <= steps; ++s) {
    const double right = std::min(theta_max, s * step);
    const double g_right = fixed_point_gap(right, data, sigma);
    const int right_sign = sign_of(g_right);
    if (right_sign == 0) {
      roots.push_back(right);
      left = right;
      left_sign = -left_sign;
      continue;
    }
    if (right_sign != left_sign) {
      double lo = left;
      double hi = right;
      while (hi - lo > options.bisection_tol) {
        const double mid = 0.5 * (lo + hi);
        const int mid_sign = sign_of(fixed_point_gap(mid, data, sigma));
        if (mid_sign == 0) {
          lo = hi = mid;
          break;
        }
        if (mid_sign == left_sign) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    left = right;
    left_sign = right_sign;
  }
  return roots;
}

std::vector<FixedPointScalingRow> fixed_point_scaling_experiment(const std::vector<std::size_t>& n_list,
                                                                 int trials, std::uint64_t master_seed,
                                                                 unsigned workers) {
  if (trials < 1) throw std::invalid_argument("no trials");
  if (n_list.empty()) throw std::invalid_argument("empty n grid");
  for (auto n : n_list) {
    if (n < 10) throw std::invalid_argument("each n must be >= 10");
  }

  std::vector<FixedPointScalingRow> rows;
  for (const auto n : n_list) {
    std::vector<double> largest(static_cast<std::size_t>(trials), 0.0);
    parallel_for(static_cast<std::size_t>(trials), workers, [&](std::size_t t) {
      Stream stream = derive_stream(master_seed, combine_index(n, t));
      const Dataset data = sample_mixture(GaussianNull{1.0, 1}, n, stream);
      const auto roots = find_nonzero_fixed_points(data, 1.0);
      largest[t] = roots.empty() ? 0.0 : roots.back();
    });

    FixedPointScalingRow row;
    row.n = n;
    row.trials = trials;
    std::vector<double> scaled;
    const double factor = std::pow(static_cast<double>(n), 0.25);
    for (double r : largest) {
      if (r > 0.0) scaled.push_back(r * factor);
    }
    row.nonzero = static_cast<int>(scaled.size());
    row.nonzero_fraction = static_cast<double>(scaled.size()) / trials;
    if (!scaled.empty()) {
      std::sort(scaled.begin(), scaled.end());
      const auto m = scaled.size();
      row.median_scaled = m % 2 == 1 ? scaled[m / 2] : 0.5 * (scaled[m / 2 - 1] + scaled[m / 2]);
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace emlab
