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

#pragma once

#include <cstdint>
#include <optional>
#include <random>

namespace emlab {

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Per-trial random stream. The engine is std::mt19937_64, whose output
/// sequence is fixed by the standard; uniform and Gaussian variates are
/// produced here (53-bit mantissa fill, Box-Muller) so draws do not depend
/// on the standard library's distribution implementations.
class Stream {
 public:
  Stream(std::uint64_t master_seed, std::uint64_t trial_index);

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on the open interval (0, 1).
  double uniform();
  double normal();

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t trial_index() const { return trial_index_; }

 private:
  std::uint64_t master_seed_;
  std::uint64_t trial_index_;
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

Stream derive_stream(std::uint64_t master_seed, std::uint64_t trial_index);

/// Combines several integers into one trial index.
std::uint64_t combine_index(std::uint64_t a, std::uint64_t b);

}  // namespace emlab
