// Copyright 2026 The itnctl Authors
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

// Shared helpers for the test binaries.

#include <cmath>
#include <filesystem>
#include <random>
#include <string>

#include "itnctl/model.hpp"

namespace itnctl::testing {

inline bool close_rel(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b), 1e-300});
}

/// Reference parameters with the requested ITN usage and mortality policy.
inline ModelParams params_with(double b, ItnMortalityPolicy policy = ItnMortalityPolicy::FixedTerm) {
  ModelParams p;
  p.b = b;
  p.itn_mortality_policy = policy;
  return p;
}

/// Uniform states in [lo, hi]^4.
inline StateVec random_state(std::mt19937_64& rng, double lo = 1.0, double hi = 1e4) {
  std::uniform_real_distribution<double> d(lo, hi);
  const double a = d(rng), b = d(rng), c = d(rng), e = d(rng);
  return {a, b, c, e};
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() / ("itnctl_test_" + tag);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace itnctl::testing
