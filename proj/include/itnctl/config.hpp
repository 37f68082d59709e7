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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "itnctl/grid.hpp"
#include "itnctl/model.hpp"
#include "itnctl/sweep.hpp"

namespace itnctl {

/// Everything needed to reproduce a run. Keys of the config file are the
/// snake_case field names below (model parameters and initial compartments
/// are flattened: lambda_h_rec, ..., s_h, i_h, s_v, i_v).
struct ScenarioConfig {
  std::string name = "itn";
  ModelParams params;
  StateVec x0 = reference_initial_state();
  double t0 = 0.0;
  double tf = 100.0;
  std::size_t n = 5000;
  CostKind cost = CostKind::J1;
  AdjointMode adjoint_mode = AdjointMode::PaperStated;
  std::vector<double> sweep_b;
  bool control_enabled = true;
  std::filesystem::path output_dir = "out";
  std::uint64_t seed = 42;

  // Sweep iteration.
  double relaxation = 0.5;
  double tol = 1e-3;
  std::size_t max_iters = 500;

  // Verification.
  std::size_t verify_n = 500;
  std::size_t gradcheck_n = 2000;
  std::size_t gradcheck_directions = 20;
  double gradcheck_epsilon = 1e-5;
  std::size_t direct_max_iters = 2000;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;

  TimeGrid grid() const { return {t0, tf, n}; }
  SweepConfig sweep_config() const;
};

/// The seven ITN usage levels of the reference b-sweep.
std::vector<double> reference_b_values();

/// Throws InvariantViolation naming the violated constraint.
void validate(const ScenarioConfig& cfg);

/// Applies `key = value` lines on top of `base`. Blank lines and `#`
/// comments are ignored. Throws ParseError (with line/column) or UnknownKey.
/// The result is not validated.
ScenarioConfig parse_config(std::string_view text, ScenarioConfig base = {});

/// Applies one KEY=VALUE override. Throws ParseError or UnknownKey.
void apply_override(ScenarioConfig& cfg, std::string_view assignment);

/// Reads the optional file, applies overrides in order and validates.
ScenarioConfig load_config(const std::optional<std::filesystem::path>& path,
                           const std::vector<std::string>& overrides = {});

/// Serialises every key with round-trip precision; parse_config inverts it.
std::string to_config_text(const ScenarioConfig& cfg);

/// Every key understood by parse_config, in file order.
std::vector<std::string_view> config_keys();

/// Shortest decimal form that reads back to the same double.
std::string format_double(double v);

}  // namespace itnctl
