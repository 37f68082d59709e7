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

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "itnctl/config.hpp"
#include "itnctl/verification.hpp"

namespace itnctl {

inline constexpr const char* kToolVersion = "itnctl 1.0.0";

/// Record of one run: resolved configuration, solver diagnostics and the
/// files written. The resolved config alone reproduces the CSVs bit for bit.
struct RunManifest {
  ScenarioConfig config;
  bool control_enabled = true;
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<double> residuals;
  double cost_value = 0.0;
  double infectious_burden = 0.0;  // trapezoid integral of I_h, human-days
  double first_day_below_one = -1.0;  // first grid time with I_h < 1; -1 if never
  double duration_seconds = 0.0;
  std::vector<std::filesystem::path> artifacts;
  std::string tool_version = kToolVersion;
  std::string error;  // set only for failed sweep members

  bool ok() const { return error.empty(); }
};

std::string manifest_json(const RunManifest& m);

/// One line of a plot, read from a CSV column against the `t` column.
struct PlotSource {
  std::filesystem::path csv;
  std::string column;
  std::string label;
};

struct PlotSpec {
  std::string title;
  std::string y_label;
  std::vector<PlotSource> sources;
  std::filesystem::path output;
  std::optional<std::pair<double, double>> y_range;
};

/// Renders each spec to SVG from its CSV sources (x axis: time in days).
/// Throws MissingArtifact when a CSV, a column or every source is missing.
std::vector<std::filesystem::path> render_plots(const std::vector<PlotSpec>& specs);

/// Forward-only run (u = 0) when control is disabled, otherwise a sweep
/// solve plus an uncontrolled baseline. Writes trajectory, control and
/// baseline CSVs, SVG figures, the resolved config and the manifest into
/// cfg.output_dir. Files written before a failure are removed.
RunManifest run_scenario(const ScenarioConfig& cfg);

/// One run_scenario per b in cfg.sweep_b (members run concurrently), then a
/// combined CSV, a summary CSV, overlay figures and an index manifest.
/// Failed members carry their error and do not stop the others.
std::vector<RunManifest> run_sweep(const ScenarioConfig& cfg);

struct CostComparison {
  RunManifest j1;
  RunManifest j2;
  /// Per compartment: max_t |x_J1 - x_J2| / max_t max(|x_J1|, |x_J2|).
  std::array<double, 4> state_discrepancy{};
  double min_control_excess = 0.0;  // min_t (u_J2 - u_J1)
  double max_control_excess = 0.0;  // max_t (u_J2 - u_J1)
};

/// Solves the scenario under J1 and under J2 (everything else equal) and
/// writes comparison CSV and figures.
CostComparison compare_costs(const ScenarioConfig& cfg);

struct VerifyReport {
  GradCheckReport gradient;
  CrossValidationReport agreement;
  double gradient_fraction_within_1e3 = 0.0;
  bool gradient_ok = false;   // >= 95% of directions <= 1e-3 and all <= 1e-2
  bool agreement_ok = false;  // relative cost gap <= 1%
  std::vector<std::filesystem::path> artifacts;
};

/// Adjoint-gradient finite-difference check at u = 0.5 on a gradcheck_n grid
/// and FBS (Exact costates) against the projected-gradient oracle on a
/// verify_n grid. Writes <name>_verify.json.
VerifyReport run_verification(const ScenarioConfig& cfg);

}  // namespace itnctl
