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
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "itnctl/grid.hpp"
#include "itnctl/integrator.hpp"
#include "itnctl/model.hpp"

namespace itnctl {

/// Snapshot handed to SweepConfig::observer after every control update.
struct SweepIteration {
  std::size_t iteration;
  const ControlGrid& control;
  const Trajectory<StateVec>& states;
  const Trajectory<AdjointVec>& adjoints;
  double residual;
};

struct SweepConfig {
  double relaxation = 0.5;  // weight of the new control in the convex combination
  double tol = 1e-3;
  std::size_t max_iters = 500;
  AdjointMode adjoint_mode = AdjointMode::PaperStated;
  CostKind cost = CostKind::J1;
  std::optional<ControlGrid> initial_guess;  // u = 0 when empty
  std::function<void(const SweepIteration&)> observer;
};

/// Throws InvariantViolation unless 0 < relaxation <= 1, tol > 0, max_iters >= 1.
void validate(const SweepConfig& cfg);

struct SolveResult {
  Trajectory<StateVec> state_traj;
  Trajectory<AdjointVec> adjoint_traj;
  ControlGrid control;
  double cost_value = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<double> per_iteration_residuals;
  std::vector<double> per_iteration_costs;
};

/// Relaxed projection update:
///   (1 - relaxation) prev + relaxation clamp(lambda_h s_h (l2 - l1) / c, 0, 1)
/// evaluated independently at every node (OpenMP parallel).
ControlGrid update_control(const ControlGrid& prev, const Trajectory<StateVec>& x,
                           const Trajectory<AdjointVec>& l, const ModelParams& p,
                           double relaxation);

/// Single-threaded reference for update_control; results are bit-identical.
ControlGrid update_control_serial(const ControlGrid& prev, const Trajectory<StateVec>& x,
                                  const Trajectory<AdjointVec>& l, const ModelParams& p,
                                  double relaxation);

/// Largest ratio sum|next - prev| / sum|next| over the tracked variables.
/// A variable whose next samples are all zero counts as 0 if unchanged and
/// +inf otherwise.
double relative_change(std::span<const std::vector<double>> prev,
                       std::span<const std::vector<double>> next);

/// Passes iff tol * sum|next_v| - sum|next_v - prev_v| >= 0 for every variable v.
bool convergence_test(std::span<const std::vector<double>> prev,
                      std::span<const std::vector<double>> next, double tol);

/// Forward-backward sweep. Alternates forward state and backward costate RK4
/// integrations with the relaxed projection update until every state, costate
/// and the control pass convergence_test. On hitting max_iters the last iterate
/// is returned with converged = false.
SolveResult fbs_solve(const ModelParams& p, const StateVec& x0, const TimeGrid& grid,
                      const SweepConfig& cfg);

/// The nine tracked variables (4 states, 4 costates, control) as plain arrays.
std::vector<std::vector<double>> tracked_variables(const Trajectory<StateVec>& x,
                                                   const Trajectory<AdjointVec>& l,
                                                   const ControlGrid& u);

}  // namespace itnctl
