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
#include <functional>
#include <optional>
#include <vector>

#include "itnctl/grid.hpp"
#include "itnctl/model.hpp"
#include "itnctl/sweep.hpp"

namespace itnctl {

struct GradCheckReport {
  std::size_t directions_tested = 0;
  double max_rel_error = 0.0;
  std::vector<double> per_direction_errors;
  std::vector<double> adjoint_derivatives;  // <gradient, v> per direction
  std::vector<double> fd_derivatives;       // central differences per direction
};

struct CrossValidationReport {
  double j_fbs = 0.0;
  double j_direct = 0.0;
  double rel_gap = 0.0;  // |j_fbs - j_direct| / max(|j_fbs|, 1)
  double control_l2_distance = 0.0;
  std::size_t fbs_iterations = 0;
  std::size_t direct_iterations = 0;
  bool fbs_converged = false;
  bool direct_converged = false;
};

/// Backtracking line search for the projected-gradient oracle.
struct ArmijoRule {
  double initial_step = 0.0;  // <= 0 selects 1 / c
  double shrink = 0.5;
  double sufficient_decrease = 1e-4;
  double growth = 2.0;  // applied to the accepted step before the next search
  double max_step_factor = 16.0;  // cap, in multiples of the initial step
  std::size_t max_backtracks = 50;
};

/// L2 gradient of J with respect to u, sampled on the grid:
/// dH/du = c u + (l1 - l2) lambda_h s_h along the trajectory driven by u,
/// with costates from the Exact adjoint.
std::vector<double> cost_gradient_adjoint(const ModelParams& p, const StateVec& x0,
                                          const ControlGrid& u, CostKind which);

/// Cost of the discretised problem (RK4 states, trapezoid quadrature).
double discrete_cost(const ModelParams& p, const StateVec& x0, const ControlGrid& u,
                     CostKind which);

enum class DirectionSign {
  Nonnegative,  // entries uniform in [0, 1]
  Signed,       // entries uniform in [-1, 1]; <g, v> may nearly cancel
};

/// Random directions, zeroed at nodes where u +- epsilon would leave [0, 1].
std::vector<std::vector<double>> admissible_directions(
    const ControlGrid& u, std::size_t count, double epsilon, std::uint64_t seed,
    DirectionSign sign = DirectionSign::Nonnegative);

using CostFunction = std::function<double(const ControlGrid&)>;

/// Compares <gradient, v> (trapezoid inner product) against
/// (J(u + eps v) - J(u - eps v)) / (2 eps) for each direction. Directions are
/// evaluated in parallel. Throws DegenerateDirection for a zero direction.
GradCheckReport finite_difference_check(const CostFunction& cost,
                                        const std::vector<double>& gradient,
                                        const ControlGrid& u,
                                        const std::vector<std::vector<double>>& directions,
                                        double epsilon);

/// Single-threaded reference for finite_difference_check.
GradCheckReport finite_difference_check_serial(const CostFunction& cost,
                                               const std::vector<double>& gradient,
                                               const ControlGrid& u,
                                               const std::vector<std::vector<double>>& directions,
                                               double epsilon);

/// Adjoint gradient of the ITN problem checked along n_directions random
/// admissible directions.
GradCheckReport finite_difference_gradient_check(const ModelParams& p, const StateVec& x0,
                                                 const ControlGrid& u, CostKind which,
                                                 std::size_t n_directions, double epsilon,
                                                 std::uint64_t seed,
                                                 DirectionSign sign = DirectionSign::Nonnegative);

/// Projected-gradient direct method on the discretised problem:
/// u <- clamp(u - alpha g, 0, 1) with Armijo backtracking, stopping when the
/// L2 norm of the projected gradient is <= 1e-4 (1 + |J|).
/// per_iteration_costs holds J before each accepted step plus the final value.
SolveResult direct_solve_projected_gradient(const ModelParams& p, const StateVec& x0,
                                            const TimeGrid& grid, CostKind which,
                                            std::size_t max_iters, const ArmijoRule& step_rule = {},
                                            const std::optional<ControlGrid>& initial_guess = {});

/// Runs fbs_solve with cfg and the direct method on the same grid and cost.
CrossValidationReport cross_validate(const ModelParams& p, const StateVec& x0,
                                     const TimeGrid& grid, const SweepConfig& cfg,
                                     std::size_t direct_max_iters = 2000,
                                     const ArmijoRule& step_rule = {});

/// Builds a report from two finished solves.
CrossValidationReport compare_solutions(const SolveResult& fbs, const SolveResult& direct);

}  // namespace itnctl
