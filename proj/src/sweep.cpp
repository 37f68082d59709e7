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

#include "itnctl/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "itnctl/errors.hpp"

namespace itnctl {

void validate(const SweepConfig& cfg) {
  if (!(cfg.relaxation > 0.0 && cfg.relaxation <= 1.0)) {
    throw InvariantViolation("sweep constraint violated: 0 < relaxation <= 1");
  }
  if (!(cfg.tol > 0.0)) throw InvariantViolation("sweep constraint violated: tol > 0");
  if (cfg.max_iters < 1) throw InvariantViolation("sweep constraint violated: max_iters >= 1");
}

namespace {

void require_aligned(const ControlGrid& prev, const Trajectory<StateVec>& x,
                     const Trajectory<AdjointVec>& l) {
  if (!(prev.grid() == x.grid) || !(prev.grid() == l.grid)) {
    throw std::invalid_argument("update_control: control, states and costates use different grids");
  }
}

inline double relaxed_sample(double prev, const StateVec& x, const AdjointVec& l,
                             const ModelParams& p, double relaxation) {
  const double projected = pointwise_optimal_control(p, x, l);
  // Both terms are in [0, 1]; the clamp only absorbs rounding.
  return std::clamp((1.0 - relaxation) * prev + relaxation * projected, 0.0, 1.0);
}

}  // namespace

ControlGrid update_control(const ControlGrid& prev, const Trajectory<StateVec>& x,
                           const Trajectory<AdjointVec>& l, const ModelParams& p,
                           double relaxation) {
  require_aligned(prev, x, l);
  const auto n = static_cast<std::ptrdiff_t>(prev.size());
  std::vector<double> next(prev.size());
  // Exceptions must not escape an OpenMP region; a bad node is re-raised below.
  bool failed = false;
#pragma omp parallel for schedule(static) reduction(|| : failed)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    if (!(x[k].n_h() > 0.0)) {
      failed = true;
      continue;
    }
    next[k] = relaxed_sample(prev[k], x[k], l[k], p, relaxation);
  }
  if (failed) return update_control_serial(prev, x, l, p, relaxation);
  return ControlGrid(prev.grid(), std::move(next));
}

ControlGrid update_control_serial(const ControlGrid& prev, const Trajectory<StateVec>& x,
                                  const Trajectory<AdjointVec>& l, const ModelParams& p,
                                  double relaxation) {
  require_aligned(prev, x, l);
  std::vector<double> next(prev.size());
  for (std::size_t k = 0; k < next.size(); ++k) {
    next[k] = relaxed_sample(prev[k], x[k], l[k], p, relaxation);
  }
  return ControlGrid(prev.grid(), std::move(next));
}

namespace {

struct Sums {
  double magnitude = 0.0;
  double change = 0.0;
};

Sums variable_sums(const std::vector<double>& prev, const std::vector<double>& next) {
  if (prev.size() != next.size()) {
    throw std::invalid_argument("convergence test: sample counts differ");
  }
  Sums s;
  for (std::size_t i = 0; i < next.size(); ++i) {
    s.magnitude += std::abs(next[i]);
    s.change += std::abs(next[i] - prev[i]);
  }
  return s;
}

void require_same_count(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("convergence test: variable counts differ");
}

}  // namespace

double relative_change(std::span<const std::vector<double>> prev,
                       std::span<const std::vector<double>> next) {
  require_same_count(prev.size(), next.size());
  double worst = 0.0;
  for (std::size_t v = 0; v < next.size(); ++v) {
    const Sums s = variable_sums(prev[v], next[v]);
    double ratio = 0.0;
    if (s.magnitude > 0.0) {
      ratio = s.change / s.magnitude;
    } else if (s.change > 0.0) {
      ratio = std::numeric_limits<double>::infinity();
    }
    worst = std::max(worst, ratio);
  }
  return worst;
}

bool convergence_test(std::span<const std::vector<double>> prev,
                      std::span<const std::vector<double>> next, double tol) {
  require_same_count(prev.size(), next.size());
  for (std::size_t v = 0; v < next.size(); ++v) {
    const Sums s = variable_sums(prev[v], next[v]);
    if (tol * s.magnitude - s.change < 0.0) return false;
  }
  return true;
}

std::vector<std::vector<double>> tracked_variables(const Trajectory<StateVec>& x,
                                                   const Trajectory<AdjointVec>& l,
                                                   const ControlGrid& u) {
  std::vector<std::vector<double>> vars;
  vars.reserve(9);
  for (std::size_t k = 0; k < 4; ++k) vars.push_back(x.component(k));
  for (std::size_t k = 0; k < 4; ++k) vars.push_back(l.component(k));
  vars.emplace_back(u.values().begin(), u.values().end());
  return vars;
}

SolveResult fbs_solve(const ModelParams& p, const StateVec& x0, const TimeGrid& grid,
                      const SweepConfig& cfg) {
  validate(p);
  validate(cfg);
  ControlGrid u = cfg.initial_guess.value_or(ControlGrid(grid, 0.0));
  if (!(u.grid() == grid)) throw std::invalid_argument("fbs_solve: initial guess grid differs");

  auto x = simulate_states(p, x0, u);
  auto l = solve_adjoint(p, x, u, cfg.adjoint_mode, cfg.cost);
  auto vars = tracked_variables(x, l, u);

  SolveResult result{x, l, u, 0.0, 0, false, {}, {}};
  for (std::size_t it = 1; it <= cfg.max_iters; ++it) {
    ControlGrid u_next = update_control(u, x, l, p, cfg.relaxation);
    auto x_next = simulate_states(p, x0, u_next);
    auto l_next = solve_adjoint(p, x_next, u_next, cfg.adjoint_mode, cfg.cost);
    auto vars_next = tracked_variables(x_next, l_next, u_next);

    const double residual = relative_change(vars, vars_next);
    const bool done = convergence_test(vars, vars_next, cfg.tol);

    u = std::move(u_next);
    x = std::move(x_next);
    l = std::move(l_next);
    vars = std::move(vars_next);

    result.per_iteration_residuals.push_back(residual);
    result.per_iteration_costs.push_back(integrate_cost(p, x, u, cfg.cost));
    result.iterations = it;
    if (cfg.observer) cfg.observer(SweepIteration{it, u, x, l, residual});
    if (done) {
      result.converged = true;
      break;
    }
  }

  result.state_traj = std::move(x);
  result.adjoint_traj = std::move(l);
  result.control = std::move(u);
  result.cost_value = result.per_iteration_costs.back();
  return result;
}

}  // namespace itnctl
