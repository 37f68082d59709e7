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

#include "itnctl/verification.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <random>
#include <stdexcept>

#include "itnctl/errors.hpp"
#include "itnctl/integrator.hpp"

namespace itnctl {

std::vector<double> cost_gradient_adjoint(const ModelParams& p, const StateVec& x0,
                                          const ControlGrid& u, CostKind which) {
  const auto x = simulate_states(p, x0, u);
  const auto l = solve_adjoint(p, x, u, AdjointMode::Exact, which);
  std::vector<double> g(u.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    g[k] = hamiltonian_control_derivative(p, x[k], l[k], u[k]);
  }
  return g;
}

double discrete_cost(const ModelParams& p, const StateVec& x0, const ControlGrid& u,
                     CostKind which) {
  return integrate_cost(p, simulate_states(p, x0, u), u, which);
}

std::vector<std::vector<double>> admissible_directions(const ControlGrid& u, std::size_t count,
                                                       double epsilon, std::uint64_t seed,
                                                       DirectionSign sign) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(sign == DirectionSign::Signed ? -1.0 : 0.0, 1.0);
  std::vector<std::vector<double>> dirs(count, std::vector<double>(u.size()));
  for (auto& v : dirs) {
    for (std::size_t k = 0; k < v.size(); ++k) {
      const double draw = unit(rng);
      const bool room = u[k] - epsilon >= 0.0 && u[k] + epsilon <= 1.0;
      v[k] = room ? draw : 0.0;
    }
  }
  return dirs;
}

namespace {

ControlGrid shifted(const ControlGrid& u, const std::vector<double>& v, double step) {
  std::vector<double> out(u.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = u[k] + step * v[k];
  return ControlGrid(u.grid(), std::move(out));
}

void check_direction(const ControlGrid& u, const std::vector<double>& v) {
  if (v.size() != u.size()) throw std::invalid_argument("direction has the wrong sample count");
  if (std::all_of(v.begin(), v.end(), [](double c) { return c == 0.0; })) {
    throw DegenerateDirection("finite-difference direction has zero norm");
  }
}

struct DirectionResult {
  double adjoint;
  double fd;
  double rel_error;
};

DirectionResult check_one(const CostFunction& cost, const std::vector<double>& gradient,
                          const ControlGrid& u, const std::vector<double>& v, double epsilon) {
  const double adjoint = trapezoid_dot(u.grid(), gradient, v);
  const double fd = (cost(shifted(u, v, epsilon)) - cost(shifted(u, v, -epsilon))) / (2.0 * epsilon);
  const double scale = std::max(std::abs(fd), std::abs(adjoint));
  const double rel = scale > 0.0 ? std::abs(adjoint - fd) / scale : 0.0;
  return {adjoint, fd, rel};
}

GradCheckReport assemble(const std::vector<DirectionResult>& rows) {
  GradCheckReport report;
  report.directions_tested = rows.size();
  for (const auto& r : rows) {
    report.per_direction_errors.push_back(r.rel_error);
    report.adjoint_derivatives.push_back(r.adjoint);
    report.fd_derivatives.push_back(r.fd);
    report.max_rel_error = std::max(report.max_rel_error, r.rel_error);
  }
  return report;
}

void check_inputs(const ControlGrid& u, const std::vector<double>& gradient,
                  const std::vector<std::vector<double>>& directions, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
  if (directions.empty()) throw std::invalid_argument("at least one direction is required");
  if (gradient.size() != u.size()) throw std::invalid_argument("gradient has the wrong sample count");
  for (const auto& v : directions) check_direction(u, v);
}

}  // namespace

GradCheckReport finite_difference_check(const CostFunction& cost,
                                        const std::vector<double>& gradient,
                                        const ControlGrid& u,
                                        const std::vector<std::vector<double>>& directions,
                                        double epsilon) {
  check_inputs(u, gradient, directions, epsilon);
  std::vector<DirectionResult> rows(directions.size());
  std::vector<std::exception_ptr> errors(directions.size());
  const auto count = static_cast<std::ptrdiff_t>(directions.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      rows[k] = check_one(cost, gradient, u, directions[k], epsilon);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return assemble(rows);
}

GradCheckReport finite_difference_check_serial(const CostFunction& cost,
                                               const std::vector<double>& gradient,
                                               const ControlGrid& u,
                                               const std::vector<std::vector<double>>& directions,
                                               double epsilon) {
  check_inputs(u, gradient, directions, epsilon);
  std::vector<DirectionResult> rows;
  rows.reserve(directions.size());
  for (const auto& v : directions) rows.push_back(check_one(cost, gradient, u, v, epsilon));
  return assemble(rows);
}

GradCheckReport finite_difference_gradient_check(const ModelParams& p, const StateVec& x0,
                                                 const ControlGrid& u, CostKind which,
                                                 std::size_t n_directions, double epsilon,
                                                 std::uint64_t seed, DirectionSign sign) {
  const auto gradient = cost_gradient_adjoint(p, x0, u, which);
  const auto dirs = admissible_directions(u, n_directions, epsilon, seed, sign);
  CostFunction cost = [&](const ControlGrid& c) { return discrete_cost(p, x0, c, which); };
  return finite_difference_check(cost, gradient, u, dirs, epsilon);
}

namespace {

double projected_gradient_norm(const ControlGrid& u, const std::vector<double>& g) {
  std::vector<double> pg(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const bool pinned_low = u[k] <= 0.0 && g[k] > 0.0;
    const bool pinned_high = u[k] >= 1.0 && g[k] < 0.0;
    pg[k] = (pinned_low || pinned_high) ? 0.0 : g[k];
  }
  return std::sqrt(trapezoid_dot(u.grid(), pg, pg));
}

}  // namespace

SolveResult direct_solve_projected_gradient(const ModelParams& p, const StateVec& x0,
                                            const TimeGrid& grid, CostKind which,
                                            std::size_t max_iters, const ArmijoRule& step_rule,
                                            const std::optional<ControlGrid>& initial_guess) {
  validate(p);
  if (max_iters < 1) throw InvariantViolation("direct solver constraint violated: max_iters >= 1");
  const double base_step = step_rule.initial_step > 0.0 ? step_rule.initial_step : 1.0 / p.c;
  const double max_step = base_step * step_rule.max_step_factor;

  ControlGrid u = initial_guess.value_or(ControlGrid(grid, 0.0));
  if (!(u.grid() == grid)) throw std::invalid_argument("direct solver: initial guess grid differs");

  SolveResult result{simulate_states(p, x0, u), {grid, {}}, u, 0.0, 0, false, {}, {}};
  double step = base_step;
  double cost = integrate_cost(p, result.state_traj, u, which);

  for (std::size_t it = 0;; ++it) {
    const auto l = solve_adjoint(p, result.state_traj, u, AdjointMode::Exact, which);
    std::vector<double> g(u.size());
    for (std::size_t k = 0; k < g.size(); ++k) {
      g[k] = hamiltonian_control_derivative(p, result.state_traj[k], l[k], u[k]);
    }
    result.adjoint_traj = l;
    result.per_iteration_costs.push_back(cost);
    const double pg_norm = projected_gradient_norm(u, g);
    result.per_iteration_residuals.push_back(pg_norm);
    if (pg_norm <= 1e-4 * (1.0 + std::abs(cost))) {
      result.converged = true;
      break;
    }
    if (it == max_iters) break;

    bool accepted = false;
    for (std::size_t tries = 0; tries <= step_rule.max_backtracks; ++tries) {
      std::vector<double> trial(u.size());
      for (std::size_t k = 0; k < trial.size(); ++k) {
        trial[k] = std::clamp(u[k] - step * g[k], 0.0, 1.0);
      }
      std::vector<double> delta(u.size());
      for (std::size_t k = 0; k < delta.size(); ++k) delta[k] = trial[k] - u[k];
      const double predicted = trapezoid_dot(grid, g, delta);

      ControlGrid candidate(grid, std::move(trial));
      auto x_trial = simulate_states(p, x0, candidate);
      const double trial_cost = integrate_cost(p, x_trial, candidate, which);
      if (trial_cost <= cost + step_rule.sufficient_decrease * predicted) {
        u = std::move(candidate);
        result.state_traj = std::move(x_trial);
        cost = trial_cost;
        accepted = true;
        break;
      }
      step *= step_rule.shrink;
    }
    if (!accepted) break;  // line search stalled; report as not converged
    result.iterations = it + 1;
    step = std::min(step * step_rule.growth, max_step);
  }

  result.control = u;
  result.cost_value = cost;
  return result;
}

CrossValidationReport compare_solutions(const SolveResult& fbs, const SolveResult& direct) {
  CrossValidationReport r;
  r.j_fbs = fbs.cost_value;
  r.j_direct = direct.cost_value;
  r.rel_gap = std::abs(r.j_fbs - r.j_direct) / std::max(std::abs(r.j_fbs), 1.0);
  std::vector<double> diff(fbs.control.size());
  for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = fbs.control[k] - direct.control[k];
  r.control_l2_distance = std::sqrt(trapezoid_dot(fbs.control.grid(), diff, diff));
  r.fbs_iterations = fbs.iterations;
  r.direct_iterations = direct.iterations;
  r.fbs_converged = fbs.converged;
  r.direct_converged = direct.converged;
  return r;
}

CrossValidationReport cross_validate(const ModelParams& p, const StateVec& x0,
                                     const TimeGrid& grid, const SweepConfig& cfg,
                                     std::size_t direct_max_iters, const ArmijoRule& step_rule) {
  const SolveResult fbs = fbs_solve(p, x0, grid, cfg);
  const SolveResult direct =
      direct_solve_projected_gradient(p, x0, grid, cfg.cost, direct_max_iters, step_rule);
  return compare_solutions(fbs, direct);
}

}  // namespace itnctl
