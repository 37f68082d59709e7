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

#include <doctest.h>

#include <random>

#include "itnctl/errors.hpp"
#include "itnctl/sweep.hpp"
#include "test_support.hpp"

using namespace itnctl;
using itnctl::testing::params_with;

namespace {

constexpr StateVec kInitial = reference_initial_state();

struct Sampled {
  TimeGrid grid;
  ControlGrid u;
  Trajectory<StateVec> x;
  Trajectory<AdjointVec> l;
};

Sampled sampled(const ModelParams& p, std::size_t n, double u0) {
  const TimeGrid g(0.0, 100.0, n);
  const ControlGrid u(g, u0);
  auto x = simulate_states(p, kInitial, u);
  auto l = solve_adjoint(p, x, u, AdjointMode::PaperStated, CostKind::J1);
  return {g, u, std::move(x), std::move(l)};
}

std::vector<std::vector<double>> constant_vars(std::size_t count, std::size_t samples, double v) {
  return std::vector<std::vector<double>>(count, std::vector<double>(samples, v));
}

}  // namespace

TEST_CASE("update_control with zero costates returns to zero") {
  const ModelParams p = params_with(0.75);
  auto s = sampled(p, 50, 0.7);
  const Trajectory<AdjointVec> zero{s.grid, std::vector<AdjointVec>(s.grid.nodes())};
  const auto u = update_control(s.u, s.x, zero, p, 1.0);
  for (double v : u.values()) CHECK(v == 0.0);
}

TEST_CASE("update_control is a convex combination") {
  const ModelParams p = params_with(0.75);
  auto s = sampled(p, 50, 1.0);
  const Trajectory<AdjointVec> zero{s.grid, std::vector<AdjointVec>(s.grid.nodes())};
  const auto u = update_control(s.u, s.x, zero, p, 0.5);
  for (double v : u.values()) CHECK(v == 0.5);
}

TEST_CASE("update_control stays in the box and matches the serial kernel") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> adj(-500.0, 500.0);
  const TimeGrid g(0.0, 100.0, 777);
  for (int trial = 0; trial < 20; ++trial) {
    const ModelParams p = params_with(unit(rng));
    std::vector<double> prev(g.nodes());
    std::vector<StateVec> xs(g.nodes());
    std::vector<AdjointVec> ls(g.nodes());
    for (std::size_t i = 0; i < g.nodes(); ++i) {
      prev[i] = unit(rng);
      xs[i] = itnctl::testing::random_state(rng);
      const double a = adj(rng), b = adj(rng), c = adj(rng), d = adj(rng);
      ls[i] = {a, b, c, d};
    }
    const ControlGrid u(g, prev);
    const Trajectory<StateVec> x{g, xs};
    const Trajectory<AdjointVec> l{g, ls};
    const double w = unit(rng) * 0.99 + 0.01;
    const auto par = update_control(u, x, l, p, w);
    const auto ser = update_control_serial(u, x, l, p, w);
    CHECK(par == ser);
    for (double v : par.values()) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
}

TEST_CASE("update_control surfaces a nonpositive host population") {
  const ModelParams p = params_with(0.75);
  auto s = sampled(p, 1000, 0.0);
  auto xs = s.x.samples;
  xs[4] = {0.0, 0.0, 10.0, 1.0};
  const Trajectory<StateVec> broken{s.grid, xs};
  CHECK_THROWS_AS(update_control(s.u, broken, s.l, p, 0.5), NonpositivePopulation);
}

TEST_CASE("convergence test arithmetic") {
  const auto ones = constant_vars(9, 100, 1.0);
  CHECK(convergence_test(ones, ones, 1e-3));
  CHECK_FALSE(convergence_test(constant_vars(9, 100, 0.9), ones, 1e-3));
  CHECK(convergence_test(constant_vars(9, 100, 0.99999), ones, 1e-3));
  CHECK(relative_change(constant_vars(9, 100, 0.9), ones) == doctest::Approx(0.1));

  // A single failing variable fails the whole test.
  auto mixed = ones;
  mixed[8].assign(100, 0.5);
  CHECK_FALSE(convergence_test(mixed, ones, 1e-3));

  // All-zero variables pass.
  const auto zeros = constant_vars(9, 5, 0.0);
  CHECK(convergence_test(zeros, zeros, 1e-3));
}

TEST_CASE("sweep configuration is validated") {
  const TimeGrid g(0.0, 10.0, 10);
  SweepConfig cfg;
  cfg.relaxation = 0.0;
  CHECK_THROWS_AS(fbs_solve(ModelParams{}, kInitial, g, cfg), InvariantViolation);
  cfg = SweepConfig{};
  cfg.tol = 0.0;
  CHECK_THROWS_AS(fbs_solve(ModelParams{}, kInitial, g, cfg), InvariantViolation);
  cfg = SweepConfig{};
  cfg.max_iters = 0;
  CHECK_THROWS_AS(fbs_solve(ModelParams{}, kInitial, g, cfg), InvariantViolation);
}

TEST_CASE("no state cost gives zero control") {
  ModelParams p = params_with(0.75);
  p.a1 = 0.0;
  const auto r = fbs_solve(p, kInitial, TimeGrid(0.0, 100.0, 500), SweepConfig{});
  CHECK(r.converged);
  for (double v : r.control.values()) CHECK(v == 0.0);
}

TEST_CASE("disease-free start needs no control") {
  for (auto mode : {AdjointMode::PaperStated, AdjointMode::Exact}) {
    const ModelParams p = params_with(0.75);
    SweepConfig cfg;
    cfg.adjoint_mode = mode;
    const auto r = fbs_solve(p, disease_free_state(p), TimeGrid(0.0, 100.0, 500), cfg);
    CHECK(r.converged);
    CHECK(r.cost_value == 0.0);
    for (double v : r.control.values()) CHECK(v == 0.0);
    for (const auto& x : r.state_traj.samples) CHECK(x.i_h == 0.0);
  }
}

TEST_CASE("reference scenario solution") {
  const ModelParams p = params_with(0.75);
  const TimeGrid g(0.0, 100.0, 1000);
  std::size_t observed = 0;
  bool admissible = true;
  bool transversal = true;
  SweepConfig cfg;
  cfg.observer = [&](const SweepIteration& it) {
    ++observed;
    for (double v : it.control.values()) admissible = admissible && v >= 0.0 && v <= 1.0;
    transversal = transversal && it.adjoints.samples.back() == AdjointVec{};
    CHECK(it.iteration == observed);
  };
  const auto r = fbs_solve(p, kInitial, g, cfg);
  REQUIRE(r.converged);
  CHECK(observed == r.iterations);
  CHECK(admissible);
  CHECK(transversal);
  CHECK(r.per_iteration_residuals.size() == r.iterations);

  // Value from an independent scripted implementation of the same discretization.
  CHECK(r.cost_value == doctest::Approx(21375.325861849553).epsilon(1e-8));
  CHECK(r.iterations == 14);

  SUBCASE("control starts high and decays to zero") {
    const auto u = r.control.values();
    CHECK(u.front() > 0.9);
    CHECK(u.back() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(u[u.size() / 2] < u.front());
  }

  SUBCASE("cost improves on the null and saturated controls") {
    const auto j0 = integrate_cost(p, simulate_states(p, kInitial, ControlGrid(g, 0.0)),
                                   ControlGrid(g, 0.0), CostKind::J1);
    const auto j1 = integrate_cost(p, simulate_states(p, kInitial, ControlGrid(g, 1.0)),
                                   ControlGrid(g, 1.0), CostKind::J1);
    CHECK(r.cost_value <= j0);
    CHECK(r.cost_value <= j1);
  }

  SUBCASE("returned triple is self-consistent") {
    const auto x = simulate_states(p, kInitial, r.control);
    CHECK(x.samples == r.state_traj.samples);
    const auto l = solve_adjoint(p, x, r.control, AdjointMode::PaperStated, CostKind::J1);
    CHECK(l.samples == r.adjoint_traj.samples);
  }

  SUBCASE("one more sweep passes the convergence test") {
    const auto u = update_control(r.control, r.state_traj, r.adjoint_traj, p, cfg.relaxation);
    const auto x = simulate_states(p, kInitial, u);
    const auto l = solve_adjoint(p, x, u, AdjointMode::PaperStated, CostKind::J1);
    CHECK(convergence_test(tracked_variables(r.state_traj, r.adjoint_traj, r.control),
                           tracked_variables(x, l, u), cfg.tol));
  }

  SUBCASE("deterministic") {
    const auto again = fbs_solve(p, kInitial, g, SweepConfig{});
    CHECK(again.control == r.control);
    CHECK(again.cost_value == r.cost_value);
    CHECK(again.per_iteration_residuals == r.per_iteration_residuals);
  }
}

TEST_CASE("iteration budget exhaustion is reported") {
  SweepConfig cfg;
  cfg.max_iters = 2;
  const auto r = fbs_solve(params_with(0.75), kInitial, TimeGrid(0.0, 100.0, 500), cfg);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations == 2);
  CHECK(r.per_iteration_residuals.size() == 2);
  CHECK(r.per_iteration_residuals.back() > cfg.tol);
}

TEST_CASE("initial guess on another grid is rejected") {
  SweepConfig cfg;
  cfg.initial_guess = ControlGrid(TimeGrid(0.0, 100.0, 10), 0.0);
  CHECK_THROWS_AS(fbs_solve(params_with(0.75), kInitial, TimeGrid(0.0, 100.0, 20), cfg),
                  std::invalid_argument);
}

TEST_CASE("admissibility across random scenarios") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 6; ++trial) {
    const ModelParams p = params_with(0.25 + 0.5 * unit(rng));
    SweepConfig cfg;
    cfg.max_iters = 60;
    cfg.adjoint_mode = trial % 2 ? AdjointMode::Exact : AdjointMode::PaperStated;
    cfg.cost = trial % 3 ? CostKind::J1 : CostKind::J2;
    bool ok = true;
    cfg.observer = [&](const SweepIteration& it) {
      for (double v : it.control.values()) ok = ok && v >= 0.0 && v <= 1.0;
      ok = ok && it.adjoints.samples.back() == AdjointVec{};
    };
    const auto x0 = itnctl::testing::random_state(rng, 200.0, 3000.0);
    (void)fbs_solve(p, x0, TimeGrid(0.0, 60.0, 600), cfg);
    CHECK(ok);
  }
}
