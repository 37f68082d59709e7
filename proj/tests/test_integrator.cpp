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

#include <cmath>
#include <limits>

#include "itnctl/errors.hpp"
#include "itnctl/integrator.hpp"
#include "test_support.hpp"

using namespace itnctl;
using itnctl::testing::params_with;

namespace {

constexpr StateVec kInitial = reference_initial_state();

StateVec uniform(double v) { return {v, v, v, v}; }

double max_rel_diff(const StateVec& a, const StateVec& b) {
  double worst = 0.0;
  const auto ca = a.components();
  const auto cb = b.components();
  for (std::size_t k = 0; k < 4; ++k) {
    worst = std::max(worst, std::abs(ca[k] - cb[k]) / std::max(std::abs(cb[k]), 1e-12));
  }
  return worst;
}

}  // namespace

TEST_CASE("time grid") {
  const TimeGrid g(0.0, 100.0, 3);
  CHECK(g.nodes() == 4);
  CHECK(g.time(0) == 0.0);
  CHECK(g.time(3) == 100.0);
  double total = 0.0;
  for (double w : g.trapezoid_weights()) total += w;
  CHECK(total == doctest::Approx(100.0).epsilon(1e-14));
  CHECK_THROWS_AS(TimeGrid(0.0, 0.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(TimeGrid(0.0, 1.0, 0), std::invalid_argument);
}

TEST_CASE("control grid enforces the box") {
  const TimeGrid g(0.0, 1.0, 2);
  CHECK_THROWS_AS(ControlGrid(g, 1.5), InvariantViolation);
  CHECK_THROWS_AS(ControlGrid(g, std::vector<double>{0.0, -0.1, 0.0}), InvariantViolation);
  CHECK_THROWS_AS(ControlGrid(g, std::vector<double>{0.0, 0.0}), InvariantViolation);
  const ControlGrid u(g, std::vector<double>{0.0, 0.5, 1.0});
  CHECK(u.between(0, 0.5) == 0.25);
  CHECK(u.between(1, 1.0) == 1.0);
}

TEST_CASE("single RK4 step of exponential decay") {
  const TimeGrid g(0.0, 0.1, 1);
  auto decay = [](double, const StateVec& x, double) { return -1.0 * x; };
  const auto traj = rk4_forward(decay, uniform(1.0), ControlGrid(g, 0.0), g);
  REQUIRE(traj.size() == 2);
  CHECK(traj[1].s_h == doctest::Approx(0.9048375).epsilon(1e-14));
  CHECK(traj[1].i_v == doctest::Approx(0.9048375).epsilon(1e-14));
}

TEST_CASE("zero right-hand side keeps the state fixed") {
  const TimeGrid g(0.0, 10.0, 37);
  auto still = [](double, const StateVec&, double) { return StateVec{}; };
  const auto traj = rk4_forward(still, kInitial, ControlGrid(g, 0.3), g);
  for (const auto& x : traj.samples) CHECK(x == kInitial);
}

TEST_CASE("RK4 integrates a cubic in time exactly") {
  // x' = 3 t^2 is a quadrature; Simpson-type weights make RK4 exact for it.
  const TimeGrid g(0.0, 2.0, 5);
  auto cubic = [](double t, const StateVec&, double) { return uniform(3.0 * t * t); };
  const auto traj = rk4_forward(cubic, uniform(0.0), ControlGrid(g, 0.0), g);
  CHECK(traj.samples.back().s_h == doctest::Approx(8.0).epsilon(1e-14));
}

TEST_CASE("control is sampled at nodes and interpolated at midpoints") {
  // x' = u(t) with u linear in t integrates exactly.
  const TimeGrid g(0.0, 1.0, 4);
  std::vector<double> ramp(g.nodes());
  for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = g.time(i);
  auto follow = [](double, const StateVec&, double u) { return uniform(u); };
  const auto traj = rk4_forward(follow, uniform(0.0), ControlGrid(g, ramp), g);
  CHECK(traj.samples.back().i_h == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("disease-free equilibrium is preserved") {
  for (auto policy : {ItnMortalityPolicy::Product, ItnMortalityPolicy::FixedTerm}) {
    const ModelParams p = params_with(0.75, policy);
    const StateVec dfe = disease_free_state(p);
    const TimeGrid g(0.0, 100.0, 500);
    const auto traj = simulate_states(p, dfe, ControlGrid(g, 0.0));
    for (const auto& x : traj.samples) {
      CHECK(x.i_h == 0.0);
      CHECK(x.i_v == 0.0);
      CHECK(max_rel_diff(x, dfe) < 1e-9);
    }
  }
}

TEST_CASE("uncontrolled trajectory matches a high-order reference") {
  // Endpoint at t = 100 from an adaptive 8th-order solver at tight tolerance.
  const TimeGrid g(0.0, 100.0, 5000);
  SUBCASE("fixed-term") {
    const auto traj = simulate_states(params_with(0.75), kInitial, ControlGrid(g, 0.0));
    const StateVec expected{998.086255335959, 0.0558287526079759, 4999.60451111057,
                            0.388179820175144};
    CHECK(max_rel_diff(traj.samples.back(), expected) < 1e-7);
  }
  SUBCASE("product") {
    const auto traj = simulate_states(params_with(0.75, ItnMortalityPolicy::Product), kInitial,
                                      ControlGrid(g, 0.0));
    const StateVec expected{997.753861928295, 0.185713987062099, 5712.70160952429,
                            1.3883753306246};
    CHECK(max_rel_diff(traj.samples.back(), expected) < 1e-7);
  }
}

TEST_CASE("observed convergence order is four") {
  const ModelParams p = params_with(0.75);
  auto endpoint = [&](std::size_t n) {
    const TimeGrid g(0.0, 100.0, n);
    std::vector<double> u(g.nodes());
    // Linear in t, so midpoint interpolation is exact and only the RK4 error remains.
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = 0.9 - 0.008 * g.time(i);
    return simulate_states(p, kInitial, ControlGrid(g, u)).samples.back();
  };
  const StateVec ref = endpoint(100 * 64);
  auto error = [&](const StateVec& x) {
    double e = 0.0;
    const auto a = x.components();
    const auto b = ref.components();
    for (std::size_t k = 0; k < 4; ++k) e = std::max(e, std::abs(a[k] - b[k]));
    return e;
  };
  const double coarse = error(endpoint(100));
  const double fine = error(endpoint(200));
  REQUIRE(fine > 0.0);
  CHECK(coarse / fine > 12.0);
  CHECK(coarse / fine < 20.0);
}

TEST_CASE("backward integration retraces a forward solution") {
  const ModelParams p = params_with(0.5);
  const TimeGrid g(0.0, 50.0, 4000);
  const ControlGrid u(g, 0.2);
  const auto fwd = simulate_states(p, kInitial, u);
  // Integrate the state equation itself backwards from x(tf); the carried
  // trajectory argument is ignored by this right-hand side.
  auto rhs = [&p](double, const StateVec& x, const StateVec&, double uu) {
    return state_rhs(p, x, uu);
  };
  const auto back = rk4_backward(rhs, fwd.samples.back(), fwd, u, g);
  CHECK(max_rel_diff(back.samples.front(), kInitial) < 1e-7);
}

TEST_CASE("costates vanish at the final time") {
  const ModelParams p = params_with(0.75);
  const TimeGrid g(0.0, 100.0, 400);
  const ControlGrid u(g, 0.4);
  const auto x = simulate_states(p, kInitial, u);
  for (auto mode : {AdjointMode::PaperStated, AdjointMode::Exact}) {
    for (auto which : {CostKind::J1, CostKind::J2}) {
      const auto l = solve_adjoint(p, x, u, mode, which);
      CHECK(l.samples.back() == AdjointVec{});
      CHECK(l.samples.front().l2 > 0.0);
    }
  }
}

TEST_CASE("trapezoid cost on simple integrands") {
  const ModelParams p = params_with(0.75);
  const StateVec dfe = disease_free_state(p);
  const TimeGrid g(0.0, 100.0, 1000);
  const auto x = simulate_states(p, dfe, ControlGrid(g, 0.5));
  // I_h stays zero, so only the control term contributes: (c/2) u^2 T.
  CHECK(integrate_cost(p, x, ControlGrid(g, 0.5), CostKind::J1) ==
        doctest::Approx(25.0 * 0.25 * 100.0).epsilon(1e-12));

  // Constant infected humans with zero control, evaluated on a frozen trajectory.
  Trajectory<StateVec> frozen{g, std::vector<StateVec>(g.nodes(), kInitial)};
  CHECK(integrate_cost(p, frozen, ControlGrid(g, 0.0), CostKind::J1) ==
        doctest::Approx(25.0 * 200.0 * 100.0).epsilon(1e-12));
  CHECK(integrate_cost(p, frozen, ControlGrid(g, 0.0), CostKind::J2) ==
        doctest::Approx(25.0 * 1100.0 * 100.0).epsilon(1e-12));
}

TEST_CASE("trapezoid cost converges at second order") {
  const ModelParams p = params_with(0.75);
  const StateVec dfe = disease_free_state(p);
  // u(t) = t / T gives (c/2) T / 3 exactly.
  auto quad_error = [&](std::size_t n) {
    const TimeGrid g(0.0, 100.0, n);
    std::vector<double> u(g.nodes());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = g.time(i) / 100.0;
    Trajectory<StateVec> frozen{g, std::vector<StateVec>(g.nodes(), {dfe.s_h, 0.0, dfe.s_v, 0.0})};
    return std::abs(integrate_cost(p, frozen, ControlGrid(g, u), CostKind::J1) - 25.0 * 100.0 / 3.0);
  };
  const double ratio = quad_error(50) / quad_error(100);
  CHECK(ratio == doctest::Approx(4.0).epsilon(1e-6));
}

TEST_CASE("burden and threshold crossing") {
  const TimeGrid g(0.0, 4.0, 4);
  std::vector<StateVec> samples;
  for (double ih : {5.0, 3.0, 0.5, 0.2, 0.1}) samples.push_back({100.0, ih, 10.0, 1.0});
  const Trajectory<StateVec> traj{g, samples};
  CHECK(infectious_burden(traj) == doctest::Approx(2.5 + 3.0 + 0.5 + 0.2 + 0.05));
  CHECK(first_time_below(traj, 1.0) == 2.0);
  CHECK(first_time_below(traj, 0.01) == -1.0);
}

TEST_CASE("too coarse a grid is reported as a negative state") {
  const TimeGrid g(0.0, 10.0, 1);
  auto drain = [](double, const StateVec&, double) { return uniform(-1.0); };
  CHECK_THROWS_AS(rk4_forward(drain, uniform(1.0), ControlGrid(g, 0.0), g), NegativeState);
}

TEST_CASE("non-finite values are reported") {
  const TimeGrid g(0.0, 1.0, 4);
  auto bad = [](double, const StateVec&, double) {
    return uniform(std::numeric_limits<double>::quiet_NaN());
  };
  CHECK_THROWS_AS(rk4_forward(bad, uniform(1.0), ControlGrid(g, 0.0), g), NonFinite);
}

TEST_CASE("mismatched grids are rejected") {
  const TimeGrid g(0.0, 1.0, 4);
  const TimeGrid h(0.0, 1.0, 5);
  const auto x = simulate_states(ModelParams{}, kInitial, ControlGrid(g, 0.0));
  CHECK_THROWS_AS(integrate_cost(ModelParams{}, x, ControlGrid(h, 0.0), CostKind::J1),
                  std::invalid_argument);
  CHECK_THROWS_AS(solve_adjoint(ModelParams{}, x, ControlGrid(h, 0.0), AdjointMode::Exact,
                                CostKind::J1),
                  std::invalid_argument);
}

TEST_CASE("populations stay nonnegative along random controls") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const TimeGrid g(0.0, 100.0, 1000);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> u(g.nodes());
    for (auto& v : u) v = unit(rng);
    const ModelParams p = params_with(unit(rng), trial % 2 ? ItnMortalityPolicy::Product
                                                           : ItnMortalityPolicy::FixedTerm);
    const auto traj = simulate_states(p, itnctl::testing::random_state(rng), ControlGrid(g, u));
    for (const auto& x : traj.samples) {
      for (double c : x.components()) CHECK(c >= -1e-9);
    }
  }
}

TEST_CASE("backward sweep equals the mirrored forward sweep sample for sample") {
  const TimeGrid g(0.0, 30.0, 300);
  const ControlGrid u(g, 0.0);
  const Trajectory<StateVec> carried{g, std::vector<StateVec>(g.nodes(), kInitial)};
  auto f = [](const AdjointVec& l) {
    return AdjointVec{-0.05 * l.l1 + 0.1 * std::sin(l.l2), 0.2 * l.l1 - 0.1 * l.l2, std::cos(l.l3),
                      l.l1 * l.l4 * 1e-3 - 1.0};
  };
  const AdjointVec terminal{1.0, -2.0, 0.5, 3.0};
  auto back_rhs = [&](double, const AdjointVec& l, const StateVec&, double) { return f(l); };
  const auto back = rk4_backward(back_rhs, terminal, carried, u, g);

  // y(s) = l(tf - s) solves y' = -f(y).
  auto fwd_rhs = [&](double, const AdjointVec& y, double) { return -1.0 * f(y); };
  const auto fwd = rk4_forward(fwd_rhs, terminal, u, g, std::numeric_limits<double>::infinity());
  const std::size_t n = g.intervals();
  for (std::size_t i = 0; i <= n; ++i) CHECK(back.samples[i] == fwd.samples[n - i]);
}

TEST_CASE("integrated cost is linear in the weights") {
  const TimeGrid g(0.0, 100.0, 500);
  ModelParams p = params_with(0.75);
  const ControlGrid u(g, 0.3);
  const auto x = simulate_states(p, kInitial, u);
  auto cost_with = [&](double a1, double a2) {
    ModelParams q = p;
    q.a1 = a1;
    q.a2 = a2;
    return integrate_cost(q, x, u, CostKind::J2);
  };
  const double base = cost_with(0.0, 0.0);
  const double da1 = cost_with(1.0, 0.0) - base;
  const double da2 = cost_with(0.0, 1.0) - base;
  CHECK(cost_with(7.0, 3.0) == doctest::Approx(base + 7.0 * da1 + 3.0 * da2).epsilon(1e-12));
  CHECK(da1 == doctest::Approx(infectious_burden(x)).epsilon(1e-12));
}
