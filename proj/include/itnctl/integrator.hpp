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

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "itnctl/errors.hpp"
#include "itnctl/grid.hpp"
#include "itnctl/model.hpp"

namespace itnctl {

/// Samples of a four-component quantity at every node of a grid.
template <typename Vec>
struct Trajectory {
  TimeGrid grid;
  std::vector<Vec> samples;

  std::size_t size() const { return samples.size(); }
  const Vec& operator[](std::size_t i) const { return samples[i]; }

  /// Component k of every sample, for convergence tests and CSV export.
  std::vector<double> component(std::size_t k) const {
    std::vector<double> out;
    out.reserve(samples.size());
    for (const auto& s : samples) out.push_back(s.components()[k]);
    return out;
  }
};

namespace detail {

inline void require_same_grid(const TimeGrid& a, const TimeGrid& b, const char* what) {
  if (!(a == b)) throw std::invalid_argument(std::string(what) + ": grids differ");
}

template <typename Vec>
void require_finite(const Vec& v, double t) {
  if (!is_finite(v)) {
    throw NonFinite("integration produced a non-finite value at t = " + std::to_string(t));
  }
}

template <typename Vec>
Vec midpoint(const Vec& a, const Vec& b) {
  return 0.5 * a + 0.5 * b;
}

}  // namespace detail

/// Classical RK4 from x0 over the grid. rhs(t, x, u) returns dx/dt; u is
/// sampled at t, t + h/2 and t + h by linear interpolation of the control grid.
///
/// Throws NegativeState when a component drops below
/// -negativity_tolerance * (sum of |x0| components), NonFinite on overflow.
template <typename Vec, typename Rhs>
Trajectory<Vec> rk4_forward(Rhs&& rhs, const Vec& x0, const ControlGrid& u, const TimeGrid& grid,
                            double negativity_tolerance = 1e-9) {
  detail::require_same_grid(u.grid(), grid, "rk4_forward");
  double scale = 0.0;
  for (double c : x0.components()) scale += std::abs(c);
  const double floor = -negativity_tolerance * scale;

  const double h = grid.step();
  Trajectory<Vec> out{grid, {}};
  out.samples.reserve(grid.nodes());
  out.samples.push_back(x0);
  Vec x = x0;
  for (std::size_t i = 0; i < grid.intervals(); ++i) {
    const double t = grid.time(i);
    const double u_mid = u.between(i, 0.5);
    const Vec k1 = rhs(t, x, u[i]);
    const Vec k2 = rhs(t + 0.5 * h, x + (0.5 * h) * k1, u_mid);
    const Vec k3 = rhs(t + 0.5 * h, x + (0.5 * h) * k2, u_mid);
    const Vec k4 = rhs(t + h, x + h * k3, u[i + 1]);
    x = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    const double t_next = grid.time(i + 1);
    detail::require_finite(x, t_next);
    for (double c : x.components()) {
      if (c < floor) {
        throw NegativeState("state component " + std::to_string(c) + " below " +
                            std::to_string(floor) + " at t = " + std::to_string(t_next) +
                            "; the grid is likely too coarse");
      }
    }
    out.samples.push_back(x);
  }
  return out;
}

/// Classical RK4 from the terminal value backwards to t0 with step -h.
/// rhs(t, l, x, u) returns dl/dt; the state trajectory and control are
/// linearly interpolated at stage times. Samples are returned in forward
/// time order, so the last sample is terminal_value.
template <typename Vec, typename StateTraj, typename Rhs>
Trajectory<Vec> rk4_backward(Rhs&& rhs, const Vec& terminal_value, const StateTraj& x,
                             const ControlGrid& u, const TimeGrid& grid) {
  detail::require_same_grid(x.grid, grid, "rk4_backward");
  detail::require_same_grid(u.grid(), grid, "rk4_backward");
  const double h = grid.step();
  const std::size_t n = grid.intervals();

  Trajectory<Vec> out{grid, std::vector<Vec>(grid.nodes())};
  out.samples[n] = terminal_value;
  Vec l = terminal_value;
  for (std::size_t i = n; i > 0; --i) {
    const double t = grid.time(i);
    const auto x_mid = detail::midpoint(x[i], x[i - 1]);
    const double u_mid = u.between(i - 1, 0.5);
    const Vec k1 = rhs(t, l, x[i], u[i]);
    const Vec k2 = rhs(t - 0.5 * h, l - (0.5 * h) * k1, x_mid, u_mid);
    const Vec k3 = rhs(t - 0.5 * h, l - (0.5 * h) * k2, x_mid, u_mid);
    const Vec k4 = rhs(t - h, l - h * k3, x[i - 1], u[i - 1]);
    l = l - (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    detail::require_finite(l, grid.time(i - 1));
    out.samples[i - 1] = l;
  }
  return out;
}

/// Controlled ITN state system integrated forward from x0.
Trajectory<StateVec> simulate_states(const ModelParams& p, const StateVec& x0,
                                     const ControlGrid& u);

/// Costates integrated backward from the zero terminal condition.
Trajectory<AdjointVec> solve_adjoint(const ModelParams& p, const Trajectory<StateVec>& x,
                                     const ControlGrid& u, AdjointMode mode, CostKind which);

/// Composite trapezoid rule over the running cost samples.
double integrate_cost(const ModelParams& p, const Trajectory<StateVec>& x, const ControlGrid& u,
                      CostKind which);

/// Trapezoid integral of I_h over the horizon (cumulative infectious burden).
double infectious_burden(const Trajectory<StateVec>& x);

/// First grid time with I_h below threshold, or a negative value if never.
double first_time_below(const Trajectory<StateVec>& x, double threshold);

}  // namespace itnctl
