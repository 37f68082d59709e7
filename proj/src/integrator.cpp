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

#include "itnctl/integrator.hpp"

namespace itnctl {

Trajectory<StateVec> simulate_states(const ModelParams& p, const StateVec& x0,
                                     const ControlGrid& u) {
  auto rhs = [&p](double, const StateVec& x, double uu) { return state_rhs(p, x, uu); };
  return rk4_forward(rhs, x0, u, u.grid());
}

Trajectory<AdjointVec> solve_adjoint(const ModelParams& p, const Trajectory<StateVec>& x,
                                     const ControlGrid& u, AdjointMode mode, CostKind which) {
  auto rhs = [&](double, const AdjointVec& l, const StateVec& xs, double uu) {
    return adjoint_rhs(p, xs, l, uu, mode, which);
  };
  return rk4_backward(rhs, AdjointVec{}, x, u, u.grid());
}

double integrate_cost(const ModelParams& p, const Trajectory<StateVec>& x, const ControlGrid& u,
                      CostKind which) {
  detail::require_same_grid(x.grid, u.grid(), "integrate_cost");
  const std::size_t last = x.size() - 1;
  double interior = 0.0;
  for (std::size_t i = 1; i < last; ++i) interior += running_cost(p, x[i], u[i], which);
  const double ends =
      0.5 * (running_cost(p, x[0], u[0], which) + running_cost(p, x[last], u[last], which));
  return x.grid.step() * (interior + ends);
}

double infectious_burden(const Trajectory<StateVec>& x) {
  const auto i_h = x.component(1);
  const std::vector<double> ones(i_h.size(), 1.0);
  return trapezoid_dot(x.grid, i_h, ones);
}

double first_time_below(const Trajectory<StateVec>& x, double threshold) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].i_h < threshold) return x.grid.time(i);
  }
  return -1.0;
}

}  // namespace itnctl
