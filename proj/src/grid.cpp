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

#include "itnctl/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "itnctl/errors.hpp"

namespace itnctl {

TimeGrid::TimeGrid(double t0, double tf, std::size_t n) : t0_(t0), tf_(tf), n_(n) {
  if (!std::isfinite(t0) || !std::isfinite(tf) || !(tf > t0)) {
    throw std::invalid_argument("time grid requires tf > t0");
  }
  if (n < 1) throw std::invalid_argument("time grid requires n >= 1");
}

double TimeGrid::time(std::size_t i) const {
  return i == n_ ? tf_ : t0_ + static_cast<double>(i) * step();
}

std::vector<double> TimeGrid::trapezoid_weights() const {
  std::vector<double> w(nodes(), step());
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

namespace {

void check_box(double v, std::size_t i) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw InvariantViolation("control sample " + std::to_string(i) + " = " + std::to_string(v) +
                             " violates 0 <= u <= 1");
  }
}

}  // namespace

ControlGrid::ControlGrid(const TimeGrid& grid, double value)
    : grid_(grid), values_(grid.nodes(), value) {
  check_box(value, 0);
}

ControlGrid::ControlGrid(const TimeGrid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.nodes()) {
    throw InvariantViolation("control has " + std::to_string(values_.size()) +
                             " samples; grid needs n+1 = " + std::to_string(grid_.nodes()));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) check_box(values_[i], i);
}

double trapezoid_dot(const TimeGrid& grid, std::span<const double> a, std::span<const double> b) {
  if (a.size() != grid.nodes() || b.size() != grid.nodes()) {
    throw std::invalid_argument("trapezoid_dot: sample count does not match grid");
  }
  double interior = 0.0;
  for (std::size_t i = 1; i + 1 < a.size(); ++i) interior += a[i] * b[i];
  const double ends = 0.5 * (a.front() * b.front() + a.back() * b.back());
  return grid.step() * (interior + ends);
}

std::vector<double> project_to_box(std::span<const double> values) {
  std::vector<double> out(values.size());
  std::transform(values.begin(), values.end(), out.begin(),
                 [](double v) { return std::clamp(v, 0.0, 1.0); });
  return out;
}

}  // namespace itnctl
