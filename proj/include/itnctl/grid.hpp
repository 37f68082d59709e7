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
#include <span>
#include <vector>

namespace itnctl {

/// Uniform grid of n intervals on [t0, tf].
class TimeGrid {
 public:
  /// Throws std::invalid_argument unless tf > t0 and n >= 1.
  TimeGrid(double t0, double tf, std::size_t n);

  double t0() const { return t0_; }
  double tf() const { return tf_; }
  std::size_t intervals() const { return n_; }
  std::size_t nodes() const { return n_ + 1; }
  double step() const { return (tf_ - t0_) / static_cast<double>(n_); }

  /// Time of node i. The last node is exactly tf.
  double time(std::size_t i) const;

  /// Composite trapezoid weights; sum equals tf - t0.
  std::vector<double> trapezoid_weights() const;

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

 private:
  double t0_;
  double tf_;
  std::size_t n_;
};

/// A control sampled at every grid node. Values are kept in [0, 1].
class ControlGrid {
 public:
  /// Constant control. Throws InvariantViolation if value is outside [0, 1].
  ControlGrid(const TimeGrid& grid, double value);
  /// Throws InvariantViolation on a size mismatch or an out-of-box sample.
  ControlGrid(const TimeGrid& grid, std::vector<double> values);

  const TimeGrid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }

  /// Piecewise-linear value between nodes i and i+1 at fraction s in [0, 1].
  double between(std::size_t i, double s) const {
    return s == 0.0 ? values_[i] : (1.0 - s) * values_[i] + s * values_[i + 1];
  }

  friend bool operator==(const ControlGrid&, const ControlGrid&) = default;

 private:
  TimeGrid grid_;
  std::vector<double> values_;
};

/// Trapezoid-rule inner product of two grid functions.
double trapezoid_dot(const TimeGrid& grid, std::span<const double> a, std::span<const double> b);

/// Clamp every value into [0, 1].
std::vector<double> project_to_box(std::span<const double> values);

}  // namespace itnctl
