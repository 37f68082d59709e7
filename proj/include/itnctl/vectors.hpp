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

#include <array>
#include <cmath>
#include <cstddef>

namespace itnctl {

// Component-wise arithmetic shared by the four-compartment state and the
// four-component costate. Derived types expose their fields through
// components()/from_components() so the integrator can stay generic.
template <typename Derived>
struct FourVector {
  static constexpr std::size_t kSize = 4;

  friend constexpr Derived operator+(const Derived& a, const Derived& b) {
    const auto x = a.components();
    const auto y = b.components();
    return Derived::from_components({x[0] + y[0], x[1] + y[1], x[2] + y[2], x[3] + y[3]});
  }
  friend constexpr Derived operator-(const Derived& a, const Derived& b) {
    const auto x = a.components();
    const auto y = b.components();
    return Derived::from_components({x[0] - y[0], x[1] - y[1], x[2] - y[2], x[3] - y[3]});
  }
  friend constexpr Derived operator*(double s, const Derived& a) {
    const auto x = a.components();
    return Derived::from_components({s * x[0], s * x[1], s * x[2], s * x[3]});
  }
  friend constexpr Derived operator*(const Derived& a, double s) { return s * a; }

  friend constexpr bool operator==(const Derived& a, const Derived& b) {
    return a.components() == b.components();
  }

  friend bool is_finite(const Derived& a) {
    for (double v : a.components()) {
      if (!std::isfinite(v)) return false;
    }
    return true;
  }
};

/// Host and vector compartments at one instant: humans (s_h, i_h) and
/// mosquitoes (s_v, i_v).
struct StateVec : FourVector<StateVec> {
  double s_h = 0.0;
  double i_h = 0.0;
  double s_v = 0.0;
  double i_v = 0.0;

  constexpr StateVec() = default;
  constexpr StateVec(double sh, double ih, double sv, double iv)
      : s_h(sh), i_h(ih), s_v(sv), i_v(iv) {}

  constexpr double n_h() const { return s_h + i_h; }
  constexpr double n_v() const { return s_v + i_v; }
  constexpr double total() const { return s_h + i_h + s_v + i_v; }

  constexpr std::array<double, 4> components() const { return {s_h, i_h, s_v, i_v}; }
  static constexpr StateVec from_components(const std::array<double, 4>& c) {
    return {c[0], c[1], c[2], c[3]};
  }
};

/// Costates paired with (s_h, i_h, s_v, i_v).
struct AdjointVec : FourVector<AdjointVec> {
  double l1 = 0.0;
  double l2 = 0.0;
  double l3 = 0.0;
  double l4 = 0.0;

  constexpr AdjointVec() = default;
  constexpr AdjointVec(double a, double b, double c, double d) : l1(a), l2(b), l3(c), l4(d) {}

  constexpr std::array<double, 4> components() const { return {l1, l2, l3, l4}; }
  static constexpr AdjointVec from_components(const std::array<double, 4>& c) {
    return {c[0], c[1], c[2], c[3]};
  }
};

}  // namespace itnctl
