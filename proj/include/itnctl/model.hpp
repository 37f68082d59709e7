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

#include <string_view>

#include "itnctl/vectors.hpp"

namespace itnctl {

/// How the tabulated ITN mortality entry enters the vector death rate.
enum class ItnMortalityPolicy {
  Product,    // mu_vb = mu_v1 + mu_max * b
  FixedTerm,  // mu_vb = mu_v1 + mu_max, the entry already includes b
};

enum class AdjointMode {
  PaperStated,  // reduced costate equations, no chain rule through N_h or the forces
  Exact,        // full negative state gradient of the Hamiltonian
};

enum class CostKind { J1, J2 };

/// Rates, probabilities and cost weights of the controlled ITN model.
/// Defaults are the reference parameter set (time unit: day).
struct ModelParams {
  double lambda_h_rec = 1e3 / (70.0 * 365.0);  // human recruitment
  double lambda_v_rec = 1e4 / 21.0;            // mosquito recruitment
  double mu_h = 1.0 / (70.0 * 365.0);
  double delta_h = 1e-3;
  double gamma_h = 0.25;
  double mu_v1 = 1.0 / 21.0;
  double mu_max = 1.0 / 21.0;
  double b = 0.75;
  double beta_max = 0.1;
  double p1 = 1.0;
  double p2 = 1.0;
  double a1 = 25.0;
  double a2 = 25.0;  // J2 only
  double c = 50.0;
  ItnMortalityPolicy itn_mortality_policy = ItnMortalityPolicy::FixedTerm;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Throws InvariantViolation naming the first violated constraint.
void validate(const ModelParams& p);

/// Reference initial condition (S_h, I_h, S_v, I_v) = (800, 200, 4000, 900).
constexpr StateVec reference_initial_state() { return {800.0, 200.0, 4000.0, 900.0}; }

/// Disease-free state (Lambda_h/mu_h, 0, Lambda_v/mu_vb, 0).
StateVec disease_free_state(const ModelParams& p);

/// beta = beta_max (1 - b).
double contact_rate(const ModelParams& p);

/// mu_vb according to p.itn_mortality_policy.
double vector_mortality(const ModelParams& p);

struct ForcesOfInfection {
  double lambda_h;  // on susceptible humans
  double lambda_v;  // on susceptible mosquitoes
};

/// Throws NonpositivePopulation if s_h + i_h <= 0.
ForcesOfInfection forces_of_infection(const ModelParams& p, const StateVec& x);

/// Time derivative of the controlled state. The I_v equation carries the
/// extra p2 factor of the published system on purpose.
StateVec state_rhs(const ModelParams& p, const StateVec& x, double u);

/// Integrand of J1 (a1 i_h + c/2 u^2) or J2 (adds a2 i_v).
double running_cost(const ModelParams& p, const StateVec& x, double u, CostKind which);

/// running_cost + <l, state_rhs>.
double hamiltonian(const ModelParams& p, const StateVec& x, const AdjointVec& l, double u,
                   CostKind which);

/// dH/du = c u + (l1 - l2) lambda_h s_h.
double hamiltonian_control_derivative(const ModelParams& p, const StateVec& x,
                                      const AdjointVec& l, double u);

/// Costate time derivative. Exact mode is -grad_x H. PaperStated mode is the
/// reduced system that treats lambda_h, lambda_v and N_h as constants; for J2
/// it also carries the -a2 source in the l4 equation.
AdjointVec adjoint_rhs(const ModelParams& p, const StateVec& x, const AdjointVec& l, double u,
                       AdjointMode mode, CostKind which);

/// Unconstrained minimiser of H in u: lambda_h s_h (l2 - l1) / c.
double switching_value(const ModelParams& p, const StateVec& x, const AdjointVec& l);

/// switching_value clamped to [0, 1].
double pointwise_optimal_control(const ModelParams& p, const StateVec& x, const AdjointVec& l);

std::string_view to_string(ItnMortalityPolicy policy);
std::string_view to_string(AdjointMode mode);
std::string_view to_string(CostKind which);

}  // namespace itnctl
