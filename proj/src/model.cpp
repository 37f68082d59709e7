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

#include "itnctl/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "itnctl/errors.hpp"

namespace itnctl {

namespace {

void require(bool ok, const std::string& constraint) {
  if (!ok) throw InvariantViolation("model parameter constraint violated: " + constraint);
}

bool nonneg(double v) { return std::isfinite(v) && v >= 0.0; }
bool unit(double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; }

}  // namespace

void validate(const ModelParams& p) {
  require(nonneg(p.lambda_h_rec), "lambda_h_rec >= 0");
  require(nonneg(p.lambda_v_rec), "lambda_v_rec >= 0");
  require(nonneg(p.mu_h), "mu_h >= 0");
  require(nonneg(p.delta_h), "delta_h >= 0");
  require(nonneg(p.gamma_h), "gamma_h >= 0");
  require(std::isfinite(p.mu_v1) && p.mu_v1 > 0.0, "mu_v1 > 0");
  require(nonneg(p.mu_max), "mu_max >= 0");
  require(unit(p.b), "b in [0,1]");
  require(nonneg(p.beta_max), "beta_max >= 0");
  require(unit(p.p1), "p1 in [0,1]");
  require(unit(p.p2), "p2 in [0,1]");
  require(nonneg(p.a1), "a1 >= 0");
  require(nonneg(p.a2), "a2 >= 0");
  require(std::isfinite(p.c) && p.c > 0.0, "c > 0");
}

StateVec disease_free_state(const ModelParams& p) {
  return {p.lambda_h_rec / p.mu_h, 0.0, p.lambda_v_rec / vector_mortality(p), 0.0};
}

double contact_rate(const ModelParams& p) { return p.beta_max * (1.0 - p.b); }

double vector_mortality(const ModelParams& p) {
  switch (p.itn_mortality_policy) {
    case ItnMortalityPolicy::Product:
      return p.mu_v1 + p.mu_max * p.b;
    case ItnMortalityPolicy::FixedTerm:
      return p.mu_v1 + p.mu_max;
  }
  return p.mu_v1;
}

ForcesOfInfection forces_of_infection(const ModelParams& p, const StateVec& x) {
  const double n_h = x.n_h();
  if (!(n_h > 0.0)) {
    throw NonpositivePopulation("host population N_h = " + std::to_string(n_h) +
                                " is not positive");
  }
  const double beta = contact_rate(p);
  return {p.p1 * beta * x.i_v / n_h, p.p2 * beta * x.i_h / n_h};
}

StateVec state_rhs(const ModelParams& p, const StateVec& x, double u) {
  const auto [lambda_h, lambda_v] = forces_of_infection(p, x);
  const double mu_vb = vector_mortality(p);
  const double infection_h = (1.0 - u) * lambda_h * x.s_h;
  return {
      p.lambda_h_rec - infection_h + p.gamma_h * x.i_h - p.mu_h * x.s_h,
      infection_h - (p.mu_h + p.gamma_h + p.delta_h) * x.i_h,
      p.lambda_v_rec - lambda_v * x.s_v - mu_vb * x.s_v,
      p.p2 * lambda_v * x.s_v - mu_vb * x.i_v,
  };
}

double running_cost(const ModelParams& p, const StateVec& x, double u, CostKind which) {
  double state_term = p.a1 * x.i_h;
  if (which == CostKind::J2) state_term += p.a2 * x.i_v;
  return state_term + 0.5 * p.c * u * u;
}

double hamiltonian(const ModelParams& p, const StateVec& x, const AdjointVec& l, double u,
                   CostKind which) {
  const StateVec f = state_rhs(p, x, u);
  return running_cost(p, x, u, which) + l.l1 * f.s_h + l.l2 * f.i_h + l.l3 * f.s_v +
         l.l4 * f.i_v;
}

double hamiltonian_control_derivative(const ModelParams& p, const StateVec& x,
                                      const AdjointVec& l, double u) {
  const double lambda_h = forces_of_infection(p, x).lambda_h;
  return p.c * u + (l.l1 - l.l2) * lambda_h * x.s_h;
}

AdjointVec adjoint_rhs(const ModelParams& p, const StateVec& x, const AdjointVec& l, double u,
                       AdjointMode mode, CostKind which) {
  const auto [lambda_h, lambda_v] = forces_of_infection(p, x);
  const double mu_vb = vector_mortality(p);
  const double host_exit = p.mu_h + p.gamma_h + p.delta_h;
  const double a2 = which == CostKind::J2 ? p.a2 : 0.0;

  if (mode == AdjointMode::PaperStated) {
    return {
        l.l1 * ((1.0 - u) * lambda_h + p.mu_h) - l.l2 * lambda_h * (1.0 - u),
        -p.a1 - l.l1 * p.gamma_h + l.l2 * host_exit,
        l.l3 * (lambda_v + mu_vb) - l.l4 * lambda_v,
        l.l4 * mu_vb - a2,
    };
  }

  // H depends on the state through lambda_h s_h and lambda_v as well as the
  // linear terms. With N = s_h + i_h:
  //   d(lambda_h s_h)/ds_h =  p1 beta i_v i_h / N^2
  //   d(lambda_h s_h)/di_h = -p1 beta i_v s_h / N^2
  //   d(lambda_h s_h)/di_v =  p1 beta s_h / N
  //   d(lambda_v)/ds_h     = -p2 beta i_h / N^2
  //   d(lambda_v)/di_h     =  p2 beta s_h / N^2
  const double beta = contact_rate(p);
  const double n_h = x.n_h();
  const double n_h2 = n_h * n_h;
  const double host_weight = (l.l2 - l.l1) * (1.0 - u);       // multiplies lambda_h s_h
  const double vector_weight = (p.p2 * l.l4 - l.l3) * x.s_v;  // multiplies lambda_v

  const double dh_ds_h = host_weight * p.p1 * beta * x.i_v * x.i_h / n_h2 -
                         vector_weight * p.p2 * beta * x.i_h / n_h2 - l.l1 * p.mu_h;
  const double dh_di_h = p.a1 - host_weight * p.p1 * beta * x.i_v * x.s_h / n_h2 +
                         vector_weight * p.p2 * beta * x.s_h / n_h2 + l.l1 * p.gamma_h -
                         l.l2 * host_exit;
  const double dh_ds_v = (p.p2 * l.l4 - l.l3) * lambda_v - l.l3 * mu_vb;
  const double dh_di_v = a2 + host_weight * p.p1 * beta * x.s_h / n_h - l.l4 * mu_vb;
  return {-dh_ds_h, -dh_di_h, -dh_ds_v, -dh_di_v};
}

double switching_value(const ModelParams& p, const StateVec& x, const AdjointVec& l) {
  const double lambda_h = forces_of_infection(p, x).lambda_h;
  return lambda_h * x.s_h * (l.l2 - l.l1) / p.c;
}

double pointwise_optimal_control(const ModelParams& p, const StateVec& x, const AdjointVec& l) {
  return std::clamp(switching_value(p, x, l), 0.0, 1.0);
}

std::string_view to_string(ItnMortalityPolicy policy) {
  return policy == ItnMortalityPolicy::Product ? "product" : "fixed_term";
}

std::string_view to_string(AdjointMode mode) {
  return mode == AdjointMode::Exact ? "exact" : "paper";
}

std::string_view to_string(CostKind which) { return which == CostKind::J2 ? "j2" : "j1"; }

}  // namespace itnctl
