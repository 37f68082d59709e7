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

// itnctl: forward simulation, optimal-control solves, b-sweeps, J1/J2
// comparison and verification for the ITN malaria model.

#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "itnctl/config.hpp"
#include "itnctl/errors.hpp"
#include "itnctl/scenario.hpp"

namespace {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kConfigError = 2,
  kNotConverged = 3,
  kIoError = 4,
};

struct CommonOptions {
  std::string config;
  std::vector<std::string> set;
  std::string out;
  std::optional<double> b;
  std::optional<double> tf;
  std::optional<std::size_t> grid;
  std::string cost;
  std::string adjoint;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config, "key = value scenario file")->check(CLI::ExistingFile);
  cmd->add_option("--set", o.set, "override KEY=VALUE (repeatable)");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--b", o.b, "proportion of ITN usage");
  cmd->add_option("--tf", o.tf, "final time in days");
  cmd->add_option("--grid", o.grid, "number of grid intervals");
  cmd->add_option("--cost", o.cost, "cost functional")->check(CLI::IsMember({"j1", "j2"}));
  cmd->add_option("--adjoint", o.adjoint, "costate equations")->check(CLI::IsMember({"paper", "exact"}));
}

itnctl::ScenarioConfig resolve(const CommonOptions& o, std::vector<std::string> extra = {}) {
  std::vector<std::string> overrides = o.set;
  if (!o.out.empty()) overrides.push_back("output_dir=" + o.out);
  if (o.b) overrides.push_back("b=" + itnctl::format_double(*o.b));
  if (o.tf) overrides.push_back("tf=" + itnctl::format_double(*o.tf));
  if (o.grid) overrides.push_back("n=" + std::to_string(*o.grid));
  if (!o.cost.empty()) overrides.push_back("cost=" + o.cost);
  if (!o.adjoint.empty()) overrides.push_back("adjoint_mode=" + o.adjoint);
  overrides.insert(overrides.end(), extra.begin(), extra.end());
  std::optional<std::filesystem::path> path;
  if (!o.config.empty()) path = o.config;
  return itnctl::load_config(path, overrides);
}

void print_run(const itnctl::RunManifest& m) {
  std::printf("%-28s b=%-6s J=%.6g iterations=%zu converged=%s I_h<1 at day %s\n",
              m.config.name.c_str(), itnctl::format_double(m.config.params.b).c_str(), m.cost_value,
              m.iterations, m.converged ? "yes" : "no",
              m.first_day_below_one < 0 ? "never" : itnctl::format_double(m.first_day_below_one).c_str());
}

int run_single(const CommonOptions& o, bool control) {
  const auto cfg = resolve(o, {control ? "control_enabled=true" : "control_enabled=false"});
  const auto m = itnctl::run_scenario(cfg);
  print_run(m);
  std::printf("artifacts written to %s\n", cfg.output_dir.string().c_str());
  return m.converged ? kOk : kNotConverged;
}

int run_sweep_cmd(const CommonOptions& o) {
  auto cfg = resolve(o);
  if (cfg.sweep_b.empty()) cfg.sweep_b = itnctl::reference_b_values();
  const auto members = itnctl::run_sweep(cfg);
  int code = kOk;
  for (const auto& m : members) {
    if (!m.ok()) {
      std::fprintf(stderr, "%s failed: %s\n", m.config.name.c_str(), m.error.c_str());
      code = kNotConverged;
      continue;
    }
    print_run(m);
    if (!m.converged) code = kNotConverged;
  }
  return code;
}

int run_compare(const CommonOptions& o) {
  const auto cfg = resolve(o);
  const auto cmp = itnctl::compare_costs(cfg);
  print_run(cmp.j1);
  print_run(cmp.j2);
  std::printf("state discrepancy (relative to plot scale): S_h %.3g I_h %.3g S_v %.3g I_v %.3g\n",
              cmp.state_discrepancy[0], cmp.state_discrepancy[1], cmp.state_discrepancy[2],
              cmp.state_discrepancy[3]);
  std::printf("u_J2 - u_J1: min %.3g max %.3g\n", cmp.min_control_excess, cmp.max_control_excess);
  if (cfg.adjoint_mode == itnctl::AdjointMode::PaperStated) {
    std::printf("note: paper-stated costates do not feed I_v into the control law; use --adjoint exact "
                "to see the effect of the J2 weight\n");
  }
  return cmp.j1.converged && cmp.j2.converged ? kOk : kNotConverged;
}

int run_verify(const CommonOptions& o) {
  const auto cfg = resolve(o);
  const auto r = itnctl::run_verification(cfg);
  std::printf("gradient check: %zu directions, max relative error %.3e, %.0f%% within 1e-3 -> %s\n",
              r.gradient.directions_tested, r.gradient.max_rel_error,
              100.0 * r.gradient_fraction_within_1e3, r.gradient_ok ? "PASS" : "FAIL");
  std::printf("cross-validation: J_fbs %.8g J_direct %.8g relative gap %.3e, control L2 distance %.3e -> %s\n",
              r.agreement.j_fbs, r.agreement.j_direct, r.agreement.rel_gap,
              r.agreement.control_l2_distance, r.agreement_ok ? "PASS" : "FAIL");
  return r.gradient_ok && r.agreement_ok ? kOk : kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal ITN supervision control for a host-vector malaria model"};
  app.set_version_flag("--version", std::string(itnctl::kToolVersion));
  app.require_subcommand(1);

  CommonOptions opts;
  auto* simulate = app.add_subcommand("simulate", "forward integration with u = 0");
  auto* solve = app.add_subcommand("solve", "optimal control by forward-backward sweep");
  auto* sweep = app.add_subcommand("sweep", "solve for every b in sweep_b (default: the seven reference values)");
  auto* compare = app.add_subcommand("compare-costs", "solve under J1 and J2 and compare");
  auto* verify = app.add_subcommand("verify", "gradient check and direct-method cross-validation");
  for (auto* cmd : {simulate, solve, sweep, compare, verify}) add_common(cmd, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*simulate) return run_single(opts, false);
    if (*solve) return run_single(opts, true);
    if (*sweep) return run_sweep_cmd(opts);
    if (*compare) return run_compare(opts);
    if (*verify) return run_verify(opts);
  } catch (const itnctl::ParseError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const itnctl::UnknownKey& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const itnctl::InvariantViolation& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const itnctl::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIoError;
  } catch (const itnctl::MissingArtifact& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIoError;
  } catch (const itnctl::Error& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kNotConverged;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}
