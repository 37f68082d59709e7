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

#include "itnctl/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "itnctl/csv.hpp"
#include "itnctl/errors.hpp"
#include "itnctl/integrator.hpp"
#include "itnctl/plot.hpp"
#include "itnctl/sweep.hpp"

namespace itnctl {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Files written by a run; removed again unless the run commits.
class ArtifactLog {
 public:
  ArtifactLog() = default;
  ArtifactLog(const ArtifactLog&) = delete;
  ArtifactLog& operator=(const ArtifactLog&) = delete;
  ~ArtifactLog() {
    if (committed_) return;
    std::error_code ec;
    for (const auto& f : files_) fs::remove(f, ec);
  }

  const fs::path& add(fs::path p) {
    files_.push_back(std::move(p));
    return files_.back();
  }
  void add_all(const std::vector<fs::path>& ps) {
    for (const auto& p : ps) files_.push_back(p);
  }
  const std::vector<fs::path>& files() const { return files_; }
  void commit() { committed_ = true; }

 private:
  std::vector<fs::path> files_;
  bool committed_ = false;
};

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

json config_json(const ScenarioConfig& cfg) {
  // Every value as its config-file string so the object replays exactly.
  json obj = json::object();
  const std::string text = to_config_text(cfg);
  for (const auto key : config_keys()) {
    const std::string needle = "\n" + std::string(key) + " = ";
    const auto at = text.find(needle);
    const auto start = at + needle.size();
    obj[std::string(key)] = text.substr(start, text.find('\n', start) - start);
  }
  return obj;
}


json residuals_json(const std::vector<double>& v) {
  json arr = json::array();
  for (double r : v) {
    if (std::isfinite(r)) {
      arr.push_back(r);
    } else {
      arr.push_back(nullptr);
    }
  }
  return arr;
}

json manifest_object(const RunManifest& m) {
  json artifacts = json::array();
  for (const auto& a : m.artifacts) artifacts.push_back(a.string());
  json obj = {
      {"tool_version", m.tool_version},
      {"config", config_json(m.config)},
      {"control_enabled", m.control_enabled},
      {"iterations", m.iterations},
      {"converged", m.converged},
      {"residuals", residuals_json(m.residuals)},
      {"cost_value", m.cost_value},
      {"infectious_burden", m.infectious_burden},
      {"first_day_below_one", m.first_day_below_one},
      {"duration_seconds", m.duration_seconds},
      {"artifacts", artifacts},
  };
  if (!m.ok()) obj["error"] = m.error;
  return obj;
}

fs::path artifact(const ScenarioConfig& cfg, const std::string& kind, const char* ext) {
  return cfg.output_dir / (cfg.name + "_" + kind + ext);
}

void write_control_csv(const ControlGrid& u, const fs::path& path) {
  CsvTable table;
  table.header = {"t", "u"};
  table.columns.resize(2);
  for (std::size_t i = 0; i < u.size(); ++i) {
    table.columns[0].push_back(u.grid().time(i));
    table.columns[1].push_back(u[i]);
  }
  write_table(table, path);
}

struct Compartment {
  const char* column;
  const char* kind;
  const char* title;
};

constexpr std::array<Compartment, 4> kCompartments = {{
    {"S_h", "susceptible_humans", "Susceptible humans"},
    {"I_h", "infectious_humans", "Infectious humans"},
    {"S_v", "susceptible_mosquitoes", "Susceptible mosquitoes"},
    {"I_v", "infectious_mosquitoes", "Infectious mosquitoes"},
}};

const char* unit_of(const Compartment& c) {
  return c.column[2] == 'h' ? "humans (individuals)" : "mosquitoes (individuals)";
}

SolveResult uncontrolled(const ModelParams& p, const StateVec& x0, const TimeGrid& grid,
                         AdjointMode mode, CostKind which) {
  const ControlGrid u(grid, 0.0);
  auto x = simulate_states(p, x0, u);
  auto l = solve_adjoint(p, x, u, mode, which);
  const double cost = integrate_cost(p, x, u, which);
  return SolveResult{std::move(x), std::move(l), u, cost, 0, true, {}, {cost}};
}

}  // namespace

std::string manifest_json(const RunManifest& m) { return manifest_object(m).dump(2) + "\n"; }

std::vector<fs::path> render_plots(const std::vector<PlotSpec>& specs) {
  std::vector<fs::path> written;
  for (const auto& spec : specs) {
    if (spec.sources.empty()) throw MissingArtifact("plot '" + spec.title + "' has no sources");
    LinePlot plot{spec.title, "time (days)", spec.y_label, {}, spec.y_range};
    for (const auto& src : spec.sources) {
      const CsvTable table = read_csv(src.csv);
      plot.series.push_back({src.label, table.column("t"), table.column(src.column)});
    }
    write_svg(plot, spec.output);
    written.push_back(spec.output);
  }
  return written;
}

RunManifest run_scenario(const ScenarioConfig& cfg) {
  const auto started = std::chrono::steady_clock::now();
  validate(cfg);
  ensure_dir(cfg.output_dir);
  ArtifactLog log;

  const TimeGrid grid = cfg.grid();
  const SolveResult result = cfg.control_enabled
                                 ? fbs_solve(cfg.params, cfg.x0, grid, cfg.sweep_config())
                                 : uncontrolled(cfg.params, cfg.x0, grid, cfg.adjoint_mode, cfg.cost);

  const fs::path traj_csv = log.add(artifact(cfg, "trajectory", ".csv"));
  write_csv(result.state_traj, result.control, result.adjoint_traj, traj_csv);
  write_control_csv(result.control, log.add(artifact(cfg, "control", ".csv")));

  std::vector<PlotSpec> plots;
  std::optional<fs::path> baseline_csv;
  if (cfg.control_enabled) {
    const SolveResult base = uncontrolled(cfg.params, cfg.x0, grid, cfg.adjoint_mode, cfg.cost);
    baseline_csv = log.add(artifact(cfg, "baseline", ".csv"));
    write_csv(base.state_traj, base.control, base.adjoint_traj, *baseline_csv);
  }
  for (const auto& c : kCompartments) {
    PlotSpec spec{c.title, unit_of(c), {}, artifact(cfg, c.kind, ".svg"), {}};
    spec.sources.push_back({traj_csv, c.column, cfg.control_enabled ? "with control" : "without control"});
    if (baseline_csv) spec.sources.push_back({*baseline_csv, c.column, "without control"});
    plots.push_back(std::move(spec));
  }
  plots.push_back({"Control u", "u (dimensionless)", {{traj_csv, "u", "u"}},
                   artifact(cfg, "control", ".svg"), std::pair{0.0, 1.0}});
  log.add_all(render_plots(plots));

  const fs::path cfg_path = log.add(artifact(cfg, "resolved", ".cfg"));
  write_text(cfg_path, to_config_text(cfg));

  RunManifest m;
  m.config = cfg;
  m.control_enabled = cfg.control_enabled;
  m.iterations = result.iterations;
  m.converged = result.converged;
  m.residuals = result.per_iteration_residuals;
  m.cost_value = result.cost_value;
  m.infectious_burden = infectious_burden(result.state_traj);
  m.first_day_below_one = first_time_below(result.state_traj, 1.0);
  const fs::path manifest_path = log.add(artifact(cfg, "manifest", ".json"));
  m.artifacts = log.files();
  m.duration_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  write_text(manifest_path, manifest_json(m));
  log.commit();
  return m;
}

std::vector<RunManifest> run_sweep(const ScenarioConfig& cfg) {
  validate(cfg);
  if (cfg.sweep_b.empty()) throw InvariantViolation("sweep constraint violated: sweep_b is non-empty");
  ensure_dir(cfg.output_dir);

  std::vector<ScenarioConfig> members;
  for (double b : cfg.sweep_b) {
    ScenarioConfig m = cfg;
    m.params.b = b;
    m.sweep_b.clear();
    m.name = cfg.name + "_b" + format_double(b);
    members.push_back(std::move(m));
  }

  std::vector<RunManifest> manifests(members.size());
  const auto count = static_cast<std::ptrdiff_t>(members.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      manifests[k] = run_scenario(members[k]);
    } catch (const std::exception& e) {
      manifests[k].config = members[k];
      manifests[k].error = e.what();
    }
  }

  ArtifactLog log;
  CsvTable summary;
  summary.header = {"b", "cost", "iterations", "converged", "infectious_burden", "first_day_below_one"};
  summary.columns.resize(summary.header.size());
  std::vector<fs::path> member_csvs;
  std::vector<std::string> labels;
  for (const auto& m : manifests) {
    if (!m.ok()) continue;
    summary.columns[0].push_back(m.config.params.b);
    summary.columns[1].push_back(m.cost_value);
    summary.columns[2].push_back(static_cast<double>(m.iterations));
    summary.columns[3].push_back(m.converged ? 1.0 : 0.0);
    summary.columns[4].push_back(m.infectious_burden);
    summary.columns[5].push_back(m.first_day_below_one);
    member_csvs.push_back(artifact(m.config, "trajectory", ".csv"));
    labels.push_back("b=" + format_double(m.config.params.b));
  }

  if (!member_csvs.empty()) {
    write_table(summary, log.add(artifact(cfg, "sweep_summary", ".csv")));

    CsvTable combined;
    combined.header.push_back("t");
    combined.columns.push_back(read_csv(member_csvs.front()).column("t"));
    for (const char* col : {"S_h", "I_h", "u"}) {
      for (std::size_t k = 0; k < member_csvs.size(); ++k) {
        combined.header.push_back(std::string(col) + "_" + labels[k]);
        combined.columns.push_back(read_csv(member_csvs[k]).column(col));
      }
    }
    write_table(combined, log.add(artifact(cfg, "sweep", ".csv")));

    auto overlay = [&](const char* column, const char* kind, const char* title, const char* y_label,
                       std::optional<std::pair<double, double>> range) {
      PlotSpec spec{title, y_label, {}, artifact(cfg, kind, ".svg"), range};
      for (std::size_t k = 0; k < member_csvs.size(); ++k) {
        spec.sources.push_back({member_csvs[k], column, labels[k]});
      }
      return spec;
    };
    log.add_all(render_plots({
        overlay("S_h", "sweep_susceptible_humans", "Susceptible humans by ITN usage",
                "humans (individuals)", {}),
        overlay("I_h", "sweep_infectious_humans", "Infectious humans by ITN usage",
                "humans (individuals)", {}),
        overlay("u", "sweep_control", "Optimal control by ITN usage", "u (dimensionless)",
                std::pair{0.0, 1.0}),
    }));
  }

  json index = {{"tool_version", kToolVersion}, {"config", config_json(cfg)}, {"members", json::array()}};
  for (const auto& m : manifests) index["members"].push_back(manifest_object(m));
  json files = json::array();
  const fs::path index_path = log.add(artifact(cfg, "sweep_manifest", ".json"));
  for (const auto& f : log.files()) files.push_back(f.string());
  index["artifacts"] = files;
  write_text(index_path, index.dump(2) + "\n");
  log.commit();
  return manifests;
}

CostComparison compare_costs(const ScenarioConfig& cfg) {
  validate(cfg);
  ensure_dir(cfg.output_dir);
  ScenarioConfig j1 = cfg;
  j1.control_enabled = true;
  j1.sweep_b.clear();
  j1.cost = CostKind::J1;
  j1.name = cfg.name + "_j1";
  ScenarioConfig j2 = j1;
  j2.cost = CostKind::J2;
  j2.name = cfg.name + "_j2";

  CostComparison out;
  out.j1 = run_scenario(j1);
  out.j2 = run_scenario(j2);

  ArtifactLog log;
  const fs::path csv1 = artifact(j1, "trajectory", ".csv");
  const fs::path csv2 = artifact(j2, "trajectory", ".csv");
  const CsvTable t1 = read_csv(csv1);
  const CsvTable t2 = read_csv(csv2);

  for (std::size_t k = 0; k < kCompartments.size(); ++k) {
    const auto& a = t1.column(kCompartments[k].column);
    const auto& b = t2.column(kCompartments[k].column);
    double scale = 0.0;
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      scale = std::max({scale, std::abs(a[i]), std::abs(b[i])});
      worst = std::max(worst, std::abs(a[i] - b[i]));
    }
    out.state_discrepancy[k] = scale > 0.0 ? worst / scale : 0.0;
  }
  const auto& u1 = t1.column("u");
  const auto& u2 = t2.column("u");
  out.min_control_excess = INFINITY;
  out.max_control_excess = -INFINITY;
  for (std::size_t i = 0; i < u1.size(); ++i) {
    out.min_control_excess = std::min(out.min_control_excess, u2[i] - u1[i]);
    out.max_control_excess = std::max(out.max_control_excess, u2[i] - u1[i]);
  }

  CsvTable combined;
  combined.header.push_back("t");
  combined.columns.push_back(t1.column("t"));
  for (const char* col : {"S_h", "I_h", "S_v", "I_v", "u"}) {
    combined.header.push_back(std::string(col) + "_J1");
    combined.columns.push_back(t1.column(col));
    combined.header.push_back(std::string(col) + "_J2");
    combined.columns.push_back(t2.column(col));
  }
  write_table(combined, log.add(artifact(cfg, "compare", ".csv")));

  std::vector<PlotSpec> plots;
  for (const auto& c : kCompartments) {
    plots.push_back({std::string(c.title) + " for J1 and J2", unit_of(c),
                     {{csv1, c.column, "J1"}, {csv2, c.column, "J2"}},
                     artifact(cfg, std::string("compare_") + c.kind, ".svg"), {}});
  }
  plots.push_back({"Optimal control for J1 and J2", "u (dimensionless)",
                   {{csv1, "u", "J1"}, {csv2, "u", "J2"}}, artifact(cfg, "compare_control", ".svg"),
                   std::pair{0.0, 1.0}});
  log.add_all(render_plots(plots));
  log.commit();
  return out;
}

VerifyReport run_verification(const ScenarioConfig& cfg) {
  validate(cfg);
  ensure_dir(cfg.output_dir);
  VerifyReport report;

  const TimeGrid grad_grid(cfg.t0, cfg.tf, cfg.gradcheck_n);
  report.gradient =
      finite_difference_gradient_check(cfg.params, cfg.x0, ControlGrid(grad_grid, 0.5), cfg.cost,
                                       cfg.gradcheck_directions, cfg.gradcheck_epsilon, cfg.seed);
  const auto& errs = report.gradient.per_direction_errors;
  const auto within = std::count_if(errs.begin(), errs.end(), [](double e) { return e <= 1e-3; });
  report.gradient_fraction_within_1e3 = static_cast<double>(within) / static_cast<double>(errs.size());
  report.gradient_ok = report.gradient_fraction_within_1e3 >= 0.95 && report.gradient.max_rel_error <= 1e-2;

  SweepConfig sweep = cfg.sweep_config();
  sweep.adjoint_mode = AdjointMode::Exact;
  report.agreement = cross_validate(cfg.params, cfg.x0, TimeGrid(cfg.t0, cfg.tf, cfg.verify_n), sweep,
                                    cfg.direct_max_iters);
  report.agreement_ok = report.agreement.rel_gap <= 0.01;

  const auto& a = report.agreement;
  json doc = {
      {"tool_version", kToolVersion},
      {"config", config_json(cfg)},
      {"gradient_check",
       {{"grid_intervals", cfg.gradcheck_n},
        {"control", 0.5},
        {"directions_tested", report.gradient.directions_tested},
        {"max_rel_error", report.gradient.max_rel_error},
        {"fraction_within_1e-3", report.gradient_fraction_within_1e3},
        {"per_direction_errors", report.gradient.per_direction_errors},
        {"passed", report.gradient_ok}}},
      {"cross_validation",
       {{"grid_intervals", cfg.verify_n},
        {"j_fbs", a.j_fbs},
        {"j_direct", a.j_direct},
        {"rel_gap", a.rel_gap},
        {"control_l2_distance", a.control_l2_distance},
        {"fbs_iterations", a.fbs_iterations},
        {"direct_iterations", a.direct_iterations},
        {"fbs_converged", a.fbs_converged},
        {"direct_converged", a.direct_converged},
        {"passed", report.agreement_ok}}},
  };
  const fs::path path = artifact(cfg, "verify", ".json");
  write_text(path, doc.dump(2) + "\n");
  report.artifacts.push_back(path);
  return report;
}

}  // namespace itnctl
