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

// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>
#include <omp.h>

#include <filesystem>

#include "itnctl/scenario.hpp"

using namespace itnctl;

namespace {

struct ControlFixture {
  ModelParams p;
  TimeGrid grid{0.0, 100.0, 1};
  ControlGrid u{grid, 0.0};
  Trajectory<StateVec> x{grid, {}};
  Trajectory<AdjointVec> l{grid, {}};

  explicit ControlFixture(std::size_t n) : grid(0.0, 100.0, n), u(grid, 0.3) {
    x = simulate_states(p, reference_initial_state(), u);
    l = solve_adjoint(p, x, u, AdjointMode::PaperStated, CostKind::J1);
  }
};

void BM_UpdateControlSerial(benchmark::State& state) {
  const ControlFixture f(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(update_control_serial(f.u, f.x, f.l, f.p, 0.5));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_UpdateControlParallel(benchmark::State& state) {
  const ControlFixture f(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(update_control(f.u, f.x, f.l, f.p, 0.5));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

struct GradientFixture {
  ModelParams p;
  StateVec x0 = reference_initial_state();
  TimeGrid grid{0.0, 100.0, 2000};
  ControlGrid u{grid, 0.5};
  std::vector<double> gradient = cost_gradient_adjoint(p, x0, u, CostKind::J1);
  std::vector<std::vector<double>> dirs;
  CostFunction cost = [this](const ControlGrid& c) { return discrete_cost(p, x0, c, CostKind::J1); };

  explicit GradientFixture(std::size_t count) : dirs(admissible_directions(u, count, 1e-5, 42)) {}
};

void BM_GradientCheckSerial(benchmark::State& state) {
  const GradientFixture f(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(finite_difference_check_serial(f.cost, f.gradient, f.u, f.dirs, 1e-5));
  }
}

void BM_GradientCheckParallel(benchmark::State& state) {
  const GradientFixture f(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(finite_difference_check(f.cost, f.gradient, f.u, f.dirs, 1e-5));
  }
}

// The sweep parallelizes over members; one thread is its serial reference.
void BM_Sweep(benchmark::State& state) {
  ScenarioConfig cfg;
  cfg.name = "bench";
  cfg.n = 2000;
  cfg.sweep_b = reference_b_values();
  cfg.output_dir = std::filesystem::temp_directory_path() / "itnctl_bench";
  const int previous = omp_get_max_threads();
  omp_set_num_threads(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_sweep(cfg));
  omp_set_num_threads(previous);
  std::filesystem::remove_all(cfg.output_dir);
}

}  // namespace

BENCHMARK(BM_UpdateControlSerial)->Arg(5000)->Arg(50000);
BENCHMARK(BM_UpdateControlParallel)->Arg(5000)->Arg(50000);
BENCHMARK(BM_GradientCheckSerial)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GradientCheckParallel)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sweep)->Arg(1)->ArgName("threads")->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Sweep)
    ->Arg(omp_get_num_procs())
    ->ArgName("threads")
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

BENCHMARK_MAIN();
