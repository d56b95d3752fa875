// Copyright 2026 The pcb3d Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Serial vs OpenMP kernels. Run with OMP_NUM_THREADS set to the core count.
#include <benchmark/benchmark.h>

#include "pcb3d/network.hpp"
#include "pcb3d/resonator.hpp"
#include "pcb3d/signal_path.hpp"

namespace {

using namespace pcb3d;

struct CascadeInput {
  std::vector<kernels::SList> lists;
  std::vector<const kernels::SList*> chain;
};

CascadeInput cascade_input(std::size_t points) {
  const FrequencyGrid grid = FrequencyGrid::linspace(3e9, 8e9, points);
  CascadeInput in;
  for (const auto& e : nju13_control_line(nju13_package())) in.lists.push_back(element_network(e, grid, 50.0).s());
  for (const auto& l : in.lists) in.chain.push_back(&l);
  return in;
}

template <Exec mode>
void BM_Cascade(benchmark::State& state) {
  const CascadeInput in = cascade_input(static_cast<std::size_t>(state.range(0)));
  kernels::SList out(in.lists.front().size());
  for (auto _ : state) {
    kernels::cascade(in.chain, 50.0, out, mode);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <Exec mode>
void BM_NotchJacobian(benchmark::State& state) {
  NotchResonanceModel m = notch_from_qi(5.372e9, 62000.0, 20000.0);
  m.cable_delay = 40e-9;
  const double half = 10.0 * m.f0 / m.q_loaded;
  const FrequencyGrid grid = FrequencyGrid::linspace(m.f0 - half, m.f0 + half, static_cast<std::size_t>(state.range(0)));
  const std::vector<Complex> data = model_s21(m, grid, Exec::serial);
  Eigen::VectorXd r;
  Eigen::MatrixXd jac;
  for (auto _ : state) {
    kernels::notch_residual_jacobian(m.params(), grid.points(), data, r, jac, mode);
    benchmark::DoNotOptimize(jac.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

BENCHMARK(BM_Cascade<Exec::serial>)->Arg(1001)->Arg(100001);
BENCHMARK(BM_Cascade<Exec::parallel>)->Arg(1001)->Arg(100001);
BENCHMARK(BM_NotchJacobian<Exec::serial>)->Arg(401)->Arg(40001);
BENCHMARK(BM_NotchJacobian<Exec::parallel>)->Arg(401)->Arg(40001);

}  // namespace

BENCHMARK_MAIN();
