/* Copyright 2026 The BS-DIB Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <vector>

#include <benchmark/benchmark.h>

#include "bsdib/kinetics.hpp"
#include "bsdib/mesh.hpp"
#include "bsdib/reference.hpp"
#include "bsdib/vem.hpp"

namespace {

const bsdib::mesh::PolyhedralMesh& bench_mesh(int nx) {
  static std::vector<std::pair<int, bsdib::mesh::PolyhedralMesh>> cache;
  for (const auto& [n, m] : cache) {
    if (n == nx) return m;
  }
  cache.emplace_back(nx, bsdib::mesh::build_graded_mesh({50.0, nx, 2, 3}));
  return cache.back().second;
}

void BM_AssemblyParallel(benchmark::State& state) {
  const auto& m = bench_mesh(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(bsdib::vem::assemble_global(m));
  state.counters["cells"] = static_cast<double>(m.cells.size());
}

void BM_AssemblySerial(benchmark::State& state) {
  const auto& m = bench_mesh(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(bsdib::reference::assemble_global_serial(m));
  state.counters["cells"] = static_cast<double>(m.cells.size());
}

struct KineticsData {
  bsdib::kinetics::ModelParameters params;
  std::vector<double> b, q, eta, theta, f3, f4;
  explicit KineticsData(std::size_t n) : b(n, 0.01), q(n, -0.02), eta(n), theta(n), f3(n), f4(n) {
    params.psi_eta = params.psi_theta = 0.2;
    params.gamma = 0.2;
    params.resolve();
    for (std::size_t i = 0; i < n; ++i) {
      eta[i] = 1e-3 * static_cast<double>(i % 97);
      theta[i] = 0.5 + 1e-4 * static_cast<double>(i % 89);
    }
  }
};

void BM_SurfaceKineticsParallel(benchmark::State& state) {
  KineticsData d(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    bsdib::kinetics::surface_kinetics(d.params, d.b, d.q, d.eta, d.theta, d.f3, d.f4);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SurfaceKineticsSerial(benchmark::State& state) {
  KineticsData d(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    bsdib::reference::surface_kinetics_serial(d.params, d.b, d.q, d.eta, d.theta, d.f3, d.f4);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_AssemblyParallel)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AssemblySerial)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SurfaceKineticsParallel)->Arg(1 << 14)->Arg(1 << 18);
BENCHMARK(BM_SurfaceKineticsSerial)->Arg(1 << 14)->Arg(1 << 18);

BENCHMARK_MAIN();
