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

#include "bsdib/run.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>

#include <fmt/format.h>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "bsdib/diagnostics.hpp"

namespace bsdib::io {

namespace fs = std::filesystem;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError(fmt::format("cannot create directory '{}': {}", dir.string(), ec.message()));
}

int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace

solver::RunResult run_on_operators(const RunConfig& config, solver::Mode mode, const mesh::PolyhedralMesh& mesh,
                                   const vem::DiscreteOperators& ops, const std::string& out_dir) {
  const std::span<const mesh::Point> surface_nodes(mesh.vertices.data(), static_cast<std::size_t>(ops.n_surface));
  solver::SnapshotSink sink;
  if (!out_dir.empty()) {
    ensure_directory(out_dir);
    if (config.write_snapshots) {
      const fs::path snap_dir = fs::path(out_dir) / "snapshots";
      ensure_directory(snap_dir);
      sink = [snap_dir, surface_nodes](const solver::SimulationState& s) {
        write_surface_csv((snap_dir / fmt::format("surface_{:08d}.csv", s.step)).string(), surface_nodes, s.eta,
                          s.theta);
      };
    }
  }
  auto result = solver::run_simulation(ops, config.params, config.time, mode, sink);
  if (!out_dir.empty()) {
    const fs::path dir(out_dir);
    write_surface_csv((dir / "surface_final.csv").string(), surface_nodes, result.final_state.eta,
                      result.final_state.theta);
    write_increments_csv((dir / "increments.csv").string(), result.increments);
    if (config.write_vtk && mode == solver::Mode::BulkSurface3D) {
      const auto b = solver::bulk_on_vertices(ops, result.final_state.b, config.params.b0);
      const auto q = solver::bulk_on_vertices(ops, result.final_state.q, config.params.q0);
      write_vtk_legacy((dir / "bulk_final.vtk").string(), mesh, b, q);
    }
  }
  return result;
}

RunArtifacts execute_run(const RunConfig& config, solver::Mode mode, const std::string& out_dir) {
  RunArtifacts art;
  auto t0 = std::chrono::steady_clock::now();
  art.mesh = config.mesh.build();
  art.wall_seconds["mesh"] = seconds_since(t0);
  t0 = std::chrono::steady_clock::now();
  art.ops = vem::assemble_global(art.mesh);
  art.wall_seconds["assembly"] = seconds_since(t0);
  art.result = run_on_operators(config, mode, art.mesh, art.ops, out_dir);
  for (const auto& [k, v] : art.result.wall_seconds) art.wall_seconds[k] = v;
  if (!out_dir.empty()) {
    write_metadata((fs::path(out_dir) / "metadata.txt").string(), config, mode, art.mesh, art.result,
                   art.wall_seconds);
  }
  return art;
}

void write_metadata(const std::string& path, const RunConfig& config, solver::Mode mode,
                    const mesh::PolyhedralMesh& mesh, const solver::RunResult& result,
                    const std::map<std::string, double>& wall_seconds) {
  const auto& p = config.params;
  const auto& t = config.time;
  fmt::memory_buffer buf;
  auto out = std::back_inserter(buf);
  fmt::format_to(out, "bsdib_version = {}\n", kVersion);
  fmt::format_to(out, "mode = {}\n", solver::to_string(mode));
  fmt::format_to(out, "preset = {}\n", config.preset.value_or("none"));
  for (const auto& line : config.provenance) fmt::format_to(out, "provenance = {}\n", line);
  fmt::format_to(out, "mesh = {}\n", config.mesh.describe());
  fmt::format_to(out, "mesh_vertices = {}\nmesh_faces = {}\nmesh_cells = {}\nsurface_nodes = {}\n", mesh.vertices.size(),
                 mesh.faces.size(), mesh.cells.size(), mesh.n_gamma);
  const std::pair<const char*, double> values[] = {
      {"d_omega", p.d_omega}, {"d_gamma", p.d_gamma}, {"k_b", p.k_b},     {"k_q", p.k_q},
      {"b0", p.b0},           {"q0", p.q0},           {"rho", p.rho},     {"alpha", p.alpha},
      {"gamma", p.gamma},     {"A1", p.A1},           {"A2", p.A2},       {"B", p.B},
      {"C", p.C},             {"D", p.D},             {"k2", p.k2},       {"k3", p.k3},
      {"psi_eta", p.psi_eta}, {"psi_theta", p.psi_theta}};
  for (const auto& [name, v] : values) fmt::format_to(out, "{} = {:.17g}\n", name, v);
  fmt::format_to(out, "D_source = {}\n", p.derived_D ? "equilibrium" : "user");
  fmt::format_to(out, "tau = {:.17g}\nT = {:.17g}\nsteps = {}\n", t.tau, t.T, t.num_steps());
  fmt::format_to(out, "seed = {}\n", t.seed);
  fmt::format_to(out,
                 "initial_condition = bulk at (b0, q0); eta = U[0, {:.17g}] per surface node, theta = alpha + "
                 "U[-{:.17g}, {:.17g}]; mt19937_64, 53-bit uniforms, eta then theta per node\n",
                 t.eta_amplitude, t.theta_amplitude, t.theta_amplitude);
  fmt::format_to(out, "increment = {} norm of eta^(n+1) - eta^n{}\n", solver::to_string(t.norm),
                 t.norm == solver::IncrementNorm::L2 ? " weighted by the lumped surface mass" : "");
  fmt::format_to(out, "snapshots = {}\n", t.snapshot_count);
  fmt::format_to(out, "threads = {}\n", thread_count());
  for (const auto& [stage, s] : wall_seconds) fmt::format_to(out, "wall_seconds.{} = {:.3f}\n", stage, s);
  for (const auto& w : result.warnings) fmt::format_to(out, "warning = {}\n", w);

  const auto eta = solver::pattern_indicators(result.final_state.eta,
                                              Eigen::VectorXd::Ones(result.final_state.eta.size()));
  fmt::format_to(out, "final_eta_mean = {:.17g}\nfinal_eta_std = {:.17g}\nfinal_verdict = {}\n", eta.mean, eta.std,
                 verdict(eta.std >= kPatternThreshold));
  if (!result.increments.values.empty()) {
    const auto ss = solver::steady_state_diagnostics(result.increments);
    fmt::format_to(out, "increment_initial = {:.6e}\nincrement_peak = {:.6e}\nincrement_final = {:.6e}\n",
                   ss.initial_increment, ss.max_increment, ss.final_increment);
  }

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError(fmt::format("cannot open '{}' for writing", path));
  file.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!file) throw IoError(fmt::format("write to '{}' failed", path));
}

}  // namespace bsdib::io
