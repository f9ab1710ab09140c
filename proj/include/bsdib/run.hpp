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

#pragma once

#include <map>
#include <string>

#include "bsdib/io.hpp"
#include "bsdib/mesh.hpp"
#include "bsdib/solver.hpp"
#include "bsdib/vem.hpp"

namespace bsdib::io {

struct RunArtifacts {
  mesh::PolyhedralMesh mesh;
  vem::DiscreteOperators ops;
  solver::RunResult result;
  /// mesh, assembly, prepare and time_loop stages
  std::map<std::string, double> wall_seconds;
};

/// Builds the mesh, assembles the operators and integrates. When `out_dir` is
/// non-empty it receives metadata.txt, increments.csv, surface_final.csv,
/// snapshots/surface_<step>.csv and (3D mode) bulk_final.vtk.
RunArtifacts execute_run(const RunConfig& config, solver::Mode mode, const std::string& out_dir);

/// Same, on an already assembled mesh.
solver::RunResult run_on_operators(const RunConfig& config, solver::Mode mode, const mesh::PolyhedralMesh& mesh,
                                   const vem::DiscreteOperators& ops, const std::string& out_dir);

void write_metadata(const std::string& path, const RunConfig& config, solver::Mode mode,
                    const mesh::PolyhedralMesh& mesh, const solver::RunResult& result,
                    const std::map<std::string, double>& wall_seconds);

}  // namespace bsdib::io
