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

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "bsdib/diagnostics.hpp"
#include "bsdib/kinetics.hpp"
#include "bsdib/mesh.hpp"
#include "bsdib/solver.hpp"

namespace bsdib::io {

inline constexpr std::string_view kVersion = "0.1.0";

/// std of eta at or above this value means "patterned".
inline constexpr double kPatternThreshold = 1e-3;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One row of the experiment table.
struct ExperimentPreset {
  std::string_view name;
  double A2;
  double B;
  double C;
  double gamma;
  double psi;  // psi_eta = psi_theta
  double T;
  double tau;
  std::string_view pattern_3d;
  std::string_view pattern_2d;
};

std::span<const ExperimentPreset> presets();

/// Throws ConfigError for unknown names.
const ExperimentPreset& find_preset(std::string_view name);

/// Default constants with the preset's row applied and D derived.
kinetics::ModelParameters preset_parameters(const ExperimentPreset& preset);

enum class MeshKind { Graded, Uniform };

struct MeshConfig {
  MeshKind kind = MeshKind::Graded;
  double L = 50.0;
  int nx = 32;
  int fine_layers = 2;
  int coarse_levels = 3;

  mesh::PolyhedralMesh build() const;
  std::string describe() const;
};

/// Parses "graded:L=50,nx=128,fine=2,coarse=5" or "uniform:L=1,nx=4".
MeshConfig parse_mesh_spec(std::string_view spec);

struct RunConfig {
  std::optional<std::string> preset;
  kinetics::ModelParameters params;
  MeshConfig mesh;
  solver::TimeSteppingConfig time;
  solver::Mode mode = solver::Mode::BulkSurface3D;
  std::string output_dir = "bsdib_out";
  bool write_vtk = true;
  bool write_snapshots = true;
  /// Where each non-default value came from, in file order.
  std::vector<std::string> provenance;
};

/// Flat "name = value" text; '#' starts a comment. Errors carry the line number.
/// Without a preset, B, C, T, tau and psi are required; with
/// `require_run_keys` false only B and C are (stability queries).
RunConfig parse_config(std::string_view text, bool require_run_keys = true);
RunConfig load_config(const std::string& path, bool require_run_keys = true);

// Writers. All numbers are printed with 17 significant digits.

void write_surface_csv(const std::string& path, const mesh::SurfaceMesh& surface, const Eigen::VectorXd& eta,
                       const Eigen::VectorXd& theta);
void write_surface_csv(const std::string& path, std::span<const mesh::Point> nodes, const Eigen::VectorXd& eta,
                       const Eigen::VectorXd& theta);

struct SurfaceCsv {
  Eigen::VectorXd x, y, eta, theta;
};
SurfaceCsv read_surface_csv(const std::string& path);

/// Dual-cell areas of a tensor-product node set; these equal the lumped
/// surface masses of a uniform quadrilateral grid. Throws IoError when the
/// nodes are not a tensor grid.
Eigen::VectorXd tensor_grid_weights(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

/// ASCII legacy VTK unstructured grid of polyhedral cells with point scalars
/// b and q (physical values, one per mesh vertex).
void write_vtk_legacy(const std::string& path, const mesh::PolyhedralMesh& mesh, const Eigen::VectorXd& b,
                      const Eigen::VectorXd& q);

void write_increments_csv(const std::string& path, const solver::IncrementSeries& series);
solver::IncrementSeries read_increments_csv(const std::string& path);

// Comparison of two runs on the same surface mesh.

struct RunSummary {
  solver::PatternIndicators eta;
  solver::PatternIndicators theta;
  bool patterned = false;
  std::optional<solver::SteadyStateReport> steady_state;
};

struct CompareReport {
  RunSummary a;
  RunSummary b;
  double eta_relative_l2 = 0.0;  // ||eta_a - eta_b|| / max(||eta_a||, ||eta_b||), lumped weights
  double eta_max_abs_diff = 0.0;
  double theta_max_abs_diff = 0.0;
  double eta_mean_difference = 0.0;  // weighted mean of a minus that of b
};

/// `weights` are the lumped surface masses (or any positive node weights).
CompareReport compare_fields(const SurfaceCsv& a, const SurfaceCsv& b, const Eigen::VectorXd& weights,
                             const solver::IncrementSeries* increments_a = nullptr,
                             const solver::IncrementSeries* increments_b = nullptr);

/// Reads surface_final.csv (and increments.csv when present) from two run
/// directories. Node weights are the dual-cell areas of the tensor grid
/// recovered from the coordinates. Throws IoError on mesh mismatch.
CompareReport compare_runs(const std::string& dir_a, const std::string& dir_b);

std::string format_report(const CompareReport& report);

std::string verdict(bool patterned);

}  // namespace bsdib::io
