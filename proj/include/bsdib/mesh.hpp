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

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace bsdib::mesh {

using Point = Eigen::Vector3d;

class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Boundary label of a face of the cube [0,L]^3.
enum class FaceTag : std::uint8_t {
  Interior = 0,
  Gamma = 1,         // z = 0, the electrode
  GammaTop = 2,      // z = L, Dirichlet data
  GammaLateral = 3,  // x or y in {0, L}, zero flux
};

/// A vertex on both Gamma and a lateral face is OnGamma.
enum class VertexTag : std::uint8_t {
  Other = 0,
  OnGamma = 1,
  OnGammaTop = 2,
};

/// Face reference from a cell. `outward` is true when the stored vertex
/// cycle of the face is counter-clockwise seen from outside the cell.
struct CellFace {
  std::int32_t face = 0;
  bool outward = true;

  bool operator==(const CellFace&) const = default;
};

struct Cell {
  std::vector<CellFace> faces;

  bool operator==(const Cell&) const = default;
};

/// Polyhedral partition of [0,L]^3. Vertices on Gamma come first
/// (indices 0..n_gamma-1), which makes the bulk/surface reduction map the
/// trivial prolongation [I; 0].
struct PolyhedralMesh {
  double L = 0.0;
  std::vector<Point> vertices;
  std::vector<std::vector<std::int32_t>> faces;
  std::vector<Cell> cells;
  std::vector<FaceTag> face_tags;
  std::vector<VertexTag> vertex_tags;
  std::int32_t n_gamma = 0;

  std::size_t num_vertices() const { return vertices.size(); }
  std::size_t num_faces() const { return faces.size(); }
  std::size_t num_cells() const { return cells.size(); }

  /// Sorted, unique vertex indices of a cell.
  std::vector<std::int32_t> cell_vertices(std::size_t cell) const;

  /// Absolute geometric tolerance used for tagging and planarity checks.
  double tolerance() const { return 1e-10 * L; }

  bool operator==(const PolyhedralMesh& other) const;
};

/// Polygonal mesh of Gamma. Node i is bulk vertex i.
struct SurfaceMesh {
  std::vector<Point> nodes;
  std::vector<std::vector<std::int32_t>> faces;
  std::vector<double> diameters;

  std::size_t num_nodes() const { return nodes.size(); }
  std::size_t num_faces() const { return faces.size(); }
};

struct GradedMeshSpec {
  double L = 50.0;
  int nx = 128;            // fine subdivisions per horizontal direction
  int fine_layers = 2;     // cube layers of edge L/nx sitting on Gamma
  int coarse_levels = 5;   // 2x coarsening levels stacked above

  void validate() const;
};

/// Graded cube-on-cube mesh: `fine_layers` layers of nx*nx cubes on Gamma,
/// then one layer per coarsening level whose cells have their bottom face
/// split 2x2 (13 vertices, 9 faces). The topmost layer absorbs whatever
/// height remains so the stack spans exactly [0, L].
PolyhedralMesh build_graded_mesh(const GradedMeshSpec& spec);

/// nx^3 cubes, (nx+1)^3 vertices.
PolyhedralMesh build_uniform_mesh(double L, int nx);

SurfaceMesh extract_surface_mesh(const PolyhedralMesh& mesh);

/// Throws MeshError describing the first violated structural invariant
/// (index ranges, planarity, watertightness, numbering, measure).
void validate_mesh(const PolyhedralMesh& mesh);

struct QualityReport {
  std::vector<double> cell_volumes;
  std::vector<double> face_areas;
  std::vector<double> cell_diameters;
  std::vector<double> face_diameters;
  std::size_t hanging_nodes = 0;
  double min_aspect_ratio = 0.0;
  double max_aspect_ratio = 0.0;
  double total_volume = 0.0;
  double gamma_area = 0.0;
  double gamma_top_area = 0.0;
};

QualityReport mesh_quality_report(const PolyhedralMesh& mesh);

/// Binary mesh format: "BSMESH1\n", one ASCII header line
/// "nv=.. nf=.. nc=.. n_gamma=.. L=..\n", then little-endian payload.
std::vector<std::uint8_t> serialize_mesh(const PolyhedralMesh& mesh);
PolyhedralMesh deserialize_mesh(std::span<const std::uint8_t> bytes);

void write_mesh_file(const PolyhedralMesh& mesh, const std::string& path);
PolyhedralMesh read_mesh_file(const std::string& path);

}  // namespace bsdib::mesh
