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

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "bsdib/mesh.hpp"

namespace bsdib::vem {

using Point = Eigen::Vector3d;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

class VemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Lowest-order projector on a polygon or polyhedron.
///
/// The projection of the i-th vertex basis function is the linear polynomial
///   p_i(x) = coeffs(0,i) + sum_a coeffs(a,i) * (x - center) . axis_a / h
/// with axis_a an orthonormal frame of the element (2 axes for faces,
/// 3 for cells). The constant is fixed by the vertex average, so the value of
/// p_i at `center` is coeffs(0,i).
struct Projector {
  Point center = Point::Zero();
  std::vector<Point> axes;
  double h = 0.0;
  Eigen::MatrixXd coeffs;  // (1 + dim) x n_vertices

  std::size_t dim() const { return axes.size(); }
  std::size_t size() const { return static_cast<std::size_t>(coeffs.cols()); }

  /// Value at x of the projection of the function with vertex values `dofs`.
  double evaluate(std::span<const double> dofs, const Point& x) const;

  /// Projection of the function with vertex values `dofs`, sampled at the
  /// element vertices (the matrix Pi in "dof(v - Pi v)").
  Eigen::MatrixXd vertex_matrix(std::span<const Point> vertices) const;
};

struct LocalFaceOperators {
  Projector projector;
  Eigen::MatrixXd mass_consistency;
  Eigen::MatrixXd mass_stability;
  Eigen::MatrixXd stiffness_consistency;
  Eigen::MatrixXd stiffness_stability;
  Eigen::MatrixXd mass;       // consistency + h_F^2 * dof-dof stabilization
  Eigen::MatrixXd stiffness;  // consistency + dof-dof stabilization
  double area = 0.0;
  Point centroid = Point::Zero();
  Point unit_normal = Point::Zero();  // from the vertex cycle
  double h = 0.0;
};

struct LocalCellOperators {
  Projector projector;
  std::vector<std::int32_t> vertices;  // global indices, local order
  Eigen::MatrixXd mass_consistency;
  Eigen::MatrixXd mass_stability;
  Eigen::MatrixXd stiffness_consistency;
  Eigen::MatrixXd stiffness_stability;
  Eigen::MatrixXd mass;       // consistency + h_E^3 * dof-dof stabilization
  Eigen::MatrixXd stiffness;  // consistency + h_E * dof-dof stabilization
  double volume = 0.0;
  Point centroid = Point::Zero();
  double h = 0.0;
};

/// Pi^nabla_F on a planar simple polygon (vertex cycle in order).
Projector face_projector(std::span<const Point> polygon);

LocalFaceOperators local_face_matrices(std::span<const Point> polygon);

/// Face data of a polyhedron as seen from the cell.
struct CellFaceInput {
  std::span<const std::int32_t> vertices;  // global indices, stored cycle
  const LocalFaceOperators* ops = nullptr;
  bool outward = true;
};

/// Pi^nabla_E from the boundary integral of u (grad p . n), with the face
/// integrals of u replaced by those of Pi_F u (enhancement).
Projector cell_projector(std::span<const std::int32_t> cell_vertices, std::span<const Point> all_vertices,
                         std::span<const CellFaceInput> faces);

LocalCellOperators local_cell_matrices(const mesh::PolyhedralMesh& mesh, std::size_t cell,
                                       std::span<const LocalFaceOperators> face_ops);

/// Operators of the bulk-surface scheme. Bulk vectors are indexed by free
/// (non Gamma_T) dof, which coincide with the first n_bulk mesh vertices;
/// surface vectors by the first n_surface mesh vertices.
struct DiscreteOperators {
  // Before Dirichlet elimination, on all mesh vertices.
  SparseMatrix stiffness_bulk_full;
  Eigen::VectorXd lumped_mass_bulk_full;

  SparseMatrix stiffness_bulk;  // A_Omega on free dofs
  Eigen::VectorXd lumped_mass_bulk;
  SparseMatrix stiffness_surface;  // A_Gamma
  Eigen::VectorXd lumped_mass_surface;

  std::vector<std::int32_t> free_vertices;       // free dof -> mesh vertex
  std::vector<std::int32_t> dirichlet_vertices;  // eliminated Gamma_T vertices
  std::int64_t n_bulk = 0;
  std::int64_t n_surface = 0;

  /// R: surface vector -> bulk vector, [I; 0].
  Eigen::VectorXd prolong(const Eigen::VectorXd& surface) const;
  /// R^T: bulk vector -> surface trace.
  Eigen::VectorXd restrict_to_surface(const Eigen::VectorXd& bulk) const;
};

/// Local face and cell matrices computed in parallel; the global sums are
/// accumulated in fixed element order, so the result is bit-identical to
/// reference::assemble_global_serial for any thread count.
DiscreteOperators assemble_global(const mesh::PolyhedralMesh& mesh);

/// Shared by the parallel and serial assembly paths: scatter precomputed local
/// matrices into the global operators in element order.
DiscreteOperators finalize_assembly(const mesh::PolyhedralMesh& mesh, std::span<const LocalFaceOperators> face_ops,
                                    std::span<const LocalCellOperators> cell_ops);

using ScalarField = std::function<double(const Point&)>;

/// Solves A u = M_lumped f on all vertices with u = g on the whole boundary
/// of the cube. Returns nodal values on every mesh vertex.
Eigen::VectorXd solve_dirichlet_problem(const mesh::PolyhedralMesh& mesh, const DiscreteOperators& ops,
                                        const ScalarField& boundary, const ScalarField& load);

/// Patch test harness: Dirichlet data from a linear p, zero load.
Eigen::VectorXd solve_poisson_patch(const mesh::PolyhedralMesh& mesh, const DiscreteOperators& ops,
                                    const ScalarField& p);

/// "row col value" per line, 17 significant digits, row-major order.
void write_coordinate_text(const SparseMatrix& matrix, const std::string& path);

}  // namespace bsdib::vem
