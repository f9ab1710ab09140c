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

#include <cmath>
#include <unordered_map>

#include <Eigen/LU>
#include <fmt/format.h>

#include "bsdib/geometry.hpp"
#include "bsdib/vem.hpp"

namespace bsdib::vem {

double Projector::evaluate(std::span<const double> dofs, const Point& x) const {
  double value = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    double p = coeffs(0, static_cast<Eigen::Index>(i));
    for (std::size_t a = 0; a < dim(); ++a) {
      p += coeffs(static_cast<Eigen::Index>(a + 1), static_cast<Eigen::Index>(i)) * (x - center).dot(axes[a]) / h;
    }
    value += dofs[i] * p;
  }
  return value;
}

Eigen::MatrixXd Projector::vertex_matrix(std::span<const Point> vertices) const {
  Eigen::MatrixXd D(static_cast<Eigen::Index>(vertices.size()), static_cast<Eigen::Index>(1 + dim()));
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    D(row, 0) = 1.0;
    for (std::size_t a = 0; a < dim(); ++a) D(row, static_cast<Eigen::Index>(a + 1)) = (vertices[i] - center).dot(axes[a]) / h;
  }
  return D * coeffs;
}

namespace {

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m) { return 0.5 * (m + m.transpose()); }

// Consistency and dof-dof stabilization blocks shared by faces and cells.
struct LocalBlocks {
  Eigen::MatrixXd mass_consistency, stiffness_consistency, stability;
};

LocalBlocks local_blocks(const Projector& proj, std::span<const Point> vertices, double measure,
                         const Eigen::MatrixXd& monomial_mass) {
  const auto n = static_cast<Eigen::Index>(proj.size());
  const auto dim = static_cast<Eigen::Index>(proj.dim());
  LocalBlocks b;
  // Gradients of the scaled monomials are axis_a / h and mutually orthogonal.
  const Eigen::MatrixXd grads = proj.coeffs.bottomRows(dim);
  b.stiffness_consistency = symmetrized(measure / (proj.h * proj.h) * grads.transpose() * grads);
  b.mass_consistency = symmetrized(proj.coeffs.transpose() * monomial_mass * proj.coeffs);
  const Eigen::MatrixXd residual = Eigen::MatrixXd::Identity(n, n) - proj.vertex_matrix(vertices);
  b.stability = symmetrized(residual.transpose() * residual);
  return b;
}

}  // namespace

Projector face_projector(std::span<const Point> polygon) {
  const std::size_t n = polygon.size();
  if (n < 3) throw VemError("degenerate polygon: fewer than 3 vertices");
  const Point normal = geometry::newell_normal(polygon);
  const double area = 0.5 * normal.norm();
  const double h = geometry::diameter(polygon);
  if (!(h > 0.0) || area <= 1e-14 * h * h) throw VemError("degenerate polygon: zero area");
  const Point unit = normal / normal.norm();

  // Frame aligned with the first longest edge.
  std::size_t longest = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double len = (polygon[(i + 1) % n] - polygon[i]).norm();
    if (len > best) {
      best = len;
      longest = i;
    }
  }
  Point e1 = polygon[(longest + 1) % n] - polygon[longest];
  e1 -= e1.dot(unit) * unit;
  e1.normalize();
  const Point e2 = unit.cross(e1);

  Projector proj;
  proj.center = geometry::polygon_centroid(polygon);
  proj.axes = {e1, e2};
  proj.h = h;

  const auto cols = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(3, cols);
  Eigen::Matrix3d G = Eigen::Matrix3d::Zero();
  G(0, 0) = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto col = static_cast<Eigen::Index>(i);
    const auto next = static_cast<Eigen::Index>((i + 1) % n);
    B(0, col) = 1.0 / static_cast<double>(n);
    G(0, 1) += (polygon[i] - proj.center).dot(e1) / h / static_cast<double>(n);
    G(0, 2) += (polygon[i] - proj.center).dot(e2) / h / static_cast<double>(n);

    // |e| n_e for the edge i -> i+1 in the plane frame, split between its ends.
    const Point d = polygon[(i + 1) % n] - polygon[i];
    const double du = d.dot(e1);
    const double dw = d.dot(e2);
    B(1, col) += 0.5 * dw / h;
    B(2, col) += -0.5 * du / h;
    B(1, next) += 0.5 * dw / h;
    B(2, next) += -0.5 * du / h;
  }
  G(1, 1) = G(2, 2) = area / (h * h);
  proj.coeffs = G.partialPivLu().solve(B);
  return proj;
}

LocalFaceOperators local_face_matrices(std::span<const Point> polygon) {
  LocalFaceOperators ops;
  ops.projector = face_projector(polygon);
  const Projector& proj = ops.projector;
  const Point normal = geometry::newell_normal(polygon);
  ops.area = 0.5 * normal.norm();
  ops.unit_normal = normal.normalized();
  ops.centroid = proj.center;
  ops.h = proj.h;

  // Integrals of products of scaled monomials: edge-midpoint rule on the
  // fan triangles, exact for quadratics.
  Eigen::Matrix3d H = Eigen::Matrix3d::Zero();
  std::vector<geometry::Triangle> tris;
  geometry::fan_triangulate(polygon, false, tris);
  for (const auto& t : tris) {
    const double tri_area = 0.5 * (t.b - t.a).cross(t.c - t.a).norm();
    for (const Point& q : {Point(0.5 * (t.a + t.b)), Point(0.5 * (t.b + t.c)), Point(0.5 * (t.c + t.a))}) {
      const Eigen::Vector3d m(1.0, (q - proj.center).dot(proj.axes[0]) / proj.h, (q - proj.center).dot(proj.axes[1]) / proj.h);
      H += tri_area / 3.0 * m * m.transpose();
    }
  }

  auto blocks = local_blocks(proj, polygon, ops.area, H);
  ops.mass_consistency = std::move(blocks.mass_consistency);
  ops.stiffness_consistency = std::move(blocks.stiffness_consistency);
  ops.mass_stability = ops.h * ops.h * blocks.stability;
  ops.stiffness_stability = blocks.stability;
  ops.mass = ops.mass_consistency + ops.mass_stability;
  ops.stiffness = ops.stiffness_consistency + ops.stiffness_stability;
  return ops;
}

Projector cell_projector(std::span<const std::int32_t> cell_vertices, std::span<const Point> all_vertices,
                         std::span<const CellFaceInput> faces) {
  const std::size_t n = cell_vertices.size();
  std::unordered_map<std::int32_t, Eigen::Index> local;
  std::vector<Point> pts;
  for (std::size_t i = 0; i < n; ++i) {
    local.emplace(cell_vertices[i], static_cast<Eigen::Index>(i));
    pts.push_back(all_vertices[static_cast<std::size_t>(cell_vertices[i])]);
  }

  std::vector<geometry::Triangle> boundary;
  Point closure = Point::Zero();
  double face_area_sum = 0.0;
  for (const auto& f : faces) {
    std::vector<Point> poly;
    for (auto v : f.vertices) poly.push_back(all_vertices[static_cast<std::size_t>(v)]);
    geometry::fan_triangulate(poly, !f.outward, boundary);
    closure += (f.outward ? 1.0 : -1.0) * f.ops->area * f.ops->unit_normal;
    face_area_sum += f.ops->area;
  }
  if (closure.norm() > 1e-10 * face_area_sum) throw VemError("inconsistent face orientations: nonzero closure of normals");
  const auto moments = geometry::polyhedron_moments(boundary);
  if (!(moments.volume > 0.0)) throw VemError("inconsistent face orientations: non-positive volume");

  Projector proj;
  proj.center = moments.centroid;
  proj.axes = {Point::UnitX(), Point::UnitY(), Point::UnitZ()};
  proj.h = geometry::diameter(pts);
  const double h = proj.h;

  const auto cols = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(4, cols);
  Eigen::Matrix4d G = Eigen::Matrix4d::Zero();
  G(0, 0) = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    B(0, static_cast<Eigen::Index>(i)) = 1.0 / static_cast<double>(n);
    for (int a = 0; a < 3; ++a) G(0, a + 1) += (pts[i][a] - proj.center[a]) / h / static_cast<double>(n);
  }
  for (int a = 0; a < 3; ++a) G(a + 1, a + 1) = moments.volume / (h * h);

  // Integral over F of phi_i equals |F| times the value of Pi_F phi_i at the
  // face centroid, which is the constant coefficient of the face projector.
  for (const auto& f : faces) {
    const Point n_out = (f.outward ? 1.0 : -1.0) * f.ops->unit_normal;
    const auto& fc = f.ops->projector.coeffs;
    for (std::size_t j = 0; j < f.vertices.size(); ++j) {
      const auto it = local.find(f.vertices[j]);
      if (it == local.end()) throw VemError("cell face references a vertex outside the cell");
      const double integral = f.ops->area * fc(0, static_cast<Eigen::Index>(j));
      for (int a = 0; a < 3; ++a) B(a + 1, it->second) += n_out[a] * integral / h;
    }
  }
  proj.coeffs = G.partialPivLu().solve(B);
  return proj;
}

LocalCellOperators local_cell_matrices(const mesh::PolyhedralMesh& mesh, std::size_t cell,
                                       std::span<const LocalFaceOperators> face_ops) {
  LocalCellOperators ops;
  ops.vertices = mesh.cell_vertices(cell);

  std::vector<CellFaceInput> faces;
  std::vector<geometry::Triangle> boundary;
  for (const auto& cf : mesh.cells[cell].faces) {
    const auto f = static_cast<std::size_t>(cf.face);
    faces.push_back({mesh.faces[f], &face_ops[f], cf.outward});
    std::vector<Point> poly;
    for (auto v : mesh.faces[f]) poly.push_back(mesh.vertices[static_cast<std::size_t>(v)]);
    geometry::fan_triangulate(poly, !cf.outward, boundary);
  }
  ops.projector = cell_projector(ops.vertices, mesh.vertices, faces);
  const Projector& proj = ops.projector;
  const auto moments = geometry::polyhedron_moments(boundary);
  ops.volume = moments.volume;
  ops.centroid = moments.centroid;
  ops.h = proj.h;

  Eigen::Matrix4d H = Eigen::Matrix4d::Zero();
  H(0, 0) = moments.volume;
  H.bottomRightCorner<3, 3>() = moments.second / (proj.h * proj.h);

  std::vector<Point> pts;
  for (auto v : ops.vertices) pts.push_back(mesh.vertices[static_cast<std::size_t>(v)]);
  auto blocks = local_blocks(proj, pts, ops.volume, H);
  ops.mass_consistency = std::move(blocks.mass_consistency);
  ops.stiffness_consistency = std::move(blocks.stiffness_consistency);
  ops.mass_stability = ops.h * ops.h * ops.h * blocks.stability;
  ops.stiffness_stability = ops.h * blocks.stability;
  ops.mass = ops.mass_consistency + ops.mass_stability;
  ops.stiffness = ops.stiffness_consistency + ops.stiffness_stability;
  return ops;
}

}  // namespace bsdib::vem
