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

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <tuple>

#include <Eigen/SparseCholesky>
#include <fmt/format.h>

#include "bsdib/vem.hpp"

namespace bsdib::vem {

using mesh::FaceTag;
using mesh::VertexTag;

Eigen::VectorXd DiscreteOperators::prolong(const Eigen::VectorXd& surface) const {
  Eigen::VectorXd bulk = Eigen::VectorXd::Zero(n_bulk);
  bulk.head(n_surface) = surface;
  return bulk;
}

Eigen::VectorXd DiscreteOperators::restrict_to_surface(const Eigen::VectorXd& bulk) const { return bulk.head(n_surface); }

namespace {

std::vector<Point> face_points(const mesh::PolyhedralMesh& mesh, std::size_t f) {
  std::vector<Point> pts;
  for (auto v : mesh.faces[f]) pts.push_back(mesh.vertices[static_cast<std::size_t>(v)]);
  return pts;
}

// Rethrows the first exception raised inside an OpenMP loop body.
class ParallelErrors {
 public:
  template <typename F>
  void run(F&& body) noexcept {
    try {
      body();
    } catch (...) {
#pragma omp critical(bsdib_parallel_errors)
      if (!first_) first_ = std::current_exception();
    }
  }
  void rethrow() const {
    if (first_) std::rethrow_exception(first_);
  }

 private:
  std::exception_ptr first_;
};

}  // namespace

DiscreteOperators assemble_global(const mesh::PolyhedralMesh& mesh) {
  const auto nf = static_cast<long>(mesh.faces.size());
  const auto nc = static_cast<long>(mesh.cells.size());
  std::vector<LocalFaceOperators> face_ops(static_cast<std::size_t>(nf));
  std::vector<LocalCellOperators> cell_ops(static_cast<std::size_t>(nc));

  ParallelErrors errors;
#pragma omp parallel for schedule(dynamic, 64)
  for (long f = 0; f < nf; ++f) {
    errors.run([&] {
      const auto idx = static_cast<std::size_t>(f);
      face_ops[idx] = local_face_matrices(face_points(mesh, idx));
    });
  }
  errors.rethrow();

#pragma omp parallel for schedule(dynamic, 16)
  for (long c = 0; c < nc; ++c) {
    errors.run([&] { cell_ops[static_cast<std::size_t>(c)] = local_cell_matrices(mesh, static_cast<std::size_t>(c), face_ops); });
  }
  errors.rethrow();

  return finalize_assembly(mesh, face_ops, cell_ops);
}

DiscreteOperators finalize_assembly(const mesh::PolyhedralMesh& mesh, std::span<const LocalFaceOperators> face_ops,
                                    std::span<const LocalCellOperators> cell_ops) {
  using Triplet = Eigen::Triplet<double, int>;
  const auto nv = static_cast<Eigen::Index>(mesh.vertices.size());
  const auto n_gamma = static_cast<Eigen::Index>(mesh.n_gamma);

  DiscreteOperators ops;
  ops.n_surface = n_gamma;

  std::vector<Triplet> triplets;
  ops.lumped_mass_bulk_full = Eigen::VectorXd::Zero(nv);
  for (const auto& cell : cell_ops) {
    const auto n = static_cast<Eigen::Index>(cell.vertices.size());
    for (Eigen::Index i = 0; i < n; ++i) {
      const int gi = cell.vertices[static_cast<std::size_t>(i)];
      double row = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        triplets.emplace_back(gi, cell.vertices[static_cast<std::size_t>(j)], cell.stiffness(i, j));
        row += cell.mass(i, j);
      }
      ops.lumped_mass_bulk_full[gi] += row;
    }
  }
  ops.stiffness_bulk_full.resize(nv, nv);
  ops.stiffness_bulk_full.setFromTriplets(triplets.begin(), triplets.end());

  triplets.clear();
  ops.lumped_mass_surface = Eigen::VectorXd::Zero(n_gamma);
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    if (mesh.face_tags[f] != FaceTag::Gamma) continue;
    const auto& poly = mesh.faces[f];
    const auto& local = face_ops[f];
    const auto n = static_cast<Eigen::Index>(poly.size());
    for (Eigen::Index i = 0; i < n; ++i) {
      const int gi = poly[static_cast<std::size_t>(i)];
      if (gi >= n_gamma) throw VemError("surface face vertex outside the surface-first block");
      double row = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        triplets.emplace_back(gi, poly[static_cast<std::size_t>(j)], local.stiffness(i, j));
        row += local.mass(i, j);
      }
      ops.lumped_mass_surface[gi] += row;
    }
  }
  ops.stiffness_surface.resize(n_gamma, n_gamma);
  ops.stiffness_surface.setFromTriplets(triplets.begin(), triplets.end());

  // Dirichlet elimination of Gamma_T.
  std::vector<int> free_index(static_cast<std::size_t>(nv), -1);
  for (Eigen::Index v = 0; v < nv; ++v) {
    if (mesh.vertex_tags[static_cast<std::size_t>(v)] == VertexTag::OnGammaTop) {
      ops.dirichlet_vertices.push_back(static_cast<std::int32_t>(v));
    } else {
      free_index[static_cast<std::size_t>(v)] = static_cast<int>(ops.free_vertices.size());
      ops.free_vertices.push_back(static_cast<std::int32_t>(v));
    }
  }
  ops.n_bulk = static_cast<std::int64_t>(ops.free_vertices.size());
  for (Eigen::Index v = 0; v < n_gamma; ++v) {
    if (free_index[static_cast<std::size_t>(v)] != v) throw VemError("surface vertices must lead the free numbering");
  }

  triplets.clear();
  for (int col = 0; col < ops.stiffness_bulk_full.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(ops.stiffness_bulk_full, col); it; ++it) {
      const int r = free_index[static_cast<std::size_t>(it.row())];
      const int c = free_index[static_cast<std::size_t>(it.col())];
      if (r >= 0 && c >= 0) triplets.emplace_back(r, c, it.value());
    }
  }
  ops.stiffness_bulk.resize(ops.n_bulk, ops.n_bulk);
  ops.stiffness_bulk.setFromTriplets(triplets.begin(), triplets.end());
  ops.lumped_mass_bulk.resize(ops.n_bulk);
  for (std::int64_t i = 0; i < ops.n_bulk; ++i) {
    ops.lumped_mass_bulk[i] = ops.lumped_mass_bulk_full[ops.free_vertices[static_cast<std::size_t>(i)]];
  }

  for (Eigen::Index i = 0; i < ops.lumped_mass_bulk_full.size(); ++i) {
    if (!(ops.lumped_mass_bulk_full[i] > 0.0)) throw VemError(fmt::format("singular lumped bulk mass at vertex {}", i));
  }
  for (Eigen::Index i = 0; i < ops.lumped_mass_surface.size(); ++i) {
    if (!(ops.lumped_mass_surface[i] > 0.0)) throw VemError(fmt::format("singular lumped surface mass at node {}", i));
  }
  return ops;
}

Eigen::VectorXd solve_dirichlet_problem(const mesh::PolyhedralMesh& mesh, const DiscreteOperators& ops,
                                        const ScalarField& boundary, const ScalarField& load) {
  const double tol = mesh.tolerance();
  const auto nv = mesh.vertices.size();
  std::vector<int> interior(nv, -1);
  int n_interior = 0;
  Eigen::VectorXd u(static_cast<Eigen::Index>(nv));
  for (std::size_t v = 0; v < nv; ++v) {
    const auto& p = mesh.vertices[v];
    bool on_boundary = false;
    for (int a = 0; a < 3; ++a) on_boundary |= std::abs(p[a]) <= tol || std::abs(p[a] - mesh.L) <= tol;
    if (on_boundary) {
      u[static_cast<Eigen::Index>(v)] = boundary(p);
    } else {
      u[static_cast<Eigen::Index>(v)] = 0.0;
      interior[v] = n_interior++;
    }
  }
  if (n_interior == 0) return u;

  using Triplet = Eigen::Triplet<double, int>;
  std::vector<Triplet> triplets;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n_interior);
  for (std::size_t v = 0; v < nv; ++v) {
    if (interior[v] >= 0) rhs[interior[v]] += ops.lumped_mass_bulk_full[static_cast<Eigen::Index>(v)] * load(mesh.vertices[v]);
  }
  const auto& A = ops.stiffness_bulk_full;
  for (int col = 0; col < A.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(A, col); it; ++it) {
      const int r = interior[static_cast<std::size_t>(it.row())];
      if (r < 0) continue;
      const int c = interior[static_cast<std::size_t>(it.col())];
      if (c >= 0) {
        triplets.emplace_back(r, c, it.value());
      } else {
        rhs[r] -= it.value() * u[it.col()];
      }
    }
  }
  SparseMatrix A_ii(n_interior, n_interior);
  A_ii.setFromTriplets(triplets.begin(), triplets.end());
  Eigen::SimplicialLDLT<SparseMatrix> solver(A_ii);
  if (solver.info() != Eigen::Success) throw VemError("interior stiffness factorization failed");
  const Eigen::VectorXd u_i = solver.solve(rhs);
  for (std::size_t v = 0; v < nv; ++v) {
    if (interior[v] >= 0) u[static_cast<Eigen::Index>(v)] = u_i[interior[v]];
  }
  return u;
}

Eigen::VectorXd solve_poisson_patch(const mesh::PolyhedralMesh& mesh, const DiscreteOperators& ops, const ScalarField& p) {
  return solve_dirichlet_problem(mesh, ops, p, [](const Point&) { return 0.0; });
}

void write_coordinate_text(const SparseMatrix& matrix, const std::string& path) {
  std::vector<std::tuple<int, int, double>> entries;
  for (int col = 0; col < matrix.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(matrix, col); it; ++it) entries.emplace_back(it.row(), it.col(), it.value());
  }
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
  });
  std::ofstream out(path);
  if (!out) throw std::ios_base::failure("cannot open " + path + " for writing");
  for (const auto& [r, c, v] : entries) out << fmt::format("{} {} {:.17g}\n", r, c, v);
  if (!out) throw std::ios_base::failure("failed writing " + path);
}

}  // namespace bsdib::vem
