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

#include "bsdib/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <fmt/format.h>

#include "bsdib/geometry.hpp"

namespace bsdib::mesh {

std::vector<std::int32_t> PolyhedralMesh::cell_vertices(std::size_t cell) const {
  std::vector<std::int32_t> out;
  for (const auto& cf : cells[cell].faces) {
    const auto& f = faces[static_cast<std::size_t>(cf.face)];
    out.insert(out.end(), f.begin(), f.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool PolyhedralMesh::operator==(const PolyhedralMesh& other) const {
  return L == other.L && vertices == other.vertices && faces == other.faces && cells == other.cells &&
         face_tags == other.face_tags && vertex_tags == other.vertex_tags && n_gamma == other.n_gamma;
}

void GradedMeshSpec::validate() const {
  if (!(L > 0.0) || !std::isfinite(L)) throw MeshError("graded mesh: L must be positive and finite");
  if (nx < 1) throw MeshError("graded mesh: nx must be >= 1");
  if (fine_layers < 1) throw MeshError("graded mesh: fine_layers must be >= 1");
  if (coarse_levels < 0 || coarse_levels > 30) throw MeshError("graded mesh: coarse_levels out of range");
  if (nx % (1 << coarse_levels) != 0) {
    throw MeshError(fmt::format("graded mesh: nx={} is not divisible by 2^coarse_levels={}", nx, 1 << coarse_levels));
  }
}

namespace {

// One horizontal layer of cells. Grid steps are in units of the fine edge.
struct Layer {
  int step = 1;         // horizontal cell edge
  int bottom_step = 1;  // grid spacing of the plane below (step or step/2)
};

class LayeredBuilder {
 public:
  LayeredBuilder(double L, int nx, std::vector<Layer> layers, std::vector<double> plane_z)
      : L_(L), nx_(nx), layers_(std::move(layers)), plane_z_(std::move(plane_z)) {}

  PolyhedralMesh build() {
    mesh_.L = L_;
    number_vertices();
    for (std::size_t l = 0; l < layers_.size(); ++l) build_layer(l);
    tag();
    return std::move(mesh_);
  }

 private:
  int plane_step(std::size_t p) const { return p == 0 ? layers_.front().bottom_step : layers_[p - 1].step; }

  // Planes are numbered bottom-up, each row-major in (j, i); plane 0 is Gamma.
  void number_vertices() {
    const double h = L_ / nx_;
    offsets_.assign(plane_z_.size(), 0);
    std::int32_t next = 0;
    for (std::size_t p = 0; p < plane_z_.size(); ++p) {
      offsets_[p] = next;
      const int s = plane_step(p);
      const int n = nx_ / s;
      for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) {
          // Snap the far boundary exactly to L.
          const double x = (i == n) ? L_ : i * s * h;
          const double y = (j == n) ? L_ : j * s * h;
          mesh_.vertices.emplace_back(x, y, plane_z_[p]);
          ++next;
        }
      }
    }
    mesh_.n_gamma = offsets_.size() > 1 ? offsets_[1] : next;
  }

  std::int32_t vid(std::size_t plane, int i, int j) const {
    const int s = plane_step(plane);
    const int n = nx_ / s;
    return offsets_[plane] + static_cast<std::int32_t>((j / s) * (n + 1) + i / s);
  }

  static bool same_orientation(const std::vector<std::int32_t>& a, const std::vector<std::int32_t>& b) {
    const auto n = a.size();
    const auto start = static_cast<std::size_t>(std::find(a.begin(), a.end(), b[0]) - a.begin());
    return a[(start + 1) % n] == b[1 % n];
  }

  void add_face(Cell& cell, std::vector<std::int32_t> polygon) {
    auto key = polygon;
    std::sort(key.begin(), key.end());
    auto it = face_index_.find(key);
    if (it == face_index_.end()) {
      const auto index = static_cast<std::int32_t>(mesh_.faces.size());
      face_index_.emplace(std::move(key), index);
      mesh_.faces.push_back(std::move(polygon));
      cell.faces.push_back({index, true});
    } else {
      const auto& stored = mesh_.faces[static_cast<std::size_t>(it->second)];
      cell.faces.push_back({it->second, same_orientation(stored, polygon)});
    }
  }

  void build_layer(std::size_t l) {
    const Layer& layer = layers_[l];
    const int s = layer.step;
    const int n = nx_ / s;
    const std::size_t bot = l;
    const std::size_t top = l + 1;
    const bool split = layer.bottom_step != s;

    for (int cj = 0; cj < n; ++cj) {
      for (int ci = 0; ci < n; ++ci) {
        const int x0 = ci * s, x1 = x0 + s, xm = x0 + s / 2;
        const int y0 = cj * s, y1 = y0 + s, ym = y0 + s / 2;
        auto B = [&](int i, int j) { return vid(bot, i, j); };
        auto T = [&](int i, int j) { return vid(top, i, j); };

        Cell cell;
        // Every polygon below is listed counter-clockwise seen from outside.
        add_face(cell, {T(x0, y0), T(x1, y0), T(x1, y1), T(x0, y1)});
        if (split) {
          add_face(cell, {B(x0, y0), B(x0, ym), B(xm, ym), B(xm, y0)});
          add_face(cell, {B(xm, y0), B(xm, ym), B(x1, ym), B(x1, y0)});
          add_face(cell, {B(x0, ym), B(x0, y1), B(xm, y1), B(xm, ym)});
          add_face(cell, {B(xm, ym), B(xm, y1), B(x1, y1), B(x1, ym)});
          add_face(cell, {B(x0, y0), B(xm, y0), B(x1, y0), T(x1, y0), T(x0, y0)});
          add_face(cell, {B(x1, y0), B(x1, ym), B(x1, y1), T(x1, y1), T(x1, y0)});
          add_face(cell, {B(x1, y1), B(xm, y1), B(x0, y1), T(x0, y1), T(x1, y1)});
          add_face(cell, {B(x0, y1), B(x0, ym), B(x0, y0), T(x0, y0), T(x0, y1)});
        } else {
          add_face(cell, {B(x0, y0), B(x0, y1), B(x1, y1), B(x1, y0)});
          add_face(cell, {B(x0, y0), B(x1, y0), T(x1, y0), T(x0, y0)});
          add_face(cell, {B(x1, y0), B(x1, y1), T(x1, y1), T(x1, y0)});
          add_face(cell, {B(x1, y1), B(x0, y1), T(x0, y1), T(x1, y1)});
          add_face(cell, {B(x0, y1), B(x0, y0), T(x0, y0), T(x0, y1)});
        }
        mesh_.cells.push_back(std::move(cell));
      }
    }
  }

  void tag() {
    const double tol = mesh_.tolerance();
    auto on = [tol](double v, double target) { return std::abs(v - target) <= tol; };

    mesh_.vertex_tags.resize(mesh_.vertices.size());
    for (std::size_t v = 0; v < mesh_.vertices.size(); ++v) {
      const double z = mesh_.vertices[v].z();
      mesh_.vertex_tags[v] = on(z, 0.0) ? VertexTag::OnGamma : on(z, L_) ? VertexTag::OnGammaTop : VertexTag::Other;
    }

    mesh_.face_tags.resize(mesh_.faces.size());
    for (std::size_t f = 0; f < mesh_.faces.size(); ++f) {
      const auto& poly = mesh_.faces[f];
      auto all = [&](int axis, double target) {
        return std::all_of(poly.begin(), poly.end(), [&](std::int32_t v) {
          return on(mesh_.vertices[static_cast<std::size_t>(v)][axis], target);
        });
      };
      FaceTag t = FaceTag::Interior;
      if (all(2, 0.0)) {
        t = FaceTag::Gamma;
      } else if (all(2, L_)) {
        t = FaceTag::GammaTop;
      } else if (all(0, 0.0) || all(0, L_) || all(1, 0.0) || all(1, L_)) {
        t = FaceTag::GammaLateral;
      }
      mesh_.face_tags[f] = t;
    }
  }

  double L_;
  int nx_;
  std::vector<Layer> layers_;
  std::vector<double> plane_z_;
  std::vector<std::int32_t> offsets_;
  std::map<std::vector<std::int32_t>, std::int32_t> face_index_;
  PolyhedralMesh mesh_;
};

}  // namespace

PolyhedralMesh build_graded_mesh(const GradedMeshSpec& spec) {
  spec.validate();
  const double h = spec.L / spec.nx;

  std::vector<Layer> layers;
  for (int l = 0; l < spec.fine_layers; ++l) layers.push_back({1, 1});
  for (int k = 1; k <= spec.coarse_levels; ++k) layers.push_back({1 << k, 1 << (k - 1)});

  // Nominal height of each layer equals its horizontal edge; the topmost one
  // is resized to close the stack at z = L.
  std::vector<double> plane_z{0.0};
  long below_top = 0;
  for (std::size_t l = 0; l + 1 < layers.size(); ++l) {
    below_top += layers[l].step;
    plane_z.push_back(static_cast<double>(below_top) * h);
  }
  if (static_cast<double>(below_top) * h >= spec.L * (1.0 - 1e-12)) {
    throw MeshError(fmt::format("graded mesh: layers below the top already reach height {} >= L={}",
                                static_cast<double>(below_top) * h, spec.L));
  }
  plane_z.push_back(spec.L);

  return LayeredBuilder(spec.L, spec.nx, std::move(layers), std::move(plane_z)).build();
}

PolyhedralMesh build_uniform_mesh(double L, int nx) {
  if (nx < 1) throw MeshError("uniform mesh: nx must be >= 1");
  if (!(L > 0.0) || !std::isfinite(L)) throw MeshError("uniform mesh: L must be positive and finite");
  const double h = L / nx;
  std::vector<Layer> layers(static_cast<std::size_t>(nx), Layer{1, 1});
  std::vector<double> plane_z;
  for (int p = 0; p < nx; ++p) plane_z.push_back(p * h);
  plane_z.push_back(L);
  return LayeredBuilder(L, nx, std::move(layers), std::move(plane_z)).build();
}

SurfaceMesh extract_surface_mesh(const PolyhedralMesh& mesh) {
  SurfaceMesh surface;
  const auto n_gamma = static_cast<std::size_t>(mesh.n_gamma);
  surface.nodes.assign(mesh.vertices.begin(), mesh.vertices.begin() + static_cast<std::ptrdiff_t>(n_gamma));
  const double tol = mesh.tolerance();
  std::vector<geometry::Point> poly;
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    if (mesh.face_tags[f] != FaceTag::Gamma) continue;
    poly.clear();
    for (auto v : mesh.faces[f]) {
      const auto& p = mesh.vertices[static_cast<std::size_t>(v)];
      if (std::abs(p.z()) > tol) {
        throw MeshError(fmt::format("surface face {} has vertex {} off the plane z=0 (z={})", f, v, p.z()));
      }
      if (static_cast<std::size_t>(v) >= n_gamma) {
        throw MeshError(fmt::format("surface face {} references vertex {} outside the surface block", f, v));
      }
      poly.push_back(p);
    }
    surface.faces.push_back(mesh.faces[f]);
    surface.diameters.push_back(geometry::diameter(poly));
  }
  return surface;
}

namespace {

std::vector<geometry::Point> face_points(const PolyhedralMesh& mesh, std::size_t f) {
  std::vector<geometry::Point> pts;
  pts.reserve(mesh.faces[f].size());
  for (auto v : mesh.faces[f]) pts.push_back(mesh.vertices[static_cast<std::size_t>(v)]);
  return pts;
}

std::vector<geometry::Triangle> cell_boundary(const PolyhedralMesh& mesh, std::size_t c) {
  std::vector<geometry::Triangle> tris;
  for (const auto& cf : mesh.cells[c].faces) {
    const auto pts = face_points(mesh, static_cast<std::size_t>(cf.face));
    geometry::fan_triangulate(pts, !cf.outward, tris);
  }
  return tris;
}

}  // namespace

void validate_mesh(const PolyhedralMesh& mesh) {
  const auto nv = mesh.vertices.size();
  const auto nf = mesh.faces.size();
  if (mesh.face_tags.size() != nf) throw MeshError("face tag count mismatch");
  if (mesh.vertex_tags.size() != nv) throw MeshError("vertex tag count mismatch");
  if (mesh.n_gamma < 0 || static_cast<std::size_t>(mesh.n_gamma) > nv) throw MeshError("n_gamma out of range");

  const double tol = mesh.tolerance();
  for (std::size_t f = 0; f < nf; ++f) {
    const auto& poly = mesh.faces[f];
    if (poly.size() < 3) throw MeshError(fmt::format("face {} has fewer than 3 vertices", f));
    for (auto v : poly) {
      if (v < 0 || static_cast<std::size_t>(v) >= nv) throw MeshError(fmt::format("face {} vertex index out of range", f));
    }
    std::set<std::int32_t> unique(poly.begin(), poly.end());
    if (unique.size() != poly.size()) throw MeshError(fmt::format("face {} repeats a vertex", f));
    const auto pts = face_points(mesh, f);
    if (geometry::planarity_defect(pts) > tol) throw MeshError(fmt::format("face {} is not planar", f));
    if (geometry::polygon_area(pts) <= tol * tol) throw MeshError(fmt::format("face {} is degenerate", f));
  }

  std::vector<int> owners(nf, 0);
  for (std::size_t c = 0; c < mesh.cells.size(); ++c) {
    for (const auto& cf : mesh.cells[c].faces) {
      if (cf.face < 0 || static_cast<std::size_t>(cf.face) >= nf) {
        throw MeshError(fmt::format("cell {} face index out of range", c));
      }
      ++owners[static_cast<std::size_t>(cf.face)];
    }
    // Closed and consistently oriented: each edge used once in each direction.
    std::map<std::pair<std::int32_t, std::int32_t>, int> edges;
    for (const auto& cf : mesh.cells[c].faces) {
      auto poly = mesh.faces[static_cast<std::size_t>(cf.face)];
      if (!cf.outward) std::reverse(poly.begin(), poly.end());
      for (std::size_t i = 0; i < poly.size(); ++i) ++edges[{poly[i], poly[(i + 1) % poly.size()]}];
    }
    for (const auto& [e, count] : edges) {
      if (count != 1 || !edges.contains({e.second, e.first})) {
        throw MeshError(fmt::format("cell {} is not watertight at edge ({}, {})", c, e.first, e.second));
      }
    }
    if (geometry::polyhedron_moments(cell_boundary(mesh, c)).volume <= 0.0) {
      throw MeshError(fmt::format("cell {} has non-positive volume (orientation flags wrong)", c));
    }
  }
  for (std::size_t f = 0; f < nf; ++f) {
    const int expected = mesh.face_tags[f] == FaceTag::Interior ? 2 : 1;
    if (owners[f] != expected) {
      throw MeshError(fmt::format("face {} is shared by {} cells, expected {}", f, owners[f], expected));
    }
  }

  for (std::size_t v = 0; v < nv; ++v) {
    const bool first_block = v < static_cast<std::size_t>(mesh.n_gamma);
    if (first_block != (mesh.vertex_tags[v] == VertexTag::OnGamma)) {
      throw MeshError(fmt::format("vertex {} breaks surface-first numbering", v));
    }
  }

  const auto report = mesh_quality_report(mesh);
  const double L3 = mesh.L * mesh.L * mesh.L;
  const double L2 = mesh.L * mesh.L;
  if (std::abs(report.total_volume - L3) > 1e-12 * L3) throw MeshError("cell volumes do not sum to L^3");
  if (std::abs(report.gamma_area - L2) > 1e-12 * L2) throw MeshError("Gamma faces do not sum to L^2");
  if (std::abs(report.gamma_top_area - L2) > 1e-12 * L2) throw MeshError("top faces do not sum to L^2");
}

QualityReport mesh_quality_report(const PolyhedralMesh& mesh) {
  QualityReport r;
  const auto nf = mesh.faces.size();
  r.face_areas.resize(nf);
  r.face_diameters.resize(nf);
  std::vector<geometry::Point> unit_normals(nf);
  for (std::size_t f = 0; f < nf; ++f) {
    const auto pts = face_points(mesh, f);
    const auto n = geometry::newell_normal(pts);
    r.face_areas[f] = 0.5 * n.norm();
    r.face_diameters[f] = geometry::diameter(pts);
    unit_normals[f] = n.normalized();
    if (mesh.face_tags[f] == FaceTag::Gamma) r.gamma_area += r.face_areas[f];
    if (mesh.face_tags[f] == FaceTag::GammaTop) r.gamma_top_area += r.face_areas[f];
  }

  std::vector<char> hanging(mesh.vertices.size(), 0);
  r.min_aspect_ratio = std::numeric_limits<double>::infinity();
  r.max_aspect_ratio = 0.0;
  for (std::size_t c = 0; c < mesh.cells.size(); ++c) {
    const double volume = geometry::polyhedron_moments(cell_boundary(mesh, c)).volume;
    r.cell_volumes.push_back(volume);
    r.total_volume += volume;

    std::vector<geometry::Point> pts;
    for (auto v : mesh.cell_vertices(c)) pts.push_back(mesh.vertices[static_cast<std::size_t>(v)]);
    r.cell_diameters.push_back(geometry::diameter(pts));

    double shortest = std::numeric_limits<double>::infinity();
    double longest = 0.0;
    std::map<std::int32_t, std::vector<geometry::Point>> normals_at;
    for (const auto& cf : mesh.cells[c].faces) {
      const auto& poly = mesh.faces[static_cast<std::size_t>(cf.face)];
      for (std::size_t i = 0; i < poly.size(); ++i) {
        const auto& p = mesh.vertices[static_cast<std::size_t>(poly[i])];
        const auto& q = mesh.vertices[static_cast<std::size_t>(poly[(i + 1) % poly.size()])];
        const double len = (p - q).norm();
        shortest = std::min(shortest, len);
        longest = std::max(longest, len);
        normals_at[poly[i]].push_back(unit_normals[static_cast<std::size_t>(cf.face)]);
      }
    }
    const double aspect = longest / shortest;
    r.min_aspect_ratio = std::min(r.min_aspect_ratio, aspect);
    r.max_aspect_ratio = std::max(r.max_aspect_ratio, aspect);

    // A vertex is a geometric corner of a convex cell when its faces span at
    // least three directions; otherwise it sits on an edge or face interior.
    for (const auto& [v, normals] : normals_at) {
      std::vector<geometry::Point> distinct;
      for (const auto& n : normals) {
        const bool seen = std::any_of(distinct.begin(), distinct.end(),
                                      [&](const geometry::Point& d) { return std::abs(std::abs(d.dot(n)) - 1.0) < 1e-9; });
        if (!seen) distinct.push_back(n);
      }
      if (distinct.size() < 3) hanging[static_cast<std::size_t>(v)] = 1;
    }
  }
  r.hanging_nodes = static_cast<std::size_t>(std::count(hanging.begin(), hanging.end(), 1));
  if (mesh.cells.empty()) r.min_aspect_ratio = 0.0;
  return r;
}

}  // namespace bsdib::mesh
