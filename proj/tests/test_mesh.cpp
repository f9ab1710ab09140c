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
#include <map>
#include <set>
#include <cstring>
#include <array>

#include "doctest.h"

#include "bsdib/geometry.hpp"
#include "bsdib/mesh.hpp"
#include "test_support.hpp"

using namespace bsdib::mesh;

namespace {

std::map<double, int> vertices_per_plane(const PolyhedralMesh& m) {
  std::map<double, int> planes;
  for (const auto& v : m.vertices) planes[v.z()] += 1;
  return planes;
}

std::size_t count_tag(const PolyhedralMesh& m, VertexTag tag) {
  return static_cast<std::size_t>(std::count(m.vertex_tags.begin(), m.vertex_tags.end(), tag));
}

}  // namespace

TEST_CASE("single cube from the graded builder") {
  const auto m = build_graded_mesh({1.0, 1, 1, 0});
  CHECK(m.num_vertices() == 8);
  CHECK(m.num_faces() == 6);
  CHECK(m.num_cells() == 1);
  CHECK(m.n_gamma == 4);
  CHECK(count_tag(m, VertexTag::OnGamma) == 4);
  CHECK(count_tag(m, VertexTag::OnGammaTop) == 4);
  CHECK_NOTHROW(validate_mesh(m));
}

TEST_CASE("graded L=1 nx=4 with one fine layer and two levels") {
  const auto m = build_graded_mesh({1.0, 4, 1, 2});
  CHECK_NOTHROW(validate_mesh(m));
  const auto planes = vertices_per_plane(m);
  REQUIRE(planes.size() == 4);
  std::vector<int> counts;
  for (const auto& [z, n] : planes) counts.push_back(n);
  CHECK(counts == std::vector<int>{25, 25, 9, 4});
  CHECK(m.num_cells() == 16 + 4 + 1);
  const auto oracle = bsdib::test::count_graded(4, 1, 2);
  CHECK(static_cast<std::int64_t>(m.num_vertices()) == oracle.vertices);
  CHECK(static_cast<std::int64_t>(m.num_faces()) == oracle.faces);
  CHECK(planes.rbegin()->first == 1.0);
}

TEST_CASE("full-size graded mesh counts") {
  const auto m = build_graded_mesh({50.0, 128, 2, 5});
  const auto oracle = bsdib::test::count_graded(128, 2, 5);
  CHECK(m.n_gamma == 129 * 129);
  CHECK(static_cast<std::int64_t>(m.num_vertices()) == oracle.vertices);
  CHECK(static_cast<std::int64_t>(m.num_faces()) == oracle.faces);
  CHECK(static_cast<std::int64_t>(m.num_cells()) == oracle.cells);
  CHECK(m.num_vertices() == 55632);
  CHECK(m.num_vertices() >= 50000);
  CHECK(m.num_vertices() <= 60000);

  const auto surface = extract_surface_mesh(m);
  CHECK(surface.num_faces() == 128 * 128);
  CHECK(surface.num_nodes() == 129 * 129);

  const auto q = mesh_quality_report(m);
  CHECK(static_cast<std::int64_t>(q.hanging_nodes) == oracle.hanging);
  CHECK(q.hanging_nodes == 16616);
}

TEST_CASE("graded builder rejects invalid specs") {
  CHECK_THROWS_AS(build_graded_mesh({1.0, 6, 1, 2}), MeshError);   // 6 not divisible by 4
  CHECK_THROWS_AS(build_graded_mesh({1.0, 4, 0, 1}), MeshError);   // no fine layer
  CHECK_THROWS_AS(build_graded_mesh({1.0, 4, 1, -1}), MeshError);
  CHECK_THROWS_AS(build_graded_mesh({-1.0, 4, 1, 1}), MeshError);
  // four fine layers of 0.25 plus a level on top: the layers below the top already fill L
  CHECK_THROWS_AS(build_graded_mesh({1.0, 4, 4, 1}), MeshError);
  CHECK_THROWS_AS(build_graded_mesh({1.0, 4, 5, 0}), MeshError);
}

TEST_CASE("uniform mesh counts") {
  const auto m = build_uniform_mesh(50.0, 2);
  CHECK(m.num_cells() == 8);
  CHECK(m.num_vertices() == 27);
  CHECK(count_tag(m, VertexTag::OnGamma) == 9);
  CHECK(m.n_gamma == 9);
  CHECK_NOTHROW(validate_mesh(m));
  CHECK_THROWS_AS(build_uniform_mesh(1.0, 0), MeshError);

  const auto unit = build_uniform_mesh(1.0, 1);
  CHECK(unit == build_graded_mesh({1.0, 1, 1, 0}));

  for (int nx : {3, 7}) {
    const auto u = build_uniform_mesh(2.0, nx);
    CHECK(u.num_vertices() == static_cast<std::size_t>((nx + 1) * (nx + 1) * (nx + 1)));
    CHECK(u.num_cells() == static_cast<std::size_t>(nx * nx * nx));
  }
}

TEST_CASE("uniform nx=128 has 129^3 vertices" * doctest::timeout(300)) {
  const auto m = build_uniform_mesh(50.0, 128);
  CHECK(m.num_vertices() == 2146689);
  CHECK(m.n_gamma == 129 * 129);
}

TEST_CASE("graded without coarse levels matches the uniform mesh up to ordering") {
  const auto g = build_graded_mesh({1.0, 4, 4, 0});
  const auto u = build_uniform_mesh(1.0, 4);
  REQUIRE(g.num_vertices() == u.num_vertices());
  REQUIRE(g.num_cells() == u.num_cells());
  REQUIRE(g.num_faces() == u.num_faces());
  auto key = [](const Point& p) { return std::array<long, 3>{std::lround(p.x() * 1e9), std::lround(p.y() * 1e9), std::lround(p.z() * 1e9)}; };
  auto cell_keys = [&](const PolyhedralMesh& m) {
    std::multiset<std::set<std::array<long, 3>>> out;
    for (std::size_t c = 0; c < m.num_cells(); ++c) {
      std::set<std::array<long, 3>> s;
      for (auto v : m.cell_vertices(c)) s.insert(key(m.vertices[static_cast<std::size_t>(v)]));
      out.insert(s);
    }
    return out;
  };
  CHECK(cell_keys(g) == cell_keys(u));
}

TEST_CASE("surface extraction") {
  const auto unit = extract_surface_mesh(build_uniform_mesh(1.0, 1));
  CHECK(unit.num_faces() == 1);
  CHECK(unit.num_nodes() == 4);

  const auto m = build_graded_mesh({1.0, 4, 1, 2});
  const auto s = extract_surface_mesh(m);
  CHECK(s.num_faces() == 16);
  double area = 0.0;
  for (const auto& f : s.faces) {
    std::vector<Point> poly;
    for (auto v : f) {
      REQUIRE(v < m.n_gamma);
      poly.push_back(s.nodes[static_cast<std::size_t>(v)]);
      CHECK(poly.back().z() == 0.0);
    }
    area += bsdib::geometry::polygon_area(poly);
  }
  CHECK(area == doctest::Approx(1.0).epsilon(1e-12));
  for (double h : s.diameters) CHECK(h == doctest::Approx(std::sqrt(2.0) / 4.0));

  auto broken = m;
  broken.vertices[0].z() = 0.01;
  CHECK_THROWS_AS(extract_surface_mesh(broken), MeshError);
}

TEST_CASE("quality report") {
  const auto u = mesh_quality_report(build_uniform_mesh(1.0, 2));
  REQUIRE(u.cell_volumes.size() == 8);
  for (double v : u.cell_volumes) CHECK(v == doctest::Approx(0.125).epsilon(1e-14));
  CHECK(u.hanging_nodes == 0);
  CHECK(u.min_aspect_ratio == doctest::Approx(1.0));

  const auto g = mesh_quality_report(build_graded_mesh({1.0, 4, 1, 2}));
  CHECK(std::abs(g.total_volume - 1.0) <= 1e-12);
  CHECK(std::abs(g.gamma_area - 1.0) <= 1e-12);
  CHECK(std::abs(g.gamma_top_area - 1.0) <= 1e-12);
  CHECK(static_cast<std::int64_t>(g.hanging_nodes) == bsdib::test::count_graded(4, 1, 2).hanging);
}

TEST_CASE("structural invariants of graded meshes") {
  for (const auto& spec : {GradedMeshSpec{1.0, 4, 1, 2}, GradedMeshSpec{50.0, 16, 2, 3}, GradedMeshSpec{3.0, 8, 3, 1}}) {
    const auto m = build_graded_mesh(spec);
    CAPTURE(spec.nx);
    CHECK_NOTHROW(validate_mesh(m));

    // Ennahedra sit exactly on the coarsening interfaces.
    const double h = spec.L / spec.nx;
    const double interface_z = spec.fine_layers * h;
    std::size_t ennahedra = 0;
    for (std::size_t c = 0; c < m.num_cells(); ++c) {
      const auto nv = m.cell_vertices(c).size();
      const auto nf = m.cells[c].faces.size();
      double zmin = 1e300;
      for (auto v : m.cell_vertices(c)) zmin = std::min(zmin, m.vertices[static_cast<std::size_t>(v)].z());
      const bool coarse = zmin >= interface_z - 1e-12 * spec.L;
      if (coarse) {
        CHECK(nv == 13);
        CHECK(nf == 9);
        ++ennahedra;
      } else {
        CHECK(nv == 8);
        CHECK(nf == 6);
      }
    }
    const auto oracle = bsdib::test::count_graded(spec.nx, spec.fine_layers, spec.coarse_levels);
    CHECK(static_cast<std::int64_t>(ennahedra) == oracle.cells - spec.fine_layers * spec.nx * spec.nx);

    // Surface-first numbering.
    std::int32_t max_gamma = -1, min_other = static_cast<std::int32_t>(m.num_vertices());
    for (std::size_t v = 0; v < m.num_vertices(); ++v) {
      if (m.vertex_tags[v] == VertexTag::OnGamma) {
        max_gamma = std::max(max_gamma, static_cast<std::int32_t>(v));
      } else {
        min_other = std::min(min_other, static_cast<std::int32_t>(v));
      }
    }
    CHECK(max_gamma < min_other);
    CHECK(max_gamma + 1 == m.n_gamma);

    // Watertightness: owners per face.
    std::vector<int> owners(m.num_faces(), 0);
    for (const auto& cell : m.cells) {
      for (const auto& cf : cell.faces) owners[static_cast<std::size_t>(cf.face)] += 1;
    }
    for (std::size_t f = 0; f < m.num_faces(); ++f) {
      CHECK(owners[f] == (m.face_tags[f] == FaceTag::Interior ? 2 : 1));
    }
  }
}

TEST_CASE("validation catches broken meshes") {
  const auto good = build_graded_mesh({1.0, 4, 1, 2});

  auto flipped = good;
  flipped.cells[3].faces[0].outward = !flipped.cells[3].faces[0].outward;
  CHECK_THROWS_AS(validate_mesh(flipped), MeshError);

  auto missing = good;
  missing.cells.pop_back();
  CHECK_THROWS_AS(validate_mesh(missing), MeshError);

  auto bad_index = good;
  bad_index.faces[0][0] = 100000;
  CHECK_THROWS_AS(validate_mesh(bad_index), MeshError);

  auto warped = good;
  warped.vertices[static_cast<std::size_t>(good.n_gamma) + 6].z() += 0.01;
  CHECK_THROWS_AS(validate_mesh(warped), MeshError);
}

TEST_CASE("mesh serialization round trip") {
  for (const auto& m : {build_uniform_mesh(1.0, 1), build_graded_mesh({50.0, 8, 2, 2})}) {
    const auto bytes = serialize_mesh(m);
    const std::string head(bytes.begin(), bytes.begin() + 8);
    CHECK(head == "BSMESH1\n");
    CHECK(deserialize_mesh(bytes) == m);
  }

  bsdib::test::TempDir tmp("mesh");
  const auto m = build_graded_mesh({1.0, 4, 1, 2});
  write_mesh_file(m, tmp.file("m.bin"));
  CHECK(read_mesh_file(tmp.file("m.bin")) == m);
  CHECK_THROWS(read_mesh_file(tmp.file("absent.bin")));
}

TEST_CASE("mesh deserialization errors") {
  const auto bytes = serialize_mesh(build_graded_mesh({1.0, 4, 1, 2}));

  std::vector<std::uint8_t> truncated(bytes.begin(), bytes.end() - 7);
  try {
    deserialize_mesh(truncated);
    FAIL("truncated stream accepted");
  } catch (const MeshError& e) {
    CHECK(std::string(e.what()) == "unexpected end of stream");
  }

  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  CHECK_THROWS_AS(deserialize_mesh(bad_magic), MeshError);

  // Header field garbled.
  std::string text(bytes.begin(), bytes.end());
  auto bad_header = text;
  bad_header.replace(bad_header.find("nv="), 3, "nq=");
  CHECK_THROWS_AS(deserialize_mesh(std::vector<std::uint8_t>(bad_header.begin(), bad_header.end())), MeshError);

  // First face index points past the vertex array.
  const auto m = build_graded_mesh({1.0, 4, 1, 2});
  auto corrupt = bytes;
  const std::size_t header_end = text.find('\n', 8) + 1;
  const std::size_t first_face = header_end + m.num_vertices() * 24 + 4;
  const std::int32_t huge = 1 << 30;
  std::memcpy(corrupt.data() + first_face, &huge, 4);
  CHECK_THROWS_AS(deserialize_mesh(corrupt), MeshError);

  auto trailing = bytes;
  trailing.push_back(0);
  CHECK_THROWS_AS(deserialize_mesh(trailing), MeshError);
}
