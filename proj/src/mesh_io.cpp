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
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>

#include <fmt/format.h>

#include "bsdib/mesh.hpp"

namespace bsdib::mesh {

namespace {

constexpr std::string_view kMagic = "BSMESH1\n";

template <typename T>
void put(std::vector<std::uint8_t>& out, T value) {
  std::uint8_t bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  out.insert(out.end(), bytes, bytes + sizeof(T));
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  template <typename T>
  T get() {
    need(sizeof(T));
    std::uint8_t raw[sizeof(T)];
    std::memcpy(raw, bytes_.data() + pos_, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(raw, raw + sizeof(T));
    pos_ += sizeof(T);
    T value;
    std::memcpy(&value, raw, sizeof(T));
    return value;
  }

  std::string line() {
    std::string s;
    while (true) {
      need(1);
      const char c = static_cast<char>(bytes_[pos_++]);
      if (c == '\n') return s;
      s.push_back(c);
      if (s.size() > 4096) throw MeshError("malformed header: line too long");
    }
  }

  bool at_end() const { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > bytes_.size()) throw MeshError("unexpected end of stream");
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

std::int32_t count_from_header(long long value, const char* name) {
  if (value < 0 || value > std::numeric_limits<std::int32_t>::max()) {
    throw MeshError(fmt::format("malformed header: {} out of range", name));
  }
  return static_cast<std::int32_t>(value);
}

}  // namespace

std::vector<std::uint8_t> serialize_mesh(const PolyhedralMesh& mesh) {
  std::vector<std::uint8_t> out(kMagic.begin(), kMagic.end());
  const std::string header = fmt::format("nv={} nf={} nc={} n_gamma={} L={:.17g}\n", mesh.vertices.size(),
                                         mesh.faces.size(), mesh.cells.size(), mesh.n_gamma, mesh.L);
  out.insert(out.end(), header.begin(), header.end());

  for (const auto& p : mesh.vertices) {
    put(out, p.x());
    put(out, p.y());
    put(out, p.z());
  }
  for (const auto& f : mesh.faces) {
    put(out, static_cast<std::int32_t>(f.size()));
    for (auto v : f) put(out, v);
  }
  for (const auto& c : mesh.cells) {
    put(out, static_cast<std::int32_t>(c.faces.size()));
    for (const auto& cf : c.faces) put(out, cf.outward ? cf.face + 1 : -(cf.face + 1));
  }
  for (auto t : mesh.face_tags) put(out, static_cast<std::uint8_t>(t));
  for (auto t : mesh.vertex_tags) put(out, static_cast<std::uint8_t>(t));
  return out;
}

PolyhedralMesh deserialize_mesh(std::span<const std::uint8_t> bytes) {
  Reader in(bytes);
  if (in.line() + "\n" != kMagic) throw MeshError("malformed header: bad magic");

  const std::string header = in.line();
  long long nv = -1, nf = -1, nc = -1, ng = -1;
  double L = 0.0;
  {
    std::istringstream ss(header);
    std::string token;
    int seen = 0;
    while (ss >> token) {
      const auto eq = token.find('=');
      if (eq == std::string::npos) throw MeshError("malformed header: " + header);
      const std::string key = token.substr(0, eq);
      const std::string value = token.substr(eq + 1);
      try {
        if (key == "nv") nv = std::stoll(value);
        else if (key == "nf") nf = std::stoll(value);
        else if (key == "nc") nc = std::stoll(value);
        else if (key == "n_gamma") ng = std::stoll(value);
        else if (key == "L") L = std::stod(value);
        else throw MeshError("malformed header: unknown field " + key);
      } catch (const std::logic_error&) {
        throw MeshError("malformed header: bad value for " + key);
      }
      ++seen;
    }
    if (seen != 5) throw MeshError("malformed header: " + header);
  }

  PolyhedralMesh mesh;
  mesh.L = L;
  const auto n_vertices = count_from_header(nv, "nv");
  const auto n_faces = count_from_header(nf, "nf");
  const auto n_cells = count_from_header(nc, "nc");
  mesh.n_gamma = count_from_header(ng, "n_gamma");
  if (mesh.n_gamma > n_vertices) throw MeshError("malformed header: n_gamma exceeds nv");

  // Each record needs at least a few bytes; reject absurd counts before allocating.
  if (static_cast<std::size_t>(n_vertices) * 24 > bytes.size() || static_cast<std::size_t>(n_faces) * 4 > bytes.size() ||
      static_cast<std::size_t>(n_cells) * 4 > bytes.size()) {
    throw MeshError("unexpected end of stream");
  }

  mesh.vertices.reserve(static_cast<std::size_t>(n_vertices));
  for (std::int32_t v = 0; v < n_vertices; ++v) {
    const double x = in.get<double>();
    const double y = in.get<double>();
    const double z = in.get<double>();
    mesh.vertices.emplace_back(x, y, z);
  }
  mesh.faces.resize(static_cast<std::size_t>(n_faces));
  for (auto& f : mesh.faces) {
    const auto len = in.get<std::int32_t>();
    if (len < 3) throw MeshError("face with fewer than 3 vertices");
    f.resize(static_cast<std::size_t>(len));
    for (auto& v : f) {
      v = in.get<std::int32_t>();
      if (v < 0 || v >= n_vertices) throw MeshError(fmt::format("index out of range: vertex {}", v));
    }
  }
  mesh.cells.resize(static_cast<std::size_t>(n_cells));
  for (auto& c : mesh.cells) {
    const auto len = in.get<std::int32_t>();
    if (len < 4) throw MeshError("cell with fewer than 4 faces");
    c.faces.resize(static_cast<std::size_t>(len));
    for (auto& cf : c.faces) {
      const auto signed_index = in.get<std::int32_t>();
      const auto index = signed_index > 0 ? signed_index - 1 : -signed_index - 1;
      if (signed_index == 0 || index >= n_faces) throw MeshError(fmt::format("index out of range: face {}", signed_index));
      cf = {index, signed_index > 0};
    }
  }
  mesh.face_tags.resize(static_cast<std::size_t>(n_faces));
  for (auto& t : mesh.face_tags) {
    const auto raw = in.get<std::uint8_t>();
    if (raw > 3) throw MeshError("invalid face tag");
    t = static_cast<FaceTag>(raw);
  }
  mesh.vertex_tags.resize(static_cast<std::size_t>(n_vertices));
  for (auto& t : mesh.vertex_tags) {
    const auto raw = in.get<std::uint8_t>();
    if (raw > 2) throw MeshError("invalid vertex tag");
    t = static_cast<VertexTag>(raw);
  }
  if (!in.at_end()) throw MeshError("trailing bytes after mesh payload");
  return mesh;
}

void write_mesh_file(const PolyhedralMesh& mesh, const std::string& path) {
  const auto bytes = serialize_mesh(mesh);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::ios_base::failure("failed writing " + path);
}

PolyhedralMesh read_mesh_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize_mesh(bytes);
}

}  // namespace bsdib::mesh
