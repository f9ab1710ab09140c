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

#include "bsdib/reference.hpp"

namespace bsdib::reference {

vem::DiscreteOperators assemble_global_serial(const mesh::PolyhedralMesh& mesh) {
  std::vector<vem::LocalFaceOperators> face_ops;
  face_ops.reserve(mesh.faces.size());
  for (const auto& face : mesh.faces) {
    std::vector<vem::Point> pts;
    for (auto v : face) pts.push_back(mesh.vertices[static_cast<std::size_t>(v)]);
    face_ops.push_back(vem::local_face_matrices(pts));
  }
  std::vector<vem::LocalCellOperators> cell_ops;
  cell_ops.reserve(mesh.cells.size());
  for (std::size_t c = 0; c < mesh.cells.size(); ++c) cell_ops.push_back(vem::local_cell_matrices(mesh, c, face_ops));
  return vem::finalize_assembly(mesh, face_ops, cell_ops);
}

}  // namespace bsdib::reference
