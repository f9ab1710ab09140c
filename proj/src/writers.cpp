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
#include <charconv>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "bsdib/io.hpp"

namespace bsdib::io {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path));
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError(fmt::format("write to '{}' failed", path));
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    parts.push_back(line.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return parts;
}

double parse_double(const std::string& s, const std::string& path, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw IoError(fmt::format("{}:{}: bad number '{}'", path, line, s));
  }
  return v;
}

std::vector<std::vector<double>> read_table(const std::string& path, std::string_view header, std::size_t columns) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}'", path));
  std::string line;
  if (!std::getline(in, line) || line != header) {
    throw IoError(fmt::format("{}: expected header '{}'", path, header));
  }
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto parts = split(line, ',');
    if (parts.size() != columns) {
      throw IoError(fmt::format("{}:{}: expected {} columns, got {}", path, line_no, columns, parts.size()));
    }
    std::vector<double> row;
    for (const auto& p : parts) row.push_back(parse_double(p, path, line_no));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

void write_surface_csv(const std::string& path, std::span<const mesh::Point> nodes, const Eigen::VectorXd& eta,
                       const Eigen::VectorXd& theta) {
  const auto n = static_cast<Eigen::Index>(nodes.size());
  if (eta.size() != n || theta.size() != n) throw IoError("surface CSV: field size does not match the node count");
  auto out = open_out(path);
  fmt::memory_buffer buf;
  fmt::format_to(std::back_inserter(buf), "x,y,eta,theta\n");
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& p = nodes[static_cast<std::size_t>(i)];
    fmt::format_to(std::back_inserter(buf), "{:.17g},{:.17g},{:.17g},{:.17g}\n", p.x(), p.y(), eta[i], theta[i]);
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  finish(out, path);
}

void write_surface_csv(const std::string& path, const mesh::SurfaceMesh& surface, const Eigen::VectorXd& eta,
                       const Eigen::VectorXd& theta) {
  write_surface_csv(path, std::span<const mesh::Point>(surface.nodes), eta, theta);
}

SurfaceCsv read_surface_csv(const std::string& path) {
  const auto rows = read_table(path, "x,y,eta,theta", 4);
  SurfaceCsv csv;
  const auto n = static_cast<Eigen::Index>(rows.size());
  csv.x.resize(n);
  csv.y.resize(n);
  csv.eta.resize(n);
  csv.theta.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = rows[static_cast<std::size_t>(i)];
    csv.x[i] = r[0];
    csv.y[i] = r[1];
    csv.eta[i] = r[2];
    csv.theta[i] = r[3];
  }
  return csv;
}

Eigen::VectorXd tensor_grid_weights(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  if (x.size() != y.size() || x.size() == 0) throw IoError("tensor grid: empty or mismatched coordinates");
  auto axis = [](const Eigen::VectorXd& c) {
    std::vector<double> v(c.data(), c.data() + c.size());
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  };
  const auto xs = axis(x);
  const auto ys = axis(y);
  if (xs.size() * ys.size() != static_cast<std::size_t>(x.size()) || xs.size() < 2 || ys.size() < 2) {
    throw IoError("surface nodes do not form a tensor grid");
  }
  auto half_widths = [](const std::vector<double>& v) {
    std::map<double, double> w;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double left = i > 0 ? v[i] - v[i - 1] : 0.0;
      const double right = i + 1 < v.size() ? v[i + 1] - v[i] : 0.0;
      w[v[i]] = 0.5 * (left + right);
    }
    return w;
  };
  const auto wx = half_widths(xs);
  const auto wy = half_widths(ys);
  Eigen::VectorXd w(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) w[i] = wx.at(x[i]) * wy.at(y[i]);
  return w;
}

void write_vtk_legacy(const std::string& path, const mesh::PolyhedralMesh& mesh, const Eigen::VectorXd& b,
                      const Eigen::VectorXd& q) {
  const auto nv = static_cast<Eigen::Index>(mesh.vertices.size());
  if (b.size() != nv || q.size() != nv) throw IoError("VTK: field size does not match the vertex count");
  fmt::memory_buffer buf;
  auto out_it = std::back_inserter(buf);
  fmt::format_to(out_it, "# vtk DataFile Version 4.2\nbsdib bulk fields\nASCII\nDATASET UNSTRUCTURED_GRID\n");
  fmt::format_to(out_it, "POINTS {} double\n", nv);
  for (const auto& p : mesh.vertices) fmt::format_to(out_it, "{:.17g} {:.17g} {:.17g}\n", p.x(), p.y(), p.z());

  // Polyhedron cells: [size, n_faces, (n_pts, ids...) per face], faces wound outward.
  std::vector<std::vector<std::int64_t>> streams;
  std::size_t total = 0;
  streams.reserve(mesh.cells.size());
  for (const auto& cell : mesh.cells) {
    std::vector<std::int64_t> s;
    s.push_back(static_cast<std::int64_t>(cell.faces.size()));
    for (const auto& cf : cell.faces) {
      const auto& f = mesh.faces[static_cast<std::size_t>(cf.face)];
      s.push_back(static_cast<std::int64_t>(f.size()));
      if (cf.outward) {
        s.insert(s.end(), f.begin(), f.end());
      } else {
        s.insert(s.end(), f.rbegin(), f.rend());
      }
    }
    total += s.size() + 1;
    streams.push_back(std::move(s));
  }
  fmt::format_to(out_it, "CELLS {} {}\n", mesh.cells.size(), total);
  for (const auto& s : streams) {
    fmt::format_to(out_it, "{}", s.size());
    for (auto v : s) fmt::format_to(out_it, " {}", v);
    fmt::format_to(out_it, "\n");
  }
  fmt::format_to(out_it, "CELL_TYPES {}\n", mesh.cells.size());
  for (std::size_t c = 0; c < mesh.cells.size(); ++c) fmt::format_to(out_it, "42\n");

  fmt::format_to(out_it, "POINT_DATA {}\n", nv);
  for (const auto& [name, field] : {std::pair<const char*, const Eigen::VectorXd*>{"b", &b}, {"q", &q}}) {
    fmt::format_to(out_it, "SCALARS {} double 1\nLOOKUP_TABLE default\n", name);
    for (Eigen::Index i = 0; i < nv; ++i) fmt::format_to(out_it, "{:.17g}\n", (*field)[i]);
  }
  auto out = open_out(path);
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  finish(out, path);
}

void write_increments_csv(const std::string& path, const solver::IncrementSeries& series) {
  if (series.times.size() != series.values.size()) throw IoError("increment series: size mismatch");
  fmt::memory_buffer buf;
  fmt::format_to(std::back_inserter(buf), "step,t,increment\n");
  for (std::size_t i = 0; i < series.values.size(); ++i) {
    fmt::format_to(std::back_inserter(buf), "{},{:.17g},{:.17g}\n", i + 1, series.times[i], series.values[i]);
  }
  auto out = open_out(path);
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  finish(out, path);
}

solver::IncrementSeries read_increments_csv(const std::string& path) {
  const auto rows = read_table(path, "step,t,increment", 3);
  solver::IncrementSeries series;
  for (const auto& r : rows) {
    series.times.push_back(r[1]);
    series.values.push_back(r[2]);
  }
  return series;
}

}  // namespace bsdib::io
