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

#include "bsdib/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace bsdib::geometry {

Point newell_normal(std::span<const Point> polygon) {
  Point n = Point::Zero();
  const std::size_t count = polygon.size();
  for (std::size_t i = 0; i < count; ++i) {
    n += polygon[i].cross(polygon[(i + 1) % count]);
  }
  return n;
}

double polygon_area(std::span<const Point> polygon) { return 0.5 * newell_normal(polygon).norm(); }

Point polygon_centroid(std::span<const Point> polygon) {
  Point anchor = Point::Zero();
  for (const auto& p : polygon) anchor += p;
  anchor /= static_cast<double>(polygon.size());

  const Point unit = newell_normal(polygon).normalized();
  Point weighted = Point::Zero();
  double total = 0.0;
  const std::size_t count = polygon.size();
  for (std::size_t i = 0; i < count; ++i) {
    const Point& p = polygon[i];
    const Point& q = polygon[(i + 1) % count];
    const double area = 0.5 * (p - anchor).cross(q - anchor).dot(unit);
    weighted += area * (anchor + p + q) / 3.0;
    total += area;
  }
  return weighted / total;
}

double diameter(std::span<const Point> points) {
  double best = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      best = std::max(best, (points[i] - points[j]).norm());
    }
  }
  return best;
}

double planarity_defect(std::span<const Point> polygon) {
  const Point n = newell_normal(polygon);
  const double len = n.norm();
  if (len == 0.0) return 0.0;
  const Point unit = n / len;
  Point c = Point::Zero();
  for (const auto& p : polygon) c += p;
  c /= static_cast<double>(polygon.size());
  double worst = 0.0;
  for (const auto& p : polygon) worst = std::max(worst, std::abs((p - c).dot(unit)));
  return worst;
}

void fan_triangulate(std::span<const Point> polygon, bool flip, std::vector<Triangle>& out) {
  Point center = Point::Zero();
  for (const auto& p : polygon) center += p;
  center /= static_cast<double>(polygon.size());
  const std::size_t count = polygon.size();
  for (std::size_t i = 0; i < count; ++i) {
    const Point& p = polygon[i];
    const Point& q = polygon[(i + 1) % count];
    if (flip) {
      out.push_back({center, q, p});
    } else {
      out.push_back({center, p, q});
    }
  }
}

namespace {

// Second-moment integral of x x^T over the tetrahedron (0, a, b, c), exact:
// det/120 * (sum_i v_i v_i^T + (sum_i v_i)(sum_i v_i)^T).
Eigen::Matrix3d tet_second(const Point& a, const Point& b, const Point& c, double det) {
  const Point s = a + b + c;
  const Eigen::Matrix3d m = a * a.transpose() + b * b.transpose() + c * c.transpose() + s * s.transpose();
  return det / 120.0 * m;
}

}  // namespace

PolyhedronMoments polyhedron_moments(std::span<const Triangle> boundary) {
  // Shift to a local origin for conditioning.
  Point origin = Point::Zero();
  for (const auto& t : boundary) origin += t.a + t.b + t.c;
  origin /= static_cast<double>(3 * boundary.size());

  double volume = 0.0;
  Point first = Point::Zero();
  Eigen::Matrix3d second = Eigen::Matrix3d::Zero();
  for (const auto& t : boundary) {
    const Point a = t.a - origin;
    const Point b = t.b - origin;
    const Point c = t.c - origin;
    const double det = a.dot(b.cross(c));
    volume += det / 6.0;
    first += det / 24.0 * (a + b + c);
    second += tet_second(a, b, c, det);
  }

  PolyhedronMoments m;
  m.volume = volume;
  const Point local_centroid = first / volume;
  m.centroid = origin + local_centroid;
  m.second = second - volume * local_centroid * local_centroid.transpose();
  return m;
}

}  // namespace bsdib::geometry
