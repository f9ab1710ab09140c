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

#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace bsdib::geometry {

using Point = Eigen::Vector3d;

/// Newell vector: twice the area times the unit normal for a planar polygon,
/// oriented by the vertex cycle.
Point newell_normal(std::span<const Point> polygon);

double polygon_area(std::span<const Point> polygon);

/// Area centroid.
Point polygon_centroid(std::span<const Point> polygon);

/// Largest vertex-to-vertex distance.
double diameter(std::span<const Point> points);

/// Largest distance of a vertex from the best-fit plane through the centroid.
double planarity_defect(std::span<const Point> polygon);

/// A closed triangulated boundary: each triangle is oriented outward.
struct Triangle {
  Point a, b, c;
};

struct PolyhedronMoments {
  double volume = 0.0;
  Point centroid = Point::Zero();
  /// Second moments about `centroid`: integral of (x-c)(x-c)^T.
  Eigen::Matrix3d second = Eigen::Matrix3d::Zero();
};

/// Moments of a polyhedron bounded by outward triangles, by the divergence
/// theorem (signed tetrahedra against an arbitrary apex). Exact for
/// polynomials of degree <= 2.
PolyhedronMoments polyhedron_moments(std::span<const Triangle> boundary);

/// Fan triangulation from the vertex average, keeping the polygon orientation.
void fan_triangulate(std::span<const Point> polygon, bool flip, std::vector<Triangle>& out);

}  // namespace bsdib::geometry
