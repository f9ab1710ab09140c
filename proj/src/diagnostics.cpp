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

#include "bsdib/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bsdib::solver {

SteadyStateReport steady_state_diagnostics(const IncrementSeries& series) {
  if (series.values.empty()) throw std::invalid_argument("empty increment series");
  const auto& v = series.values;
  SteadyStateReport r;
  r.initial_increment = v.front();
  r.final_increment = v.back();
  const auto peak = static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
  r.max_increment = v[peak];
  r.peak_time = series.times[peak];

  r.decade_decay_time = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = peak; i < v.size(); ++i) {
    if (v[i] < 0.1 * r.max_increment) {
      r.decade_decay_time = series.times[i];
      break;
    }
  }

  r.monotone_nonincreasing = std::is_sorted(v.rbegin(), v.rend());
  r.monotone_after_peak = std::is_sorted(v.rbegin(), v.rend() - static_cast<std::ptrdiff_t>(peak));
  r.settled = r.final_increment < 0.01 * r.max_increment;

  double ratio_sum = 0.0;
  std::size_t ratio_count = 0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    if (v[i] != 0.0) {
      ratio_sum += v[i + 1] / v[i];
      ++ratio_count;
    }
  }
  r.mean_ratio = ratio_count ? ratio_sum / static_cast<double>(ratio_count) : std::numeric_limits<double>::quiet_NaN();
  return r;
}

PatternIndicators pattern_indicators(const Eigen::VectorXd& field, const Eigen::VectorXd& weights) {
  if (field.size() == 0 || field.size() != weights.size()) throw std::invalid_argument("pattern_indicators: size mismatch");
  PatternIndicators p;
  const auto n = static_cast<double>(field.size());
  p.mean = field.sum() / n;
  const Eigen::VectorXd centered = field.array() - p.mean;
  const double variance = centered.squaredNorm() / n;
  p.std = std::sqrt(variance);
  p.min = field.minCoeff();
  p.max = field.maxCoeff();
  const double total = weights.sum();
  p.weighted_mean = weights.dot(field) / total;
  const Eigen::VectorXd wc = field.array() - p.weighted_mean;
  p.weighted_std = std::sqrt(weights.dot(wc.cwiseProduct(wc)) / total);
  p.skewness = variance > 0.0 ? centered.array().cube().sum() / n / std::pow(variance, 1.5) : 0.0;
  return p;
}

std::vector<PlaneStatistics> plane_statistics(const mesh::PolyhedralMesh& mesh, const Eigen::VectorXd& vertex_field) {
  if (static_cast<std::size_t>(vertex_field.size()) != mesh.vertices.size()) {
    throw std::invalid_argument("plane_statistics: field must have one value per vertex");
  }
  // Vertices of one plane share the exact same z by construction; bucket with
  // the mesh tolerance anyway.
  const double tol = mesh.tolerance();
  std::vector<std::pair<double, std::vector<double>>> planes;
  std::vector<std::size_t> order(mesh.vertices.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return mesh.vertices[a].z() < mesh.vertices[b].z(); });
  for (auto v : order) {
    const double z = mesh.vertices[v].z();
    if (planes.empty() || z - planes.back().first > tol) planes.push_back({z, {}});
    planes.back().second.push_back(vertex_field[static_cast<Eigen::Index>(v)]);
  }

  std::vector<PlaneStatistics> out;
  for (const auto& [z, values] : planes) {
    PlaneStatistics s;
    s.z = z;
    s.count = values.size();
    double sum = 0.0;
    for (double x : values) sum += x;
    s.mean = sum / static_cast<double>(values.size());
    double sq = 0.0;
    for (double x : values) sq += (x - s.mean) * (x - s.mean);
    s.std = std::sqrt(sq / static_cast<double>(values.size()));
    out.push_back(s);
  }
  return out;
}

}  // namespace bsdib::solver
