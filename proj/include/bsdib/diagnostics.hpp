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

#include <vector>

#include <Eigen/Core>

#include "bsdib/mesh.hpp"
#include "bsdib/solver.hpp"

namespace bsdib::solver {

struct SteadyStateReport {
  double initial_increment = 0.0;
  double final_increment = 0.0;
  double max_increment = 0.0;
  double peak_time = 0.0;
  /// First time after the peak at which the increment is below a tenth of the
  /// peak; NaN when that never happens.
  double decade_decay_time = 0.0;
  bool monotone_nonincreasing = false;
  bool monotone_after_peak = false;
  /// final increment below 1% of the running maximum
  bool settled = false;
  /// Mean of consecutive ratios v[n+1]/v[n] over nonzero entries (NaN if none).
  double mean_ratio = 0.0;
};

SteadyStateReport steady_state_diagnostics(const IncrementSeries& series);

struct PatternIndicators {
  double mean = 0.0;
  double std = 0.0;  // population standard deviation over nodes
  double min = 0.0;
  double max = 0.0;
  double weighted_mean = 0.0;  // lumped M_Gamma weights
  double weighted_std = 0.0;
  double skewness = 0.0;
};

PatternIndicators pattern_indicators(const Eigen::VectorXd& field, const Eigen::VectorXd& weights);

/// Statistics of a bulk field (one value per mesh vertex) over each
/// horizontal plane of vertices, ordered by increasing z.
struct PlaneStatistics {
  double z = 0.0;
  std::size_t count = 0;
  double mean = 0.0;
  double std = 0.0;
};

std::vector<PlaneStatistics> plane_statistics(const mesh::PolyhedralMesh& mesh, const Eigen::VectorXd& vertex_field);

}  // namespace bsdib::solver
