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
#include <limits>

#include <Eigen/Eigenvalues>

#include "bsdib/kinetics.hpp"

namespace bsdib::kinetics {

StabilityReport stability_check(const ModelParameters& p) {
  if (p.gamma != 0.0) throw ParameterError("stability analysis is only available for gamma == 0");
  if (!(p.k2 > p.k3)) throw ParameterError("stability analysis requires k2 > k3");

  StabilityReport r;
  const Eigen::Matrix4d J = jacobian_closed_form(p);
  const Eigen::Matrix2d Jg = J.bottomRightCorner<2, 2>();
  r.trace_j_gamma = Jg.trace();
  r.det_j_gamma = Jg.determinant();

  r.B_threshold = p.A1 * p.b0 / (p.alpha * (p.k2 - p.k3));
  r.C_threshold = p.b0 / p.q0 * p.A1 * p.alpha * (1.0 - p.alpha);
  r.condition_B = p.B > r.B_threshold;
  r.condition_C = p.C > r.C_threshold;
  r.stable = r.condition_B && r.condition_C;

  Eigen::EigenSolver<Eigen::Matrix4d> solver(J, false);
  const auto values = solver.eigenvalues();
  r.max_real_eigenvalue = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4; ++i) {
    r.eigenvalues[static_cast<std::size_t>(i)] = values[i];
    r.max_real_eigenvalue = std::max(r.max_real_eigenvalue, values[i].real());
  }
  r.stable_by_eigenvalues = r.max_real_eigenvalue < 0.0;
  return r;
}

}  // namespace bsdib::kinetics
