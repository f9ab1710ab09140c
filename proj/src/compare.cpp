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

#include <cmath>
#include <filesystem>

#include <fmt/format.h>

#include "bsdib/io.hpp"

namespace bsdib::io {

namespace {

RunSummary summarize(const SurfaceCsv& run, const Eigen::VectorXd& weights, const solver::IncrementSeries* increments) {
  RunSummary s;
  s.eta = solver::pattern_indicators(run.eta, weights);
  s.theta = solver::pattern_indicators(run.theta, weights);
  s.patterned = s.eta.std >= kPatternThreshold;
  if (increments && !increments->values.empty()) s.steady_state = solver::steady_state_diagnostics(*increments);
  return s;
}

}  // namespace

std::string verdict(bool patterned) { return patterned ? "patterned" : "homogeneous"; }

CompareReport compare_fields(const SurfaceCsv& a, const SurfaceCsv& b, const Eigen::VectorXd& weights,
                             const solver::IncrementSeries* increments_a, const solver::IncrementSeries* increments_b) {
  if (a.x.size() != b.x.size()) {
    throw IoError(fmt::format("mesh mismatch: {} vs {} surface nodes", a.x.size(), b.x.size()));
  }
  if (weights.size() != a.x.size()) throw IoError("compare: weight count does not match the node count");
  const double scale = std::max({1.0, a.x.cwiseAbs().maxCoeff(), a.y.cwiseAbs().maxCoeff()});
  for (Eigen::Index i = 0; i < a.x.size(); ++i) {
    if (std::abs(a.x[i] - b.x[i]) > 1e-12 * scale || std::abs(a.y[i] - b.y[i]) > 1e-12 * scale) {
      throw IoError(fmt::format("mesh mismatch: node {} at ({}, {}) vs ({}, {})", i, a.x[i], a.y[i], b.x[i], b.y[i]));
    }
  }

  CompareReport r;
  r.a = summarize(a, weights, increments_a);
  r.b = summarize(b, weights, increments_b);
  const Eigen::VectorXd d = a.eta - b.eta;
  const double norm_a = std::sqrt(weights.dot(a.eta.cwiseProduct(a.eta)));
  const double norm_b = std::sqrt(weights.dot(b.eta.cwiseProduct(b.eta)));
  const double norm_d = std::sqrt(weights.dot(d.cwiseProduct(d)));
  const double denom = std::max(norm_a, norm_b);
  r.eta_relative_l2 = denom > 0.0 ? norm_d / denom : 0.0;
  r.eta_max_abs_diff = d.size() ? d.cwiseAbs().maxCoeff() : 0.0;
  r.theta_max_abs_diff = a.theta.size() ? (a.theta - b.theta).cwiseAbs().maxCoeff() : 0.0;
  r.eta_mean_difference = r.a.eta.weighted_mean - r.b.eta.weighted_mean;
  return r;
}

CompareReport compare_runs(const std::string& dir_a, const std::string& dir_b) {
  namespace fs = std::filesystem;
  const auto a = read_surface_csv((fs::path(dir_a) / "surface_final.csv").string());
  const auto b = read_surface_csv((fs::path(dir_b) / "surface_final.csv").string());
  if (a.x.size() != b.x.size()) {
    throw IoError(fmt::format("mesh mismatch: {} vs {} surface nodes", a.x.size(), b.x.size()));
  }
  const Eigen::VectorXd weights = tensor_grid_weights(a.x, a.y);

  std::optional<solver::IncrementSeries> inc_a, inc_b;
  if (const auto p = fs::path(dir_a) / "increments.csv"; fs::exists(p)) inc_a = read_increments_csv(p.string());
  if (const auto p = fs::path(dir_b) / "increments.csv"; fs::exists(p)) inc_b = read_increments_csv(p.string());
  return compare_fields(a, b, weights, inc_a ? &*inc_a : nullptr, inc_b ? &*inc_b : nullptr);
}

std::string format_report(const CompareReport& r) {
  std::string out;
  auto run = [&out](const char* label, const RunSummary& s) {
    out += fmt::format("[{}] verdict={} eta: mean={:.6e} std={:.6e} min={:.6e} max={:.6e} skewness={:.4f}\n", label,
                       verdict(s.patterned), s.eta.weighted_mean, s.eta.std, s.eta.min, s.eta.max, s.eta.skewness);
    out += fmt::format("[{}] theta: mean={:.6e} std={:.6e}\n", label, s.theta.weighted_mean, s.theta.std);
    if (s.steady_state) {
      const auto& ss = *s.steady_state;
      out += fmt::format("[{}] increments: initial={:.3e} peak={:.3e} at t={:.4g} final={:.3e} settled={}\n", label,
                         ss.initial_increment, ss.max_increment, ss.peak_time, ss.final_increment, ss.settled);
    }
  };
  run("a", r.a);
  run("b", r.b);
  out += fmt::format("eta relative L2 distance: {:.6e}\n", r.eta_relative_l2);
  out += fmt::format("eta max abs difference: {:.6e}\n", r.eta_max_abs_diff);
  out += fmt::format("theta max abs difference: {:.6e}\n", r.theta_max_abs_diff);
  out += fmt::format("eta mean difference (a - b): {:.6e}\n", r.eta_mean_difference);
  out += fmt::format("verdicts differ: {}\n", r.a.patterned != r.b.patterned);
  return out;
}

}  // namespace bsdib::io
