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

#include "bsdib/kinetics.hpp"

#include <cmath>

#include <fmt/format.h>

namespace bsdib::kinetics {

double ModelParameters::equilibrium_D() const {
  return q0 * C * (1.0 - alpha) * (1.0 - gamma + gamma * alpha) / (alpha * (1.0 + gamma * alpha));
}

ModelParameters& ModelParameters::resolve() {
  if (derived_D) D = equilibrium_D();
  validate();
  return *this;
}

void ModelParameters::validate() const {
  const std::pair<const char*, double> positive[] = {
      {"d_omega", d_omega}, {"d_gamma", d_gamma}, {"k_b", k_b}, {"k_q", k_q}, {"b0", b0}, {"q0", q0},
      {"rho", rho},         {"alpha", alpha},     {"A1", A1},   {"A2", A2},   {"B", B},   {"C", C},
      {"D", D},             {"k2", k2},           {"k3", k3}};
  for (const auto& [name, value] : positive) {
    if (!std::isfinite(value) || !(value > 0.0)) throw ParameterError(fmt::format("parameter {} must be positive, got {}", name, value));
  }
  if (!std::isfinite(gamma) || gamma < 0.0 || gamma >= 1.0) throw ParameterError(fmt::format("parameter gamma must lie in [0, 1), got {}", gamma));
  if (!std::isfinite(psi_eta) || psi_eta < 0.0) throw ParameterError(fmt::format("parameter psi_eta must be >= 0, got {}", psi_eta));
  if (!std::isfinite(psi_theta) || psi_theta < 0.0) throw ParameterError(fmt::format("parameter psi_theta must be >= 0, got {}", psi_theta));
}

Equilibrium equilibrium(const ModelParameters& p) { return {p.b0, p.q0, 0.0, p.alpha}; }

Eigen::Vector4d kinetics_vector(const ModelParameters& p, const Eigen::Vector4d& xi) {
  return {f1(p, xi[0]), f2(p, xi[1]), f3(p, xi[0], xi[2], xi[3]), f4(p, xi[1], xi[2], xi[3])};
}

Eigen::Matrix4d jacobian_closed_form(const ModelParameters& p) {
  if (p.gamma != 0.0) throw ParameterError("closed-form Jacobian requires gamma == 0");
  const double a = p.alpha;
  Eigen::Matrix4d J = Eigen::Matrix4d::Zero();
  J(0, 0) = -p.k_b;
  J(1, 1) = -p.k_q;
  // J_h = rho diag(A1 (1-theta) eta, C (1+k2 eta)(1-theta)); eta = 0 here.
  J(2, 0) = 0.0;
  J(3, 1) = p.rho * p.C * (1.0 - a);
  // J_gamma
  J(2, 2) = p.rho * p.b0 * p.A1 * (1.0 - a);
  J(2, 3) = -p.rho * p.B;
  J(3, 2) = p.rho * p.q0 * p.C * (p.k2 - p.k3) * (1.0 - a);
  J(3, 3) = -p.rho * p.q0 * p.C / a;
  return J;
}

Eigen::Matrix4d jacobian_numeric(const ModelParameters& p, double step) {
  const auto eq = equilibrium(p);
  const Eigen::Vector4d xi(eq.b, eq.q, eq.eta, eq.theta);
  Eigen::Matrix4d J;
  for (int k = 0; k < 4; ++k) {
    Eigen::Vector4d plus = xi, minus = xi;
    plus[k] += step;
    minus[k] -= step;
    J.col(k) = (kinetics_vector(p, plus) - kinetics_vector(p, minus)) / (2.0 * step);
  }
  return J;
}

Eigen::Matrix4d jacobian_at_equilibrium(const ModelParameters& p) {
  return p.gamma == 0.0 ? jacobian_closed_form(p) : jacobian_numeric(p);
}

void surface_kinetics(const ModelParameters& p, std::span<const double> b_trace, std::span<const double> q_trace,
                      std::span<const double> eta, std::span<const double> theta, std::span<double> f3_out,
                      std::span<double> f4_out) {
  const auto n = static_cast<long>(eta.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    f3_out[k] = f3_tilde(p, b_trace[k], eta[k], theta[k]);
    f4_out[k] = f4_tilde(p, q_trace[k], eta[k], theta[k]);
  }
}

void bulk_kinetics(const ModelParameters& p, std::span<const double> b, std::span<const double> q,
                   std::span<double> f1_out, std::span<double> f2_out) {
  const auto n = static_cast<long>(b.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    f1_out[k] = f1_tilde(p, b[k]);
    f2_out[k] = f2_tilde(p, q[k]);
  }
}

}  // namespace bsdib::kinetics
