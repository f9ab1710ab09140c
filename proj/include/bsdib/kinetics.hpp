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

#include <array>
#include <complex>
#include <span>
#include <stdexcept>

#include <Eigen/Core>

namespace bsdib::kinetics {

class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Constants of the bulk-surface DIB kinetics. Defaults are the fixed values
/// shared by every experiment; B, C, gamma, A2 and the couplings vary per run.
struct ModelParameters {
  double d_omega = 1.0;  // bulk diffusion of q (b has unit diffusion)
  double d_gamma = 20.0; // surface diffusion of theta
  double k_b = 1.0;
  double k_q = 1.0;
  double b0 = 1.0;
  double q0 = 1.0;
  double rho = 1.0;
  double alpha = 0.5;
  double gamma = 0.0;
  double A1 = 10.0;
  double A2 = 1.0;
  double B = 66.0;
  double C = 3.0;
  double D = 0.0;
  double k2 = 2.5;
  double k3 = 1.5;
  double psi_eta = 0.0;
  double psi_theta = 0.0;
  /// When set, D is recomputed by resolve() so that (b0, q0, 0, alpha) is an
  /// equilibrium.
  bool derived_D = true;

  /// D = q0 C (1-alpha)(1-gamma+gamma alpha) / (alpha (1+gamma alpha)).
  double equilibrium_D() const;

  /// Applies derived_D and validates; returns *this for chaining.
  ModelParameters& resolve();

  /// Throws ParameterError on non-finite or out-of-range constants.
  void validate() const;
};

/// First-order relaxation of the bulk species.
inline double f1(const ModelParameters& p, double b) { return -p.k_b * (b - p.b0); }
inline double f2(const ModelParameters& p, double q) { return -p.k_q * (q - p.q0); }

/// Growth (Butler-Volmer type) kinetics of the morphology eta.
inline double f3(const ModelParameters& p, double b, double eta, double theta) {
  return p.rho * (p.A1 * b * (1.0 - theta) * eta - p.A2 * eta * eta * eta - p.B * (theta - p.alpha));
}

/// Langmuir-type adsorption kinetics of the coverage theta.
inline double f4(const ModelParameters& p, double q, double eta, double theta) {
  const double adsorption = p.C * q * (1.0 + p.k2 * eta) * (1.0 - theta) * (1.0 - p.gamma * (1.0 - theta));
  const double desorption = p.D * (1.0 + p.k3 * eta) * theta * (1.0 + p.gamma * theta);
  return p.rho * (adsorption - desorption);
}

// Kinetics in the shifted bulk variables b~ = b - b0, q~ = q - q0.
inline double f1_tilde(const ModelParameters& p, double bt) { return f1(p, bt + p.b0); }
inline double f2_tilde(const ModelParameters& p, double qt) { return f2(p, qt + p.q0); }
inline double f3_tilde(const ModelParameters& p, double bt, double eta, double theta) {
  return f3(p, bt + p.b0, eta, theta);
}
inline double f4_tilde(const ModelParameters& p, double qt, double eta, double theta) {
  return f4(p, qt + p.q0, eta, theta);
}

struct Equilibrium {
  double b = 0.0, q = 0.0, eta = 0.0, theta = 0.0;
};

Equilibrium equilibrium(const ModelParameters& p);

/// All four kinetics at xi = (b, q, eta, theta).
Eigen::Vector4d kinetics_vector(const ModelParameters& p, const Eigen::Vector4d& xi);

/// Jacobian of (f1..f4) w.r.t. (b, q, eta, theta) at the equilibrium, in the
/// block form [[J_omega, 0], [J_h, J_gamma]]. Closed form; requires gamma == 0.
Eigen::Matrix4d jacobian_closed_form(const ModelParameters& p);

/// Central finite differences of kinetics_vector at the equilibrium.
Eigen::Matrix4d jacobian_numeric(const ModelParameters& p, double step = 1e-6);

/// Closed form for gamma == 0, central differences otherwise.
Eigen::Matrix4d jacobian_at_equilibrium(const ModelParameters& p);

struct StabilityReport {
  double trace_j_gamma = 0.0;
  double det_j_gamma = 0.0;
  std::array<std::complex<double>, 4> eigenvalues{};
  bool condition_B = false;   // B > A1 b0 / (alpha (k2 - k3))
  bool condition_C = false;   // C > (b0/q0) A1 alpha (1 - alpha)
  bool stable = false;        // both conditions
  bool stable_by_eigenvalues = false;
  double max_real_eigenvalue = 0.0;
  double B_threshold = 0.0;
  double C_threshold = 0.0;
};

/// Linear stability of the equilibrium without diffusion. Requires gamma == 0
/// and k2 > k3.
StabilityReport stability_check(const ModelParameters& p);

/// Nodewise surface kinetics (f~3, f~4) with the bulk traces b~|Gamma, q~|Gamma.
/// OpenMP-parallel; bit-identical to reference::surface_kinetics_serial.
void surface_kinetics(const ModelParameters& p, std::span<const double> b_trace, std::span<const double> q_trace,
                      std::span<const double> eta, std::span<const double> theta, std::span<double> f3_out,
                      std::span<double> f4_out);

/// Nodewise bulk kinetics (f~1, f~2) on shifted variables.
void bulk_kinetics(const ModelParameters& p, std::span<const double> b, std::span<const double> q,
                   std::span<double> f1_out, std::span<double> f2_out);

}  // namespace bsdib::kinetics
