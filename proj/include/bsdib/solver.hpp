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

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCholesky>

#include "bsdib/kinetics.hpp"
#include "bsdib/vem.hpp"

namespace bsdib::solver {

enum class Mode {
  BulkSurface3D,  // coupled four-field model
  Surface2D,      // surface-only DIB model, b = b0 and q = q0 in the kinetics
};

enum class IncrementNorm { L2, Linf };

const char* to_string(Mode mode);
const char* to_string(IncrementNorm norm);

class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, long step) : std::runtime_error(what), step_(step) {}
  long step() const { return step_; }

 private:
  long step_;
};

struct TimeSteppingConfig {
  double tau = 2e-3;
  double T = 50.0;
  int snapshot_count = 100;
  IncrementNorm norm = IncrementNorm::L2;
  std::uint64_t seed = 1;
  // Initial data: eta in eta* + [0, eta_amplitude], theta in theta* + [-a, a].
  double eta_amplitude = 1e-2;
  double theta_amplitude = 1e-2;

  /// ceil(T / tau), robust to the rounding of T / tau.
  long num_steps() const;
  void validate() const;
};

/// Bulk vectors hold the shifted variables b - b0, q - q0 on free dofs;
/// surface vectors hold eta and theta. Empty bulk vectors in Surface2D mode.
struct SimulationState {
  Eigen::VectorXd b, q, eta, theta;
  double t = 0.0;
  long step = 0;
};

/// Reusable factorizations of M + tau A, M + d tau A for bulk and surface.
class FactorizedSystems {
 public:
  using Cholesky = Eigen::SimplicialLLT<vem::SparseMatrix>;

  FactorizedSystems(const vem::DiscreteOperators& ops, const kinetics::ModelParameters& params, double tau, Mode mode);

  Eigen::VectorXd solve_b(const Eigen::VectorXd& rhs) const { return b_->solve(rhs); }
  Eigen::VectorXd solve_q(const Eigen::VectorXd& rhs) const { return q_->solve(rhs); }
  Eigen::VectorXd solve_eta(const Eigen::VectorXd& rhs) const { return eta_->solve(rhs); }
  Eigen::VectorXd solve_theta(const Eigen::VectorXd& rhs) const { return theta_->solve(rhs); }

  double tau() const { return tau_; }
  Mode mode() const { return mode_; }

 private:
  double tau_;
  Mode mode_;
  std::unique_ptr<Cholesky> b_, q_, eta_, theta_;
};

FactorizedSystems prepare_systems(const vem::DiscreteOperators& ops, const kinetics::ModelParameters& params, double tau,
                                  Mode mode);

/// One IMEX Euler step: diffusion implicit, kinetics explicit, bulk loads
/// from the surface kinetics through R M_Gamma.
void imex_step(SimulationState& state, const FactorizedSystems& systems, const vem::DiscreteOperators& ops,
               const kinetics::ModelParameters& params);

/// Bulk at (b0, q0); eta and theta uniform noise around (0, alpha) per
/// surface node, drawn from a seeded mt19937_64.
SimulationState initial_state(const vem::DiscreteOperators& ops, const kinetics::ModelParameters& params,
                              const TimeSteppingConfig& config, Mode mode);

struct IncrementSeries {
  std::vector<double> times;
  std::vector<double> values;  // norm of eta^{n+1} - eta^n
};

double increment_norm(const Eigen::VectorXd& diff, const Eigen::VectorXd& surface_mass, IncrementNorm norm);

/// Steps at which snapshots are emitted: `count` evenly spaced values in
/// [0, n_steps], always including both ends.
std::vector<long> snapshot_steps(long n_steps, int count);

using SnapshotSink = std::function<void(const SimulationState&)>;

struct RunResult {
  SimulationState final_state;
  IncrementSeries increments;
  std::vector<std::string> warnings;
  std::map<std::string, double> wall_seconds;
};

RunResult run_simulation(const vem::DiscreteOperators& ops, const kinetics::ModelParameters& params,
                         const TimeSteppingConfig& config, Mode mode, const SnapshotSink& sink = {});

/// Physical bulk field on every mesh vertex: shifted values plus `offset` on
/// free dofs, `offset` on the eliminated Gamma_T vertices.
Eigen::VectorXd bulk_on_vertices(const vem::DiscreteOperators& ops, const Eigen::VectorXd& shifted, double offset);

}  // namespace bsdib::solver
