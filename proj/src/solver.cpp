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

#include "bsdib/solver.hpp"

#include <chrono>
#include <cmath>
#include <random>

#include <fmt/format.h>

namespace bsdib::solver {

const char* to_string(Mode mode) { return mode == Mode::BulkSurface3D ? "3d" : "2d"; }
const char* to_string(IncrementNorm norm) { return norm == IncrementNorm::L2 ? "L2" : "Linf"; }

long TimeSteppingConfig::num_steps() const {
  const double ratio = T / tau;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, nearest)) return static_cast<long>(nearest);
  return static_cast<long>(std::ceil(ratio));
}

void TimeSteppingConfig::validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("tau must be positive");
  if (!(T > 0.0) || !std::isfinite(T)) throw std::invalid_argument("T must be positive");
  if (snapshot_count < 2) throw std::invalid_argument("snapshot count must be >= 2");
  if (!(eta_amplitude >= 0.0) || !(theta_amplitude >= 0.0)) throw std::invalid_argument("noise amplitudes must be >= 0");
}

namespace {

std::unique_ptr<FactorizedSystems::Cholesky> factorize(const vem::SparseMatrix& A, const Eigen::VectorXd& lumped,
                                                       double scale, const char* name) {
  vem::SparseMatrix system = scale * A;
  for (Eigen::Index i = 0; i < lumped.size(); ++i) system.coeffRef(i, i) += lumped[i];
  auto chol = std::make_unique<FactorizedSystems::Cholesky>(system);
  if (chol->info() != Eigen::Success) {
    throw std::runtime_error(fmt::format("factorization of the {} system failed (matrix not SPD)", name));
  }
  return chol;
}

}  // namespace

FactorizedSystems::FactorizedSystems(const vem::DiscreteOperators& ops, const kinetics::ModelParameters& params,
                                     double tau, Mode mode)
    : tau_(tau), mode_(mode) {
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
  if (mode == Mode::BulkSurface3D) {
    b_ = factorize(ops.stiffness_bulk, ops.lumped_mass_bulk, tau, "b");
    q_ = factorize(ops.stiffness_bulk, ops.lumped_mass_bulk, params.d_omega * tau, "q");
  }
  eta_ = factorize(ops.stiffness_surface, ops.lumped_mass_surface, tau, "eta");
  theta_ = factorize(ops.stiffness_surface, ops.lumped_mass_surface, params.d_gamma * tau, "theta");
}

FactorizedSystems prepare_systems(const vem::DiscreteOperators& ops, const kinetics::ModelParameters& params, double tau,
                                  Mode mode) {
  return FactorizedSystems(ops, params, tau, mode);
}

void imex_step(SimulationState& state, const FactorizedSystems& systems, const vem::DiscreteOperators& ops,
               const kinetics::ModelParameters& params) {
  const double tau = systems.tau();
  const auto ns = ops.n_surface;
  const Eigen::VectorXd& ms = ops.lumped_mass_surface;
  const bool bulk = systems.mode() == Mode::BulkSurface3D;

  // The bulk trace on Gamma is the leading block of the bulk vector; in the
  // surface-only model the bulk stays at its equilibrium (shifted value 0).
  const Eigen::VectorXd zeros = bulk ? Eigen::VectorXd() : Eigen::VectorXd::Zero(ns);
  const Eigen::VectorXd& b_trace = bulk ? state.b : zeros;
  const Eigen::VectorXd& q_trace = bulk ? state.q : zeros;

  Eigen::VectorXd f3(ns), f4(ns);
  kinetics::surface_kinetics(params, {b_trace.data(), static_cast<std::size_t>(ns)},
                             {q_trace.data(), static_cast<std::size_t>(ns)},
                             {state.eta.data(), static_cast<std::size_t>(ns)},
                             {state.theta.data(), static_cast<std::size_t>(ns)}, {f3.data(), static_cast<std::size_t>(ns)},
                             {f4.data(), static_cast<std::size_t>(ns)});

  const Eigen::VectorXd surface_load3 = ms.cwiseProduct(f3);
  const Eigen::VectorXd surface_load4 = ms.cwiseProduct(f4);
  const Eigen::VectorXd rhs_eta = ms.cwiseProduct(state.eta) + tau * surface_load3;
  const Eigen::VectorXd rhs_theta = ms.cwiseProduct(state.theta) + tau * surface_load4;

  Eigen::VectorXd rhs_b, rhs_q;
  if (bulk) {
    const auto nb = ops.n_bulk;
    const Eigen::VectorXd& mb = ops.lumped_mass_bulk;
    Eigen::VectorXd f1(nb), f2(nb);
    kinetics::bulk_kinetics(params, {state.b.data(), static_cast<std::size_t>(nb)},
                            {state.q.data(), static_cast<std::size_t>(nb)}, {f1.data(), static_cast<std::size_t>(nb)},
                            {f2.data(), static_cast<std::size_t>(nb)});
    rhs_b = mb.cwiseProduct(state.b) + tau * (mb.cwiseProduct(f1) - params.psi_eta * ops.prolong(surface_load3));
    rhs_q = mb.cwiseProduct(state.q) +
            tau * (mb.cwiseProduct(f2) - params.psi_theta * params.d_omega * ops.prolong(surface_load4));
  }

  // The four systems are independent.
#pragma omp parallel sections
  {
#pragma omp section
    state.eta = systems.solve_eta(rhs_eta);
#pragma omp section
    state.theta = systems.solve_theta(rhs_theta);
#pragma omp section
    if (bulk) state.b = systems.solve_b(rhs_b);
#pragma omp section
    if (bulk) state.q = systems.solve_q(rhs_q);
  }

  state.step += 1;
  state.t = static_cast<double>(state.step) * tau;

  const bool finite = state.eta.allFinite() && state.theta.allFinite() && (!bulk || (state.b.allFinite() && state.q.allFinite()));
  if (!finite) throw DivergenceError(fmt::format("non-finite state at step {} (t = {})", state.step, state.t), state.step);
}

SimulationState initial_state(const vem::DiscreteOperators& ops, const kinetics::ModelParameters& params,
                              const TimeSteppingConfig& config, Mode mode) {
  const auto eq = kinetics::equilibrium(params);
  SimulationState s;
  if (mode == Mode::BulkSurface3D) {
    s.b = Eigen::VectorXd::Zero(ops.n_bulk);
    s.q = Eigen::VectorXd::Zero(ops.n_bulk);
  }
  s.eta.resize(ops.n_surface);
  s.theta.resize(ops.n_surface);
  std::mt19937_64 gen(config.seed);
  auto unit = [&gen] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
  for (Eigen::Index i = 0; i < ops.n_surface; ++i) {
    const double u_eta = unit();
    const double u_theta = unit();
    s.eta[i] = eq.eta + config.eta_amplitude * u_eta;
    s.theta[i] = eq.theta + config.theta_amplitude * (2.0 * u_theta - 1.0);
  }
  return s;
}

double increment_norm(const Eigen::VectorXd& diff, const Eigen::VectorXd& surface_mass, IncrementNorm norm) {
  if (norm == IncrementNorm::Linf) return diff.size() == 0 ? 0.0 : diff.cwiseAbs().maxCoeff();
  return std::sqrt(surface_mass.dot(diff.cwiseProduct(diff)));
}

std::vector<long> snapshot_steps(long n_steps, int count) {
  std::vector<long> steps;
  const long intervals = std::max(1, count - 1);
  for (long k = 0; k <= intervals; ++k) {
    const long s = (k * n_steps) / intervals;
    if (steps.empty() || steps.back() != s) steps.push_back(s);
  }
  return steps;
}

RunResult run_simulation(const vem::DiscreteOperators& ops, const kinetics::ModelParameters& params,
                         const TimeSteppingConfig& config, Mode mode, const SnapshotSink& sink) {
  using Clock = std::chrono::steady_clock;
  config.validate();
  params.validate();

  RunResult result;
  auto t0 = Clock::now();
  const FactorizedSystems systems = prepare_systems(ops, params, config.tau, mode);
  result.wall_seconds["prepare"] = std::chrono::duration<double>(Clock::now() - t0).count();

  SimulationState state = initial_state(ops, params, config, mode);
  const long n_steps = config.num_steps();
  const auto snaps = snapshot_steps(n_steps, config.snapshot_count);
  std::size_t next_snap = 0;
  auto maybe_emit = [&] {
    if (next_snap < snaps.size() && snaps[next_snap] == state.step) {
      if (sink) sink(state);
      ++next_snap;
    }
  };

  t0 = Clock::now();
  maybe_emit();
  result.increments.times.reserve(static_cast<std::size_t>(n_steps));
  result.increments.values.reserve(static_cast<std::size_t>(n_steps));
  Eigen::VectorXd previous;
  for (long n = 0; n < n_steps; ++n) {
    previous = state.eta;
    imex_step(state, systems, ops, params);
    result.increments.times.push_back(state.t);
    result.increments.values.push_back(increment_norm(state.eta - previous, ops.lumped_mass_surface, config.norm));
    maybe_emit();
  }
  result.wall_seconds["time_loop"] = std::chrono::duration<double>(Clock::now() - t0).count();

  const auto& inc = result.increments.values;
  if (!inc.empty() && inc.back() > inc.front()) {
    result.warnings.push_back(fmt::format("final increment {:.3e} exceeds the initial increment {:.3e}; the run may be diverging",
                                          inc.back(), inc.front()));
  }
  result.final_state = std::move(state);
  return result;
}

Eigen::VectorXd bulk_on_vertices(const vem::DiscreteOperators& ops, const Eigen::VectorXd& shifted, double offset) {
  const auto nv = static_cast<Eigen::Index>(ops.free_vertices.size() + ops.dirichlet_vertices.size());
  Eigen::VectorXd full = Eigen::VectorXd::Constant(nv, offset);
  for (std::size_t i = 0; i < ops.free_vertices.size(); ++i) {
    full[ops.free_vertices[i]] = shifted[static_cast<Eigen::Index>(i)] + offset;
  }
  return full;
}

}  // namespace bsdib::solver
