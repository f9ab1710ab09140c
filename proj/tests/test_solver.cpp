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
#include <random>
#include <algorithm>

#include "doctest.h"

#include "bsdib/diagnostics.hpp"
#include "bsdib/io.hpp"
#include "bsdib/mesh.hpp"
#include "bsdib/solver.hpp"
#include "bsdib/vem.hpp"

using namespace bsdib;
using solver::Mode;

namespace {

// One bulk node that is also the single surface node; M = 1, A = 0.
vem::DiscreteOperators toy_operators() {
  vem::DiscreteOperators ops;
  ops.n_bulk = ops.n_surface = 1;
  ops.stiffness_bulk = vem::SparseMatrix(1, 1);
  ops.stiffness_surface = vem::SparseMatrix(1, 1);
  ops.stiffness_bulk_full = vem::SparseMatrix(1, 1);
  ops.lumped_mass_bulk = ops.lumped_mass_surface = ops.lumped_mass_bulk_full = Eigen::VectorXd::Ones(1);
  ops.free_vertices = {0};
  return ops;
}

kinetics::ModelParameters preset(std::string_view name) { return io::preset_parameters(io::find_preset(name)); }

solver::SimulationState equilibrium_state(const vem::DiscreteOperators& ops, const kinetics::ModelParameters& p,
                                          Mode mode) {
  solver::SimulationState s;
  if (mode == Mode::BulkSurface3D) {
    s.b = Eigen::VectorXd::Zero(ops.n_bulk);
    s.q = Eigen::VectorXd::Zero(ops.n_bulk);
  }
  s.eta = Eigen::VectorXd::Zero(ops.n_surface);
  s.theta = Eigen::VectorXd::Constant(ops.n_surface, p.alpha);
  return s;
}

double max_diff(const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return a.size() ? (a - b).cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

TEST_CASE("number of steps") {
  solver::TimeSteppingConfig c;
  c.T = 50.0;
  c.tau = 2e-3;
  CHECK(c.num_steps() == 25000);
  c.T = 200.0;
  c.tau = 5e-3;
  CHECK(c.num_steps() == 40000);
  c.T = 1.0;
  c.tau = 0.3;
  CHECK(c.num_steps() == 4);
  c.tau = 0.0;
  CHECK_THROWS(c.validate());
  c.tau = 0.1;
  c.T = -1.0;
  CHECK_THROWS(c.validate());
}

TEST_CASE("toy systems are identity scalings") {
  const auto ops = toy_operators();
  const auto p = preset("D3");
  const solver::FactorizedSystems sys(ops, p, 0.01, Mode::BulkSurface3D);
  const Eigen::VectorXd r = Eigen::VectorXd::Constant(1, 3.5);
  CHECK(sys.solve_b(r)[0] == 3.5);
  CHECK(sys.solve_q(r)[0] == 3.5);
  CHECK(sys.solve_eta(r)[0] == 3.5);
  CHECK(sys.solve_theta(r)[0] == 3.5);
}

TEST_CASE("factorizations solve consistently") {
  const auto m = mesh::build_uniform_mesh(1.0, 2);
  const auto ops = vem::assemble_global(m);
  const auto p = preset("T1");
  const double tau = 0.05;
  const solver::FactorizedSystems sys(ops, p, tau, Mode::BulkSurface3D);
  std::mt19937_64 gen(3);
  std::normal_distribution<double> n01;
  Eigen::VectorXd y(ops.n_bulk);
  for (auto& v : y) v = n01(gen);
  vem::SparseMatrix Mb = tau * ops.stiffness_bulk;
  for (Eigen::Index i = 0; i < ops.n_bulk; ++i) Mb.coeffRef(i, i) += ops.lumped_mass_bulk[i];
  CHECK(max_diff(sys.solve_b(Mb * y), y) <= 1e-12);
  vem::SparseMatrix Mq = p.d_omega * tau * ops.stiffness_bulk;
  for (Eigen::Index i = 0; i < ops.n_bulk; ++i) Mq.coeffRef(i, i) += ops.lumped_mass_bulk[i];
  CHECK(max_diff(sys.solve_q(Mq * y), y) <= 1e-12);
  Eigen::VectorXd z(ops.n_surface);
  for (auto& v : z) v = n01(gen);
  vem::SparseMatrix Ms = p.d_gamma * tau * ops.stiffness_surface;
  for (Eigen::Index i = 0; i < ops.n_surface; ++i) Ms.coeffRef(i, i) += ops.lumped_mass_surface[i];
  CHECK(max_diff(sys.solve_theta(Ms * z), z) <= 1e-12);
}

TEST_CASE("equilibrium is a fixed point of one step") {
  const auto m = mesh::build_graded_mesh({1.0, 4, 1, 2});
  const auto ops = vem::assemble_global(m);
  for (const auto& p : io::presets()) {
    const auto params = io::preset_parameters(p);
    for (Mode mode : {Mode::BulkSurface3D, Mode::Surface2D}) {
      auto state = equilibrium_state(ops, params, mode);
      const auto before = state;
      const solver::FactorizedSystems sys(ops, params, p.tau, mode);
      solver::imex_step(state, sys, ops, params);
      CHECK(max_diff(state.eta, before.eta) <= 1e-13);
      CHECK(max_diff(state.theta, before.theta) <= 1e-13);
      CHECK(max_diff(state.b, before.b) <= 1e-13);
      CHECK(max_diff(state.q, before.q) <= 1e-13);
      CHECK(state.step == 1);
      CHECK(state.t == p.tau);
    }
  }
}

TEST_CASE("decoupled bulk decay follows the explicit Euler recursion") {
  const auto ops = toy_operators();
  auto p = preset("T1");
  p.psi_eta = p.psi_theta = 0.0;
  p.k_b = 1.3;
  const double tau = 0.01;
  const solver::FactorizedSystems sys(ops, p, tau, Mode::BulkSurface3D);
  auto s = equilibrium_state(ops, p, Mode::BulkSurface3D);
  s.b[0] = 0.5;
  solver::IncrementSeries series;
  for (int n = 1; n <= 200; ++n) {
    const double previous = s.b[0];
    solver::imex_step(s, sys, ops, p);
    CHECK(s.b[0] == doctest::Approx(std::pow(1.0 - tau * p.k_b, n) * 0.5).epsilon(1e-12));
    series.times.push_back(s.t);
    series.values.push_back(std::abs(s.b[0] - previous));
  }
  const auto report = solver::steady_state_diagnostics(series);
  CHECK(report.mean_ratio == doctest::Approx(1.0 - tau * p.k_b).epsilon(1e-10));
  CHECK(report.monotone_nonincreasing);
  CHECK(report.peak_time == doctest::Approx(tau));
}

TEST_CASE("surface growth injects a negative bulk load") {
  const auto m = mesh::build_uniform_mesh(1.0, 1);
  const auto ops = vem::assemble_global(m);
  auto p = preset("T1");
  auto s = equilibrium_state(ops, p, Mode::BulkSurface3D);
  s.theta.setConstant(p.alpha - 0.01);  // f3 = rho B (alpha - theta) > 0 with eta = 0
  const solver::FactorizedSystems sys(ops, p, 0.01, Mode::BulkSurface3D);
  solver::imex_step(s, sys, ops, p);
  for (Eigen::Index i = 0; i < ops.n_surface; ++i) CHECK(s.b[i] < 0.0);
}

TEST_CASE("bulk diffusion energy does not increase without coupling") {
  const auto m = mesh::build_graded_mesh({1.0, 4, 1, 2});
  const auto ops = vem::assemble_global(m);
  auto p = preset("T1");
  p.psi_eta = p.psi_theta = 0.0;
  const solver::FactorizedSystems sys(ops, p, 0.01, Mode::BulkSurface3D);
  auto s = equilibrium_state(ops, p, Mode::BulkSurface3D);
  std::mt19937_64 gen(9);
  std::normal_distribution<double> n01;
  for (auto& v : s.b) v = n01(gen);
  for (auto& v : s.q) v = n01(gen);
  double energy = 0.5 * s.b.dot(ops.stiffness_bulk * s.b);
  double energy_q = 0.5 * s.q.dot(ops.stiffness_bulk * s.q);
  for (int n = 0; n < 100; ++n) {
    solver::imex_step(s, sys, ops, p);
    const double e = 0.5 * s.b.dot(ops.stiffness_bulk * s.b);
    const double eq = 0.5 * s.q.dot(ops.stiffness_bulk * s.q);
    CHECK(e <= energy * (1 + 1e-14));
    CHECK(eq <= energy_q * (1 + 1e-14));
    energy = e;
    energy_q = eq;
  }
}

TEST_CASE("initial state") {
  const auto ops = vem::assemble_global(mesh::build_graded_mesh({1.0, 4, 1, 2}));
  const auto p = preset("D3");
  solver::TimeSteppingConfig c;
  c.seed = 42;
  const auto s = solver::initial_state(ops, p, c, Mode::BulkSurface3D);
  CHECK(s.b.size() == ops.n_bulk);
  CHECK(s.b.cwiseAbs().maxCoeff() == 0.0);
  CHECK(s.q.cwiseAbs().maxCoeff() == 0.0);
  CHECK(s.eta.minCoeff() >= 0.0);
  CHECK(s.eta.maxCoeff() <= 1e-2);
  CHECK(s.theta.minCoeff() >= p.alpha - 1e-2);
  CHECK(s.theta.maxCoeff() <= p.alpha + 1e-2);
  const auto again = solver::initial_state(ops, p, c, Mode::BulkSurface3D);
  CHECK(again.eta == s.eta);
  CHECK(again.theta == s.theta);
  c.seed = 43;
  CHECK(solver::initial_state(ops, p, c, Mode::BulkSurface3D).eta != s.eta);
  const auto surface = solver::initial_state(ops, p, c, Mode::Surface2D);
  CHECK(surface.b.size() == 0);
}

TEST_CASE("zero-noise runs stay at the equilibrium for every preset") {
  const auto ops = vem::assemble_global(mesh::build_graded_mesh({1.0, 4, 1, 2}));
  for (const auto& pr : io::presets()) {
    solver::TimeSteppingConfig c;
    c.tau = pr.tau;
    c.T = 200 * pr.tau;
    c.eta_amplitude = c.theta_amplitude = 0.0;
    for (Mode mode : {Mode::BulkSurface3D, Mode::Surface2D}) {
      const auto r = solver::run_simulation(ops, io::preset_parameters(pr), c, mode);
      REQUIRE(r.increments.values.size() == 200);
      CHECK(*std::max_element(r.increments.values.begin(), r.increments.values.end()) <= 1e-13);
    }
  }
}

TEST_CASE("decoupled 3D run follows the 2D run") {
  const auto ops = vem::assemble_global(mesh::build_graded_mesh({50.0, 8, 2, 2}));
  auto p = preset("D3");
  p.psi_eta = p.psi_theta = 0.0;
  solver::TimeSteppingConfig c;
  c.tau = 2e-3;
  c.T = 0.2;
  const auto a = solver::run_simulation(ops, p, c, Mode::BulkSurface3D);
  const auto b = solver::run_simulation(ops, p, c, Mode::Surface2D);
  CHECK(max_diff(a.final_state.eta, b.final_state.eta) <= 1e-10);
  CHECK(max_diff(a.final_state.theta, b.final_state.theta) <= 1e-10);
  CHECK(a.final_state.b.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("runs are deterministic and emit snapshots") {
  const auto ops = vem::assemble_global(mesh::build_graded_mesh({50.0, 8, 2, 2}));
  const auto p = preset("T1");
  solver::TimeSteppingConfig c;
  c.tau = 2e-3;
  c.T = 0.1;
  c.snapshot_count = 6;
  std::vector<long> steps;
  const auto a = solver::run_simulation(ops, p, c, Mode::BulkSurface3D,
                                        [&](const solver::SimulationState& s) { steps.push_back(s.step); });
  const auto b = solver::run_simulation(ops, p, c, Mode::BulkSurface3D);
  CHECK(a.final_state.eta == b.final_state.eta);
  CHECK(a.final_state.b == b.final_state.b);
  CHECK(a.increments.values == b.increments.values);
  CHECK(steps == std::vector<long>{0, 10, 20, 30, 40, 50});
  CHECK(a.final_state.step == 50);
  for (double v : a.increments.values) CHECK(v >= 0.0);
}

TEST_CASE("divergence aborts with the step index") {
  const auto ops = vem::assemble_global(mesh::build_uniform_mesh(1.0, 1));
  const auto p = preset("T1");
  solver::TimeSteppingConfig c;
  c.tau = 5.0;
  c.T = 5000.0;
  c.eta_amplitude = 1.0;
  try {
    solver::run_simulation(ops, p, c, Mode::Surface2D);
    FAIL("expected divergence");
  } catch (const solver::DivergenceError& e) {
    CHECK(e.step() >= 1);
    CHECK(e.step() < 1000);
  }
}

TEST_CASE("snapshot schedule") {
  CHECK(solver::snapshot_steps(10, 3) == std::vector<long>{0, 5, 10});
  CHECK(solver::snapshot_steps(3, 100) == std::vector<long>{0, 1, 2, 3});
  CHECK(solver::snapshot_steps(25000, 100).size() == 100);
}

TEST_CASE("increment norms") {
  const Eigen::VectorXd d = (Eigen::VectorXd(3) << 1.0, -2.0, 0.5).finished();
  const Eigen::VectorXd w = (Eigen::VectorXd(3) << 0.5, 0.25, 1.0).finished();
  CHECK(solver::increment_norm(d, w, solver::IncrementNorm::Linf) == 2.0);
  CHECK(solver::increment_norm(d, w, solver::IncrementNorm::L2) == doctest::Approx(std::sqrt(0.5 + 1.0 + 0.25)));
}

TEST_CASE("steady-state diagnostics") {
  solver::IncrementSeries flat{{1, 2, 3}, {0, 0, 0}};
  const auto r = solver::steady_state_diagnostics(flat);
  CHECK(r.final_increment == 0.0);
  CHECK(r.max_increment == 0.0);
  CHECK(r.monotone_nonincreasing);
  CHECK(solver::steady_state_diagnostics(solver::IncrementSeries{{1, 2, 3, 4}, {1, 3, 0.2, 0.01}}).settled);
  CHECK_THROWS(solver::steady_state_diagnostics(solver::IncrementSeries{}));
}

TEST_CASE("pattern indicators") {
  const Eigen::VectorXd w = Eigen::VectorXd::Ones(16);
  const auto c = solver::pattern_indicators(Eigen::VectorXd::Constant(16, 2.5), w);
  CHECK(c.mean == 2.5);
  CHECK(c.std == 0.0);

  // checkerboard on a 4 x 4 node grid
  Eigen::VectorXd board(16);
  for (int j = 0; j < 4; ++j) {
    for (int i = 0; i < 4; ++i) board[j * 4 + i] = ((i + j) % 2) ? 1.0 : -1.0;
  }
  const auto b = solver::pattern_indicators(board, w);
  CHECK(b.mean == doctest::Approx(0.0));
  CHECK(b.std == doctest::Approx(1.0));
  CHECK(b.weighted_std == doctest::Approx(1.0));
  CHECK(b.skewness == doctest::Approx(0.0));

  const auto ops = vem::assemble_global(mesh::build_uniform_mesh(2.0, 2));
  const auto theta = solver::pattern_indicators(Eigen::VectorXd::Constant(ops.n_surface, 0.5), ops.lumped_mass_surface);
  CHECK(theta.weighted_mean == doctest::Approx(0.5));
  CHECK_THROWS(solver::pattern_indicators(Eigen::VectorXd::Ones(3), Eigen::VectorXd::Ones(4)));
}

TEST_CASE("plane statistics and bulk reconstruction") {
  const auto m = mesh::build_graded_mesh({1.0, 4, 1, 2});
  const auto ops = vem::assemble_global(m);
  Eigen::VectorXd z(static_cast<Eigen::Index>(m.num_vertices()));
  for (std::size_t v = 0; v < m.num_vertices(); ++v) z[static_cast<Eigen::Index>(v)] = m.vertices[v].z();
  const auto planes = solver::plane_statistics(m, z);
  REQUIRE(planes.size() == 4);
  for (const auto& pl : planes) {
    CHECK(pl.std == 0.0);
    CHECK(pl.mean == pl.z);
  }
  CHECK(planes[0].count == 25);

  const Eigen::VectorXd shifted = Eigen::VectorXd::Constant(ops.n_bulk, 0.25);
  const auto full = solver::bulk_on_vertices(ops, shifted, 1.0);
  for (auto v : ops.dirichlet_vertices) CHECK(full[v] == 1.0);
  for (auto v : ops.free_vertices) CHECK(full[v] == 1.25);
}
