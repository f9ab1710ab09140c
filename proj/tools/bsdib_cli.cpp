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

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "bsdib/io.hpp"
#include "bsdib/kinetics.hpp"
#include "bsdib/mesh.hpp"
#include "bsdib/run.hpp"

namespace {

enum ExitCode { kOk = 0, kConfigError = 2, kDivergence = 3, kIoError = 4 };

void apply_thread_env() {
  const char* env = std::getenv("BSDIB_THREADS");
  if (!env || !*env) return;
  const int n = std::atoi(env);
  if (n < 1) throw bsdib::io::ConfigError(fmt::format("BSDIB_THREADS must be a positive integer, got '{}'", env));
#ifdef _OPENMP
  omp_set_num_threads(n);
#endif
}

int cmd_run(const std::string& config_path, const std::string& mode_flag, const std::string& out_flag) {
  using namespace bsdib;
  auto cfg = io::load_config(config_path);
  auto mode = cfg.mode;
  if (mode_flag == "3d") mode = solver::Mode::BulkSurface3D;
  if (mode_flag == "2d") mode = solver::Mode::Surface2D;
  const std::string out = out_flag.empty() ? cfg.output_dir : out_flag;
  const auto art = io::execute_run(cfg, mode, out);
  for (const auto& w : art.result.warnings) std::cerr << "warning: " << w << '\n';
  const auto eta = solver::pattern_indicators(art.result.final_state.eta, art.ops.lumped_mass_surface);
  std::cout << fmt::format("{} run finished: {} steps, eta std {:.6e}, verdict {}; outputs in {}\n",
                           solver::to_string(mode), art.result.final_state.step, eta.std,
                           io::verdict(eta.std >= io::kPatternThreshold), out);
  return kOk;
}

int cmd_mesh(const std::string& spec, const std::string& out) {
  using namespace bsdib;
  const auto m = io::parse_mesh_spec(spec).build();
  mesh::validate_mesh(m);
  mesh::write_mesh_file(m, out);
  const auto q = mesh::mesh_quality_report(m);
  std::cout << fmt::format("vertices {} faces {} cells {} surface nodes {} hanging nodes {}\n", m.vertices.size(),
                           m.faces.size(), m.cells.size(), m.n_gamma, q.hanging_nodes);
  std::cout << fmt::format("volume {:.6g} gamma area {:.6g} aspect ratio [{:.4g}, {:.4g}]\n", q.total_volume,
                           q.gamma_area, q.min_aspect_ratio, q.max_aspect_ratio);
  return kOk;
}

int cmd_stability(const std::string& params_path) {
  using namespace bsdib;
  const auto cfg = io::load_config(params_path, false);
  const auto& p = cfg.params;
  std::cout << fmt::format("B = {:g}, C = {:g}, D = {:.17g}, gamma = {:g}\n", p.B, p.C, p.D, p.gamma);
  if (p.gamma == 0.0) {
    const auto r = kinetics::stability_check(p);
    std::cout << fmt::format("tr J_Gamma = {:.17g}\ndet J_Gamma = {:.17g}\n", r.trace_j_gamma, r.det_j_gamma);
    std::cout << fmt::format("condition B > {:.17g}: {}\ncondition C > {:.17g}: {}\n", r.B_threshold, r.condition_B,
                             r.C_threshold, r.condition_C);
    for (const auto& ev : r.eigenvalues) std::cout << fmt::format("eigenvalue {:.17g} {:+.17g}i\n", ev.real(), ev.imag());
    std::cout << fmt::format("stable (conditions): {}\nstable (eigenvalues): {}\n", r.stable, r.stable_by_eigenvalues);
  } else {
    const Eigen::Matrix4d J = kinetics::jacobian_at_equilibrium(p);
    const Eigen::EigenSolver<Eigen::Matrix4d> es(J, false);
    double max_re = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < 4; ++i) {
      const auto ev = es.eigenvalues()[i];
      max_re = std::max(max_re, ev.real());
      std::cout << fmt::format("eigenvalue {:.17g} {:+.17g}i\n", ev.real(), ev.imag());
    }
    std::cout << "closed-form conditions apply only for gamma = 0\n";
    std::cout << fmt::format("stable (eigenvalues): {}\n", max_re < 0.0);
  }
  return kOk;
}

int cmd_compare(const std::string& a, const std::string& b) {
  std::cout << bsdib::io::format_report(bsdib::io::compare_runs(a, b));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bulk-surface DIB simulator for battery electrodeposition patterns"};
  app.require_subcommand(1);

  std::string config_path, mode_flag, out_dir;
  auto* run = app.add_subcommand("run", "integrate a configured experiment");
  run->add_option("--config", config_path, "configuration file")->required();
  run->add_option("--mode", mode_flag, "3d (bulk-surface) or 2d (surface only)")
      ->check(CLI::IsMember({"3d", "2d"}));
  run->add_option("--out", out_dir, "output directory (overrides the config)");

  std::string spec, mesh_out;
  auto* mesh_cmd = app.add_subcommand("mesh", "build, validate and save a mesh");
  mesh_cmd->add_option("--spec", spec, "graded:L=50,nx=128,fine=2,coarse=5 or uniform:L=1,nx=4")->required();
  mesh_cmd->add_option("--out", mesh_out, "binary mesh file")->required();

  std::string params_path;
  auto* stab = app.add_subcommand("stability", "linear stability of the equilibrium");
  stab->add_option("--params", params_path, "parameter file (preset or B and C)")->required();

  std::string dir_a, dir_b;
  auto* cmp = app.add_subcommand("compare", "compare the final surface fields of two runs");
  cmp->add_option("--a", dir_a, "first run directory")->required();
  cmp->add_option("--b", dir_b, "second run directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    apply_thread_env();
    if (*run) return cmd_run(config_path, mode_flag, out_dir);
    if (*mesh_cmd) return cmd_mesh(spec, mesh_out);
    if (*stab) return cmd_stability(params_path);
    if (*cmp) return cmd_compare(dir_a, dir_b);
  } catch (const bsdib::solver::DivergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDivergence;
  } catch (const bsdib::io::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const bsdib::kinetics::ParameterError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const bsdib::mesh::MeshError& e) {
    std::cerr << "mesh error: " << e.what() << '\n';
    return kConfigError;
  } catch (const bsdib::io::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kOk;
}
