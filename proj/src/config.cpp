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

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "bsdib/io.hpp"

namespace bsdib::io {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

struct Entry {
  std::string value;
  int line = 0;
};

[[noreturn]] void fail(int line, const std::string& message) {
  if (line <= 0) throw ConfigError(message);
  throw ConfigError(fmt::format("line {}: {}", line, message));
}

double to_double(const std::string& key, const Entry& e) {
  double v = 0.0;
  const char* begin = e.value.data();
  const char* end = begin + e.value.size();
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end) fail(e.line, fmt::format("'{}' expects a number, got '{}'", key, e.value));
  return v;
}

template <class Int>
Int to_int(const std::string& key, const Entry& e) {
  Int v = 0;
  const char* begin = e.value.data();
  const char* end = begin + e.value.size();
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end) fail(e.line, fmt::format("'{}' expects an integer, got '{}'", key, e.value));
  return v;
}

bool to_bool(const std::string& key, const Entry& e) {
  if (e.value == "true" || e.value == "1" || e.value == "yes") return true;
  if (e.value == "false" || e.value == "0" || e.value == "no") return false;
  fail(e.line, fmt::format("'{}' expects true or false, got '{}'", key, e.value));
}

using ParamField = double kinetics::ModelParameters::*;

const std::map<std::string, ParamField>& parameter_keys() {
  static const std::map<std::string, ParamField> keys{
      {"d_omega", &kinetics::ModelParameters::d_omega}, {"d_gamma", &kinetics::ModelParameters::d_gamma},
      {"k_b", &kinetics::ModelParameters::k_b},         {"k_q", &kinetics::ModelParameters::k_q},
      {"b0", &kinetics::ModelParameters::b0},           {"q0", &kinetics::ModelParameters::q0},
      {"rho", &kinetics::ModelParameters::rho},         {"alpha", &kinetics::ModelParameters::alpha},
      {"gamma", &kinetics::ModelParameters::gamma},     {"A1", &kinetics::ModelParameters::A1},
      {"A2", &kinetics::ModelParameters::A2},           {"B", &kinetics::ModelParameters::B},
      {"C", &kinetics::ModelParameters::C},             {"k2", &kinetics::ModelParameters::k2},
      {"k3", &kinetics::ModelParameters::k3},           {"psi_eta", &kinetics::ModelParameters::psi_eta},
      {"psi_theta", &kinetics::ModelParameters::psi_theta},
  };
  return keys;
}

const std::vector<std::string>& other_keys() {
  static const std::vector<std::string> keys{"preset",       "D",          "psi",           "mesh",
                                             "L",            "nx",         "fine_layers",   "coarse_levels",
                                             "tau",          "T",          "snapshots",     "increment_norm",
                                             "seed",         "eta_amplitude", "theta_amplitude", "mode",
                                             "out",          "vtk",        "write_snapshots"};
  return keys;
}

bool known_key(const std::string& key) {
  if (parameter_keys().count(key)) return true;
  for (const auto& k : other_keys()) {
    if (k == key) return true;
  }
  return false;
}

}  // namespace

RunConfig parse_config(std::string_view text, bool require_run_keys) {
  std::map<std::string, Entry> entries;
  std::vector<std::string> order;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(line_no, fmt::format("expected 'name = value', got '{}'", line));
    const std::string key{trim(line.substr(0, eq))};
    const std::string value{trim(line.substr(eq + 1))};
    if (key.empty()) fail(line_no, "missing name before '='");
    if (value.empty()) fail(line_no, fmt::format("missing value for '{}'", key));
    if (!known_key(key)) fail(line_no, fmt::format("unknown key '{}'", key));
    if (const auto it = entries.find(key); it != entries.end()) {
      fail(line_no, fmt::format("duplicate key '{}' (first set on line {})", key, it->second.line));
    }
    entries[key] = Entry{value, line_no};
    order.push_back(key);
  }

  if (entries.empty()) throw ConfigError("missing preset or parameters");
  if (entries.count("psi") && (entries.count("psi_eta") || entries.count("psi_theta"))) {
    fail(entries.at("psi").line, "'psi' cannot be combined with 'psi_eta' or 'psi_theta'");
  }

  RunConfig cfg;
  const ExperimentPreset* preset = nullptr;
  if (const auto it = entries.find("preset"); it != entries.end()) {
    try {
      preset = &find_preset(it->second.value);
    } catch (const ConfigError& e) {
      fail(it->second.line, e.what());
    }
    cfg.preset = std::string(preset->name);
    cfg.params = preset_parameters(*preset);
    cfg.time.T = preset->T;
    cfg.time.tau = preset->tau;
    cfg.provenance.push_back(fmt::format("preset {} (line {})", preset->name, it->second.line));
  }

  auto note = [&](const std::string& key, const Entry& e, const std::string& previous) {
    if (preset) {
      cfg.provenance.push_back(
          fmt::format("{} = {} (line {}, overrides preset {} value {})", key, e.value, e.line, preset->name, previous));
    } else {
      cfg.provenance.push_back(fmt::format("{} = {} (line {})", key, e.value, e.line));
    }
  };

  for (const auto& key : order) {
    const Entry& e = entries.at(key);
    if (key == "preset") continue;
    if (const auto it = parameter_keys().find(key); it != parameter_keys().end()) {
      double& field = cfg.params.*(it->second);
      const std::string previous = fmt::format("{:g}", field);
      field = to_double(key, e);
      note(key, e, previous);
    } else if (key == "psi") {
      const std::string previous = fmt::format("{:g}", cfg.params.psi_eta);
      cfg.params.psi_eta = cfg.params.psi_theta = to_double(key, e);
      note(key, e, previous);
    } else if (key == "D") {
      const std::string previous = cfg.params.derived_D ? "auto" : fmt::format("{:g}", cfg.params.D);
      if (e.value == "auto") {
        cfg.params.derived_D = true;
      } else {
        cfg.params.derived_D = false;
        cfg.params.D = to_double(key, e);
      }
      note(key, e, previous);
    } else if (key == "tau") {
      const std::string previous = fmt::format("{:g}", cfg.time.tau);
      cfg.time.tau = to_double(key, e);
      note(key, e, previous);
    } else if (key == "T") {
      const std::string previous = fmt::format("{:g}", cfg.time.T);
      cfg.time.T = to_double(key, e);
      note(key, e, previous);
    } else if (key == "mesh") {
      if (e.value == "graded") {
        cfg.mesh.kind = MeshKind::Graded;
      } else if (e.value == "uniform") {
        cfg.mesh.kind = MeshKind::Uniform;
      } else {
        fail(e.line, fmt::format("'mesh' must be graded or uniform, got '{}'", e.value));
      }
    } else if (key == "L") {
      cfg.mesh.L = to_double(key, e);
    } else if (key == "nx") {
      cfg.mesh.nx = to_int<int>(key, e);
    } else if (key == "fine_layers") {
      cfg.mesh.fine_layers = to_int<int>(key, e);
    } else if (key == "coarse_levels") {
      cfg.mesh.coarse_levels = to_int<int>(key, e);
    } else if (key == "snapshots") {
      cfg.time.snapshot_count = to_int<int>(key, e);
    } else if (key == "increment_norm") {
      if (e.value == "L2") {
        cfg.time.norm = solver::IncrementNorm::L2;
      } else if (e.value == "Linf") {
        cfg.time.norm = solver::IncrementNorm::Linf;
      } else {
        fail(e.line, fmt::format("'increment_norm' must be L2 or Linf, got '{}'", e.value));
      }
    } else if (key == "seed") {
      cfg.time.seed = to_int<std::uint64_t>(key, e);
    } else if (key == "eta_amplitude") {
      cfg.time.eta_amplitude = to_double(key, e);
    } else if (key == "theta_amplitude") {
      cfg.time.theta_amplitude = to_double(key, e);
    } else if (key == "mode") {
      if (e.value == "3d") {
        cfg.mode = solver::Mode::BulkSurface3D;
      } else if (e.value == "2d") {
        cfg.mode = solver::Mode::Surface2D;
      } else {
        fail(e.line, fmt::format("'mode' must be 3d or 2d, got '{}'", e.value));
      }
    } else if (key == "out") {
      cfg.output_dir = e.value;
    } else if (key == "vtk") {
      cfg.write_vtk = to_bool(key, e);
    } else if (key == "write_snapshots") {
      cfg.write_snapshots = to_bool(key, e);
    }
  }

  if (!preset) {
    std::vector<std::string> missing;
    for (const char* key : {"B", "C"}) {
      if (!entries.count(key)) missing.emplace_back(key);
    }
    for (const char* key : {"T", "tau"}) {
      if (require_run_keys && !entries.count(key)) missing.emplace_back(key);
    }
    if (require_run_keys && !entries.count("psi") && !(entries.count("psi_eta") && entries.count("psi_theta"))) {
      missing.emplace_back("psi");
    }
    if (!missing.empty()) {
      std::string list;
      for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
      throw ConfigError(fmt::format("missing preset or parameters: no preset given and {} not set", list));
    }
  }

  try {
    cfg.params.resolve();
  } catch (const kinetics::ParameterError& err) {
    throw ConfigError(fmt::format("invalid parameters: {}", err.what()));
  }
  try {
    cfg.time.validate();
  } catch (const std::invalid_argument& err) {
    throw ConfigError(fmt::format("invalid time stepping: {}", err.what()));
  }
  try {
    if (cfg.mesh.kind == MeshKind::Graded) {
      mesh::GradedMeshSpec{cfg.mesh.L, cfg.mesh.nx, cfg.mesh.fine_layers, cfg.mesh.coarse_levels}.validate();
    } else if (!(cfg.mesh.L > 0.0) || cfg.mesh.nx < 1) {
      throw mesh::MeshError("uniform mesh needs L > 0 and nx >= 1");
    }
  } catch (const mesh::MeshError& err) {
    throw ConfigError(fmt::format("invalid mesh: {}", err.what()));
  }
  return cfg;
}

RunConfig load_config(const std::string& path, bool require_run_keys) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open config file '{}'", path));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_config(buffer.str(), require_run_keys);
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("{}: {}", path, e.what()));
  }
}

mesh::PolyhedralMesh MeshConfig::build() const {
  if (kind == MeshKind::Uniform) return mesh::build_uniform_mesh(L, nx);
  return mesh::build_graded_mesh(mesh::GradedMeshSpec{L, nx, fine_layers, coarse_levels});
}

std::string MeshConfig::describe() const {
  if (kind == MeshKind::Uniform) return fmt::format("uniform:L={:.17g},nx={}", L, nx);
  return fmt::format("graded:L={:.17g},nx={},fine={},coarse={}", L, nx, fine_layers, coarse_levels);
}

MeshConfig parse_mesh_spec(std::string_view spec) {
  MeshConfig m;
  const auto colon = spec.find(':');
  const std::string_view kind = trim(spec.substr(0, colon));
  if (kind == "graded") {
    m.kind = MeshKind::Graded;
  } else if (kind == "uniform") {
    m.kind = MeshKind::Uniform;
  } else {
    throw ConfigError(fmt::format("mesh spec must start with 'graded' or 'uniform', got '{}'", kind));
  }
  std::string_view rest = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view item = trim(rest.substr(0, comma));
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw ConfigError(fmt::format("mesh spec item '{}' is not name=value", item));
    const std::string key{trim(item.substr(0, eq))};
    const Entry e{std::string(trim(item.substr(eq + 1))), 0};
    try {
      if (key == "L") {
        m.L = to_double(key, e);
      } else if (key == "nx") {
        m.nx = to_int<int>(key, e);
      } else if (key == "fine" || key == "fine_layers") {
        m.fine_layers = to_int<int>(key, e);
      } else if (key == "coarse" || key == "coarse_levels") {
        m.coarse_levels = to_int<int>(key, e);
      } else {
        throw ConfigError(fmt::format("unknown mesh spec key '{}'", key));
      }
    } catch (const ConfigError& err) {
      throw ConfigError(fmt::format("mesh spec: {}", err.what()));
    }
  }
  return m;
}

}  // namespace bsdib::io
