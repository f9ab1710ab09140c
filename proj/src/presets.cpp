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
#include <array>

#include <fmt/format.h>

#include "bsdib/io.hpp"

namespace bsdib::io {

namespace {

// A2, B, C, gamma, psi, T, tau
constexpr std::array<ExperimentPreset, 8> kPresets{{
    {"T1", 1.0, 50.0, 10.0, 0.0, 0.5, 200.0, 2e-3, "Thin worms", "homogeneous"},
    {"T2", 1.0, 75.0, 5.0, 0.0, 0.3, 200.0, 2e-3, "Stripes", "homogeneous"},
    {"T3", 1.0, 35.0, 15.0, 0.0, 0.5, 100.0, 5e-3, "Holes", "homogeneous"},
    {"T4", 1.0, 30.0, 20.0, 0.0, 0.5, 50.0, 5e-3, "homogeneous (different from 2D)", "homogeneous"},
    {"D1", 1.0, 66.0, 3.0, 0.2, 0.1, 200.0, 5e-3, "Holes and worms", "Labyrinth"},
    {"D2", 1.0, 66.0, 3.0, 0.2, 0.15, 50.0, 2e-3, "Holes and small worms", "Labyrinth"},
    {"D3", 1.0, 66.0, 3.0, 0.2, 0.2, 50.0, 2e-3, "Holes", "Labyrinth"},
    {"D4", 1.0, 3.0, 30.0, 0.2, 0.1, 200.0, 5e-3, "Holes", "Bigger Holes"},
}};

}  // namespace

std::span<const ExperimentPreset> presets() { return kPresets; }

const ExperimentPreset& find_preset(std::string_view name) {
  const auto it = std::find_if(kPresets.begin(), kPresets.end(), [&](const auto& p) { return p.name == name; });
  if (it == kPresets.end()) throw ConfigError(fmt::format("unknown preset '{}'", name));
  return *it;
}

kinetics::ModelParameters preset_parameters(const ExperimentPreset& preset) {
  kinetics::ModelParameters p;
  p.A2 = preset.A2;
  p.B = preset.B;
  p.C = preset.C;
  p.gamma = preset.gamma;
  p.psi_eta = preset.psi;
  p.psi_theta = preset.psi;
  p.derived_D = true;
  p.resolve();
  return p;
}

}  // namespace bsdib::io
