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

// Serial reference versions of the OpenMP kernels. They follow the same
// arithmetic in the same order and exist so tests can check the parallel
// paths bit-for-bit, and so the benchmark has a baseline.

#include <span>

#include "bsdib/kinetics.hpp"
#include "bsdib/mesh.hpp"
#include "bsdib/vem.hpp"

namespace bsdib::reference {

vem::DiscreteOperators assemble_global_serial(const mesh::PolyhedralMesh& mesh);

void surface_kinetics_serial(const kinetics::ModelParameters& params, std::span<const double> b_trace,
                             std::span<const double> q_trace, std::span<const double> eta,
                             std::span<const double> theta, std::span<double> f3, std::span<double> f4);

void bulk_kinetics_serial(const kinetics::ModelParameters& params, std::span<const double> b,
                          std::span<const double> q, std::span<double> f1, std::span<double> f2);

}  // namespace bsdib::reference
