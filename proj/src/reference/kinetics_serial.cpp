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

#include "bsdib/reference.hpp"

namespace bsdib::reference {

void surface_kinetics_serial(const kinetics::ModelParameters& params, std::span<const double> b_trace,
                             std::span<const double> q_trace, std::span<const double> eta,
                             std::span<const double> theta, std::span<double> f3, std::span<double> f4) {
  for (std::size_t i = 0; i < eta.size(); ++i) {
    f3[i] = kinetics::f3_tilde(params, b_trace[i], eta[i], theta[i]);
    f4[i] = kinetics::f4_tilde(params, q_trace[i], eta[i], theta[i]);
  }
}

void bulk_kinetics_serial(const kinetics::ModelParameters& params, std::span<const double> b,
                          std::span<const double> q, std::span<double> f1, std::span<double> f2) {
  for (std::size_t i = 0; i < b.size(); ++i) {
    f1[i] = kinetics::f1_tilde(params, b[i]);
    f2[i] = kinetics::f2_tilde(params, q[i]);
  }
}

}  // namespace bsdib::reference
