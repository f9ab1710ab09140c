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
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <string>

namespace bsdib::test {

/// Plane-by-plane enumeration of a graded cube-on-cube stack.
struct GradedCounts {
  std::int64_t vertices = 0;
  std::int64_t faces = 0;
  std::int64_t cells = 0;
  std::int64_t surface_nodes = 0;
  std::int64_t hanging = 0;
};

inline GradedCounts count_graded(int nx, int fine_layers, int coarse_levels) {
  GradedCounts c;
  auto sq = [](std::int64_t n) { return n * n; };
  c.surface_nodes = sq(nx + 1);
  c.vertices = sq(nx + 1);  // z = 0
  c.faces = sq(nx);         // bottom squares
  auto add_layer = [&](std::int64_t n) {
    c.vertices += sq(n + 1);              // the layer's top plane
    c.faces += sq(n) + 2 * n * (n + 1);   // top squares + vertical walls
    c.cells += sq(n);
  };
  for (int l = 0; l < fine_layers; ++l) add_layer(nx);
  std::int64_t below = nx;
  for (int k = 1; k <= coarse_levels; ++k) {
    const std::int64_t n = nx >> k;
    add_layer(n);
    c.hanging += sq(below + 1) - sq(n + 1);  // plane nodes that are not coarse corners
    below = n;
  }
  return c;
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("bsdib_" + tag + "_" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace bsdib::test
