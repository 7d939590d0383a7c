// Copyright 2026 The nskl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <random>

#include "nskl/grid.hpp"

namespace testutil {

using Point = std::array<double, 3>;

inline nskl::Field field_from(const nskl::GridSpec& grid, const std::function<double(const Point&)>& fn) {
  nskl::Field f(grid);
  nskl::for_each_point(grid, [&](std::size_t i, const Point& x) { f[i] = fn(x); });
  return f;
}

inline nskl::VectorField vector_from(const nskl::GridSpec& grid,
                                     std::vector<std::function<double(const Point&)>> fns) {
  std::vector<nskl::Field> comps;
  for (const auto& fn : fns) comps.push_back(field_from(grid, fn));
  return nskl::VectorField(std::move(comps));
}

inline double max_abs_diff(const nskl::Field& a, const nskl::Field& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_abs_diff(const nskl::VectorField& a, const nskl::VectorField& b) {
  double m = 0.0;
  for (int c = 0; c < a.size(); ++c) m = std::max(m, max_abs_diff(a[c], b[c]));
  return m;
}

/// White-noise samples; not band limited.
inline nskl::Field noise(const nskl::GridSpec& grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist;
  nskl::Field f(grid);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = dist(rng);
  return f;
}

/// 2-d Taylor-Green cell (sin x cos y, -cos x sin y), an exact
/// Navier-Stokes solution after multiplying by e^{-2t}.
inline nskl::VectorField taylor_green_2d(const nskl::GridSpec& grid, double a) {
  return vector_from(grid, {[a](const Point& x) { return a * std::sin(x[0]) * std::cos(x[1]); },
                            [a](const Point& x) { return -a * std::cos(x[0]) * std::sin(x[1]); }});
}

}  // namespace testutil
