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

// Run configuration: flat "section.key = value" lines, '#' comments, lists
// as comma separated values with optional brackets.

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "nskl/dynamics.hpp"
#include "nskl/grid.hpp"

namespace nskl {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class InitKind { taylor_green, random, shear, file };
enum class SystemKind { navier_stokes, illustrative };

struct RunConfig {
  struct Grid {
    int dim = 3;
    int points = 32;
    double box_length = kTwoPi;
  } grid;

  struct Init {
    InitKind kind = InitKind::taylor_green;
    double amplitude = 1.0;
    std::uint64_t seed = 0;
    int band = 4;
    std::filesystem::path file;
  } init;

  struct Model {
    SystemKind system = SystemKind::navier_stokes;
    int direction = 1;               ///< 1-based, as written in the file
    std::vector<double> g_coeffs;    ///< empty selects g_m(u) = u_m^2
  } model;

  SolverConfig solver;

  struct Window {
    double c_win = 0.1;
    double doubling_factor = 2.0;
  } window;

  struct Diagnostics {
    int j_max = 3;
    std::vector<double> lambdas{2.0};
    std::vector<double> amplitudes{1.0, 2.0, 4.0};
    int window_steps = 40;           ///< steps per window for verify-theorem
    bool torus_scaling = false;      ///< integer lambda on the fixed grid
  } diagnostics;

  struct Picard {
    double T = 0.05;
    std::vector<int> nodes{16, 32, 64};
    int k_max = 30;
    int reference_steps = 800;
  } picard;

  struct Kernels {
    std::vector<int> dims{1, 3};
    int max_order = 3;
    std::vector<double> t_values{0.25, 1.0, 4.0};
    bool composite = true;
    int composite_points = 64;
    int composite_max_order = 2;
    std::vector<double> composite_t_values{0.5, 1.0, 2.0};
  } kernels;

  std::filesystem::path output_dir = "nskl-out";

  GridSpec grid_spec() const;
  /// QuadraticForm for the illustrative model; direction converted to 0-based.
  QuadraticForm quadratic_form() const;
  /// Throws ConfigError naming the offending key.
  void validate() const;
};

/// Parses and validates. Relative init.file paths resolve against the
/// directory holding the config file.
RunConfig parse_config(const std::filesystem::path& path);
RunConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir = {});

}  // namespace nskl
