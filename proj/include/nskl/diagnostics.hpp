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

// Post-processing of trajectories: phi_j(t) = t^{j/2} |D^j u(t)|_inf, the
// empirical K_j on the window t <= c_win / |f|^2, the doubling bound,
// V(t) = |u|_inf + t^{1/2} |D u|_inf, parabolic scaling and the window
// smoothing bound |D^j u|_inf <= C_j |f|^{j+1}.

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "nskl/dynamics.hpp"

namespace nskl {

struct WindowParams {
  double c_win = 0.1;
  double f_inf = 0.0;
  double t_max = std::numeric_limits<double>::infinity();  ///< c_win / f_inf^2

  static WindowParams make(double c_win, double f_inf);
};

struct Series {
  std::vector<double> t;
  std::vector<double> value;
};

/// (t, t^{j/2} |D^j u(t)|_inf) per snapshot; phi(0) = |f|_inf for j = 0
/// and 0 otherwise.
Series phi_series(const Trajectory& traj, int j);

/// max over snapshots with t <= t_max of phi_j(t) / |f|_inf. Throws
/// PreconditionError when the trajectory ends before t_max.
double estimate_Kj(const Trajectory& traj, int j, const WindowParams& window);
double estimate_Kj(const Series& phi, const Trajectory& traj, const WindowParams& window);

/// max_norm(u(t)) <= factor |f|_inf for every snapshot with t < t_max.
bool doubling_check(const Trajectory& traj, const WindowParams& window, double factor);

/// Largest c in (0, c_max] for which doubling_check holds with window
/// c / |f|^2, by bisection to relative tolerance `rel_tol`. Limited to the
/// trajectory's horizon.
double empirical_window(const Trajectory& traj, double factor, double c_max, double rel_tol = 1e-6);

struct VSeries {
  std::vector<double> t;
  std::vector<double> V;
  /// Smallest C with V(s) <= C |f| + C s^{1/2} max_{r<=s} V(r)^2 for all
  /// snapshots s <= t.
  std::vector<double> fitted_C;
  double C = 0.0;  ///< fitted_C over the whole trajectory
};

VSeries v_series(const Trajectory& traj);

enum class ScalingMode {
  rescaled_box,      ///< f_lambda on the box L / lambda, same points, dt / lambda^2
  integer_on_torus,  ///< f_lambda(x) = lambda f(lambda x) on the same grid
};

/// lambda f(lambda x) as samples for the chosen mode.
VectorField rescaled_datum(const VectorField& f, double lambda, ScalingMode mode);

struct ScalingRow {
  int j = 0;
  double lambda = 1.0;
  double rel_error = 0.0;  ///< max over snapshots
};

struct ScalingReport {
  std::vector<ScalingRow> rows;
  double max_rel_error = 0.0;
};

/// Runs Navier-Stokes from f and from f_lambda and compares
/// |D^j u_lambda(t)|_inf with lambda^{j+1} |D^j u(lambda^2 t)|_inf, j <= j_max.
ScalingReport scaling_equivariance_check(const VectorField& f, double lambda, const SolverConfig& cfg,
                                         ScalingMode mode = ScalingMode::rescaled_box, int j_max = 2);

struct WindowBoundReport {
  int j = 0;
  double K_j = 0.0;
  double C_j = 0.0;             ///< 2^{j/2} K_j / c_win^{j/2}
  double bound = 0.0;           ///< C_j |f|^{j+1}
  double measured_max = 0.0;    ///< max |D^j u|_inf on [t_max/2, t_max]
  double margin = 0.0;          ///< bound / measured_max (inf when measured is 0)
  bool holds = true;
};

WindowBoundReport smoothing_window_check(const Trajectory& traj, const WindowParams& window, int j);

/// Window constants implied by the proofs, evaluated on measured constants.
double c0_illustrative(double C, double C_g);  ///< 1 / (16 C^2 C_g^2)
double c0_navier_stokes(double C);             ///< 1 / (16 C^4)

/// (max - min) / min; zero for fewer than two values.
double relative_spread(std::span<const double> values);

struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct DiagnosticsReport {
  WindowParams window;
  std::vector<double> K;        ///< K_j, j = 0..j_max
  std::vector<Series> phi;      ///< phi_j, j = 0..j_max
  VSeries v;
  double doubling_factor = 2.0;
  bool doubling = false;
  bool inconclusive = false;    ///< blow-up or window not covered
  std::vector<Check> checks;
};

DiagnosticsReport analyze_trajectory(const Trajectory& traj, const WindowParams& window, int j_max,
                                     double doubling_factor);

}  // namespace nskl
