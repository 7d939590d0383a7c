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

#include "nskl/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace nskl {

namespace {

constexpr double kTimeSlack = 1e-9;

bool covers(const Trajectory& traj, double t) {
  return !traj.times.empty() && traj.times.back() >= t * (1.0 - kTimeSlack);
}

}  // namespace

WindowParams WindowParams::make(double c_win, double f_inf) {
  if (!(c_win > 0.0)) throw PreconditionError("WindowParams: c_win must be > 0");
  if (!(f_inf >= 0.0)) throw PreconditionError("WindowParams: |f| must be >= 0");
  WindowParams w;
  w.c_win = c_win;
  w.f_inf = f_inf;
  w.t_max = f_inf > 0.0 ? c_win / (f_inf * f_inf) : std::numeric_limits<double>::infinity();
  return w;
}

Series phi_series(const Trajectory& traj, int j) {
  if (j < 0) throw PreconditionError("phi_series: j must be >= 0");
  Series s;
  for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
    const double t = traj.times[k];
    double v = 0.0;
    if (t == 0.0) {
      v = j == 0 ? traj.initial_max_norm : 0.0;
    } else {
      v = std::pow(t, 0.5 * j) * derivative_sup_norm(traj.snapshots[k], j);
    }
    s.t.push_back(t);
    s.value.push_back(v);
  }
  return s;
}

double estimate_Kj(const Series& phi, const Trajectory& traj, const WindowParams& window) {
  if (!(window.f_inf > 0.0)) return 0.0;
  if (!covers(traj, window.t_max)) {
    throw PreconditionError("estimate_Kj: trajectory ends before the window t_max");
  }
  double best = 0.0;
  for (std::size_t k = 0; k < phi.t.size(); ++k) {
    if (phi.t[k] <= window.t_max * (1.0 + kTimeSlack)) best = std::max(best, phi.value[k]);
  }
  return best / window.f_inf;
}

double estimate_Kj(const Trajectory& traj, int j, const WindowParams& window) {
  if (!(window.f_inf > 0.0)) return 0.0;
  if (!covers(traj, window.t_max)) {
    throw PreconditionError("estimate_Kj: trajectory ends before the window t_max");
  }
  return estimate_Kj(phi_series(traj, j), traj, window);
}

bool doubling_check(const Trajectory& traj, const WindowParams& window, double factor) {
  // Non-strict with round-off slack, so that factor 1 admits u(0) = f.
  const double limit = factor * window.f_inf * (1.0 + 1e-12);
  for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
    if (traj.times[k] >= window.t_max) break;
    if (max_norm(traj.snapshots[k]) > limit) return false;
  }
  return true;
}

double empirical_window(const Trajectory& traj, double factor, double c_max, double rel_tol) {
  const double f = traj.initial_max_norm;
  if (!(f > 0.0) || traj.times.empty()) return c_max;
  // Norms once; the bisection below only moves the window edge.
  std::vector<double> norms;
  norms.reserve(traj.snapshots.size());
  for (const auto& s : traj.snapshots) norms.push_back(max_norm(s));
  const double limit = factor * f * (1.0 + 1e-12);
  auto holds = [&](double c) {
    const double t_max = c / (f * f);
    for (std::size_t k = 0; k < norms.size(); ++k) {
      if (traj.times[k] >= t_max) break;
      if (norms[k] > limit) return false;
    }
    return true;
  };
  const double horizon = traj.times.back() * f * f;
  double hi = std::min(c_max, horizon);
  if (holds(hi)) return hi;
  double lo = 0.0;
  while (hi - lo > rel_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    (holds(mid) ? lo : hi) = mid;
  }
  return lo;
}

VSeries v_series(const Trajectory& traj) {
  VSeries r;
  const double f = traj.initial_max_norm;
  double max_v2 = 0.0;
  double c = 0.0;
  for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
    const double t = traj.times[k];
    const auto& u = traj.snapshots[k];
    const double v = max_norm(u) + (t > 0.0 ? std::sqrt(t) * derivative_sup_norm(u, 1) : 0.0);
    max_v2 = std::max(max_v2, v * v);
    const double denom = f + std::sqrt(t) * max_v2;
    if (denom > 0.0) c = std::max(c, v / denom);
    r.t.push_back(t);
    r.V.push_back(v);
    r.fitted_C.push_back(c);
  }
  r.C = c;
  return r;
}

VectorField rescaled_datum(const VectorField& f, double lambda, ScalingMode mode) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw PreconditionError("scaling: lambda must be > 0");
  if (mode == ScalingMode::rescaled_box) {
    // Sample i of f_lambda on the box L/lambda sits at x_i / lambda, where
    // f_lambda = lambda f(x_i).
    std::vector<Field> comps;
    const GridSpec grid = f.grid().scaled(1.0 / lambda);
    for (const auto& c : f.components()) {
      std::vector<double> v(c.values().begin(), c.values().end());
      for (double& x : v) x *= lambda;
      comps.emplace_back(grid, std::move(v));
    }
    VectorField out(std::move(comps));
    out.set_divergence_free(f.divergence_free());
    return out;
  }
  const double rounded = std::round(lambda);
  if (std::abs(lambda - rounded) > 1e-12 || rounded < 1.0) {
    throw PreconditionError("scaling: lambda must be a positive integer on the fixed torus");
  }
  const auto l = static_cast<std::size_t>(rounded);
  const GridSpec& grid = f.grid();
  VectorField out(grid, f.size());
  const int n = grid.dim();
  std::vector<std::size_t> idx(static_cast<std::size_t>(n));
  for (std::size_t p = 0; p < grid.size(); ++p) {
    std::size_t rest = p;
    for (int a = n - 1; a >= 0; --a) {
      const auto na = static_cast<std::size_t>(grid.points(a));
      idx[static_cast<std::size_t>(a)] = rest % na;
      rest /= na;
    }
    std::size_t src = 0;
    for (int a = 0; a < n; ++a) {
      const auto na = static_cast<std::size_t>(grid.points(a));
      src = src * na + (l * idx[static_cast<std::size_t>(a)]) % na;
    }
    for (int c = 0; c < f.size(); ++c) out[c][p] = lambda * f[c][src];
  }
  out.set_divergence_free(f.divergence_free());
  return out;
}

ScalingReport scaling_equivariance_check(const VectorField& f, double lambda, const SolverConfig& cfg,
                                         ScalingMode mode, int j_max) {
  const VectorField f_lambda = rescaled_datum(f, lambda, mode);
  SolverConfig cfg_lambda = cfg;
  cfg_lambda.dt = cfg.dt / (lambda * lambda);
  cfg_lambda.T = cfg.T / (lambda * lambda);
  const Trajectory base = simulate_nse(f, cfg);
  const Trajectory scaled = simulate_nse(f_lambda, cfg_lambda);
  if (base.blew_up() || scaled.blew_up()) throw BlowUpError("scaling check: a run blew up");
  if (base.snapshots.size() != scaled.snapshots.size()) {
    throw PreconditionError("scaling check: snapshot times do not match");
  }

  ScalingReport report;
  for (int j = 0; j <= j_max; ++j) {
    ScalingRow row{j, lambda, 0.0};
    const double factor = std::pow(lambda, j + 1);
    for (std::size_t k = 0; k < base.snapshots.size(); ++k) {
      const double expected = factor * derivative_sup_norm(base.snapshots[k], j);
      const double got = derivative_sup_norm(scaled.snapshots[k], j);
      const double scale = std::max(std::abs(expected), 1e-300);
      row.rel_error = std::max(row.rel_error, expected == 0.0 && got == 0.0 ? 0.0 : std::abs(got - expected) / scale);
    }
    report.max_rel_error = std::max(report.max_rel_error, row.rel_error);
    report.rows.push_back(row);
  }
  return report;
}

WindowBoundReport smoothing_window_check(const Trajectory& traj, const WindowParams& window, int j) {
  WindowBoundReport r;
  r.j = j;
  if (!(window.f_inf > 0.0)) {
    r.margin = std::numeric_limits<double>::infinity();
    return r;
  }
  if (!covers(traj, window.t_max)) {
    throw PreconditionError("smoothing_window_check: trajectory does not cover [t_max/2, t_max]");
  }
  r.K_j = estimate_Kj(traj, j, window);
  r.C_j = std::pow(2.0, 0.5 * j) * r.K_j / std::pow(window.c_win, 0.5 * j);
  r.bound = r.C_j * std::pow(window.f_inf, j + 1);
  bool any = false;
  for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
    const double t = traj.times[k];
    if (t < 0.5 * window.t_max * (1.0 - kTimeSlack) || t > window.t_max * (1.0 + kTimeSlack)) continue;
    any = true;
    r.measured_max = std::max(r.measured_max, derivative_sup_norm(traj.snapshots[k], j));
  }
  if (!any) throw PreconditionError("smoothing_window_check: no snapshot in [t_max/2, t_max]");
  r.margin = r.measured_max > 0.0 ? r.bound / r.measured_max : std::numeric_limits<double>::infinity();
  r.holds = r.measured_max <= r.bound * (1.0 + 1e-12);
  return r;
}

double c0_illustrative(double C, double C_g) { return 1.0 / (16.0 * C * C * C_g * C_g); }

double c0_navier_stokes(double C) { return 1.0 / (16.0 * C * C * C * C); }

double relative_spread(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*lo == 0.0) return *hi == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return (*hi - *lo) / *lo;
}

DiagnosticsReport analyze_trajectory(const Trajectory& traj, const WindowParams& window, int j_max,
                                     double doubling_factor) {
  DiagnosticsReport r;
  r.window = window;
  r.doubling_factor = doubling_factor;
  r.inconclusive = traj.blew_up() || (window.f_inf > 0.0 && !covers(traj, window.t_max));
  for (int j = 0; j <= j_max; ++j) {
    r.phi.push_back(phi_series(traj, j));
    r.K.push_back(r.inconclusive ? std::numeric_limits<double>::quiet_NaN()
                                 : estimate_Kj(r.phi.back(), traj, window));
  }
  r.v = v_series(traj);
  r.doubling = doubling_check(traj, window, doubling_factor);
  r.checks.push_back({"doubling", doubling_factor, doubling_factor, r.doubling});

  // phi_j should not jump by more than 10x between adjacent snapshots.
  for (int j = 0; j <= j_max; ++j) {
    const auto& v = r.phi[static_cast<std::size_t>(j)].value;
    double worst = 1.0;
    for (std::size_t k = 2; k < v.size(); ++k) {
      if (v[k - 1] > 0.0 && v[k] > 0.0) worst = std::max(worst, std::max(v[k] / v[k - 1], v[k - 1] / v[k]));
    }
    r.checks.push_back({"phi_continuity_j" + std::to_string(j), worst, 10.0, worst <= 10.0});
  }
  return r;
}

}  // namespace nskl
