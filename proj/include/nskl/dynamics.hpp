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

// Time integration of u_t = Lap u + N(u) on the torus: the projected
// Navier-Stokes equation (N = -P(u . grad u)), the illustrative system
// (N = D_i P g(u)), and a Picard iteration of the mild-solution integral
// equation.

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "nskl/grid.hpp"

namespace nskl {

enum class Scheme { etd_rk2 };

struct SolverConfig {
  double dt = 1e-3;
  double T = 0.1;
  Scheme scheme = Scheme::etd_rk2;
  bool dealias = true;  ///< off only for diagnostics
  int snapshot_stride = 1;

  void validate() const;
  /// Steps actually taken: ceil(T / dt), so the last snapshot lands on T.
  long steps() const;
};

/// g_m(u) = sum_{p,q} a[m][p][q] u_p u_q, entering as D_i P g(u).
class QuadraticForm {
 public:
  /// coefficients in row-major a[m][p][q], dim^3 entries; direction 0-based.
  QuadraticForm(int dim, std::vector<double> coefficients, int direction);

  /// g_m(u) = u_m^2.
  static QuadraticForm squares(int dim, int direction);

  int dim() const noexcept { return dim_; }
  int direction() const noexcept { return direction_; }
  double coefficient(int m, int p, int q) const;
  const std::vector<double>& coefficients() const noexcept { return a_; }

  /// C_g = max_m sum_{p,q} |a[m][p][q]|, so |g_m(u)| <= C_g |u|^2 for
  /// every component m.
  double constant() const noexcept { return constant_; }

  std::vector<double> evaluate(std::span<const double> u) const;

 private:
  int dim_;
  std::vector<double> a_;
  int direction_;
  double constant_ = 0.0;
};

/// Spectral right-hand side N(u) of u_t = Lap u + N(u).
using Nonlinearity = std::function<SpectralVector(std::span<const SpectralField>)>;

Nonlinearity zero_nonlinearity();
/// -sum_i D_i P(u_i u).
Nonlinearity navier_stokes_nonlinearity(bool dealias = true);
/// D_i P g(u).
Nonlinearity illustrative_nonlinearity(const QuadraticForm& g, bool dealias = true);

/// Thrown by a step whose result is not finite.
class BlowUpError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<VectorField> snapshots;
  SolverConfig config;  ///< dt holds the step actually used
  double initial_max_norm = 0.0;
  /// Time at which blow-up was declared (non-finite values, or max norm
  /// above 1e6 |f|_inf); the trajectory stops at the last good snapshot.
  std::optional<double> blowup_time;

  bool blew_up() const noexcept { return blowup_time.has_value(); }
};

/// Second-order exponential time differencing (Cox-Matthews ETD-RK2) with
/// per-mode factors cached for one step size:
///   a       = e^{c h} u + h phi1(c h) N(u)
///   u_next  = a + h phi2(c h) (N(a) - N(u)),   c = -|xi|^2.
class EtdRk2 {
 public:
  EtdRk2(const GridSpec& grid, double dt);

  double dt() const noexcept { return dt_; }
  /// Throws BlowUpError when the result has non-finite coefficients.
  void step(SpectralVector& u, const Nonlinearity& rhs) const;

  /// phi1(z) = (e^z - 1) / z and phi2(z) = (e^z - 1 - z) / z^2, by series
  /// for |z| < 1e-4.
  static double phi1(double z);
  static double phi2(double z);

 private:
  GridSpec grid_;
  double dt_;
  std::vector<double> decay_;
  std::vector<double> phi1_;
  std::vector<double> phi2_;
};

VectorField etd_step(const VectorField& u, double dt, const Nonlinearity& rhs);

/// Generic driver; snapshots at t = 0, every snapshot_stride steps, and T.
Trajectory simulate(const VectorField& f, const SolverConfig& cfg, const Nonlinearity& rhs,
                    bool divergence_free_state);

/// Requires f divergence-free (flag set or certifiable to 1e-10).
Trajectory simulate_nse(const VectorField& f, const SolverConfig& cfg);
Trajectory simulate_illustrative(const VectorField& f, const QuadraticForm& g, const SolverConfig& cfg);

struct PicardOptions {
  double c_win = 0.1;        ///< contraction window: T <= c_win / (2 |f|^2)
  double tolerance = 1e-13;  ///< stop once residual <= tolerance * max(1, |f|)
  bool dealias = true;
};

struct PicardResult {
  VectorField solution;               ///< iterate at T
  std::vector<double> node_times;     ///< t_m = T (m / M)^2
  std::vector<double> residuals;      ///< max_m |u^{k+1}(t_m) - u^k(t_m)|_inf
  bool contracting = true;            ///< residuals never increased
  bool converged = false;
};

/// Fixed-point iteration of
///   u(t) = e^{t Lap} f - int_0^t e^{(t-s) Lap} sum_i D_i P(u_i u)(s) ds
/// on the graded nodes t_m = T (m/M)^2. Per mode the integral over each
/// node interval is done exactly for the heat factor, with the flux
/// interpolated linearly in s.
PicardResult picard_iterate(const VectorField& f, double T, int nodes, int k_max,
                            const PicardOptions& options = {});

}  // namespace nskl
