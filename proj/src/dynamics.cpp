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

#include "nskl/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "nskl/multipliers.hpp"

namespace nskl {

// ---------------------------------------------------------------- config

void SolverConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw PreconditionError("SolverConfig: dt must be > 0");
  if (!(T > 0.0) || !std::isfinite(T)) throw PreconditionError("SolverConfig: T must be > 0");
  if (dt > T) throw PreconditionError("SolverConfig: dt must not exceed T");
  if (snapshot_stride < 1) throw PreconditionError("SolverConfig: snapshot_stride must be >= 1");
}

long SolverConfig::steps() const {
  return std::max(1L, static_cast<long>(std::ceil(T / dt - 1e-9)));
}

// --------------------------------------------------------- quadratic form

QuadraticForm::QuadraticForm(int dim, std::vector<double> coefficients, int direction)
    : dim_(dim), a_(std::move(coefficients)), direction_(direction) {
  if (dim < 1) throw PreconditionError("QuadraticForm: dim must be >= 1");
  if (a_.size() != static_cast<std::size_t>(dim * dim * dim)) {
    throw PreconditionError("QuadraticForm: need dim^3 coefficients");
  }
  if (direction < 0 || direction >= dim) throw PreconditionError("QuadraticForm: direction out of range");
  for (int m = 0; m < dim; ++m) {
    double row = 0.0;
    for (int p = 0; p < dim; ++p) {
      for (int q = 0; q < dim; ++q) {
        const double c = coefficient(m, p, q);
        if (!std::isfinite(c)) throw PreconditionError("QuadraticForm: non-finite coefficient");
        row += std::abs(c);
      }
    }
    constant_ = std::max(constant_, row);
  }
}

QuadraticForm QuadraticForm::squares(int dim, int direction) {
  std::vector<double> a(static_cast<std::size_t>(dim * dim * dim), 0.0);
  for (int m = 0; m < dim; ++m) a[static_cast<std::size_t>((m * dim + m) * dim + m)] = 1.0;
  return QuadraticForm(dim, std::move(a), direction);
}

double QuadraticForm::coefficient(int m, int p, int q) const {
  return a_.at(static_cast<std::size_t>((m * dim_ + p) * dim_ + q));
}

std::vector<double> QuadraticForm::evaluate(std::span<const double> u) const {
  if (static_cast<int>(u.size()) != dim_) throw PreconditionError("QuadraticForm: argument dimension");
  std::vector<double> g(static_cast<std::size_t>(dim_), 0.0);
  for (int m = 0; m < dim_; ++m) {
    for (int p = 0; p < dim_; ++p) {
      for (int q = 0; q < dim_; ++q) {
        g[static_cast<std::size_t>(m)] += coefficient(m, p, q) * u[static_cast<std::size_t>(p)] * u[static_cast<std::size_t>(q)];
      }
    }
  }
  return g;
}

// ---------------------------------------------------------- nonlinearities

Nonlinearity zero_nonlinearity() {
  return [](std::span<const SpectralField> u) {
    SpectralVector out;
    for (const auto& c : u) out.emplace_back(c.grid());
    return out;
  };
}

Nonlinearity navier_stokes_nonlinearity(bool dealias) {
  return [dealias](std::span<const SpectralField> u) {
    auto out = nonlinear_divergence(u, dealias);
    for (auto& c : out) {
      for (auto& v : c.coefficients()) v = -v;
    }
    return out;
  };
}

Nonlinearity illustrative_nonlinearity(const QuadraticForm& g, bool dealias) {
  return [g, dealias](std::span<const SpectralField> u) {
    const int n = g.dim();
    if (static_cast<int>(u.size()) != n) throw PreconditionError("illustrative system: component count != form dim");
    const GridSpec& grid = u.front().grid();
    SpectralVector gh(static_cast<std::size_t>(n), SpectralField(grid));
    for (int p = 0; p < n; ++p) {
      for (int q = p; q < n; ++q) {
        std::vector<double> weight(static_cast<std::size_t>(n));
        bool any = false;
        for (int m = 0; m < n; ++m) {
          const double w = p == q ? g.coefficient(m, p, p) : g.coefficient(m, p, q) + g.coefficient(m, q, p);
          weight[static_cast<std::size_t>(m)] = w;
          any = any || w != 0.0;
        }
        if (!any) continue;
        const auto upq = product(u[static_cast<std::size_t>(p)], u[static_cast<std::size_t>(q)], dealias);
        for (int m = 0; m < n; ++m) {
          const double w = weight[static_cast<std::size_t>(m)];
          if (w == 0.0) continue;
          auto c = gh[static_cast<std::size_t>(m)].coefficients();
          for (std::size_t i = 0; i < c.size(); ++i) c[i] += w * upq[i];
        }
      }
    }
    apply_leray(gh);
    const auto dir = MultiIndex::unit(grid.dim(), g.direction());
    for (auto& c : gh) apply_derivative(c, dir);
    return gh;
  };
}

// ----------------------------------------------------------------- ETD-RK2

double EtdRk2::phi1(double z) {
  if (std::abs(z) < 1e-4) return 1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0));
  return std::expm1(z) / z;
}

double EtdRk2::phi2(double z) {
  if (std::abs(z) < 1e-4) return 0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z / 120.0));
  return (std::expm1(z) - z) / (z * z);
}

EtdRk2::EtdRk2(const GridSpec& grid, double dt) : grid_(grid), dt_(dt) {
  if (!(dt > 0.0)) throw PreconditionError("etd step: dt must be > 0");
  decay_.resize(grid.size());
  phi1_.resize(grid.size());
  phi2_.resize(grid.size());
  for_each_mode(grid, [&](const Mode& m) {
    const double z = -m.xi2 * dt;
    decay_[m.index] = std::exp(-m.xi2 * dt);
    phi1_[m.index] = dt * phi1(z);
    phi2_[m.index] = dt * phi2(z);
  });
}

namespace {

bool all_finite(std::span<const SpectralField> u) {
  for (const auto& c : u) {
    for (const auto& v : c.coefficients()) {
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    }
  }
  return true;
}

// Upper bound of the max norm: |u(x)| <= sum_k |c(k)| per component.
double coefficient_bound(std::span<const SpectralField> u) {
  double s2 = 0.0;
  for (const auto& c : u) {
    double s = 0.0;
    for (const auto& v : c.coefficients()) s += std::abs(v);
    s2 += s * s;
  }
  return std::sqrt(s2);
}

}  // namespace

void EtdRk2::step(SpectralVector& u, const Nonlinearity& rhs) const {
  const std::size_t n = grid_.size();
  const SpectralVector n0 = rhs(u);
  SpectralVector a = u;
  for (std::size_t c = 0; c < a.size(); ++c) {
    auto ac = a[c].coefficients();
    const auto nc = n0[c].coefficients();
    for (std::size_t i = 0; i < n; ++i) ac[i] = decay_[i] * ac[i] + phi1_[i] * nc[i];
  }
  const SpectralVector n1 = rhs(a);
  for (std::size_t c = 0; c < a.size(); ++c) {
    auto uc = u[c].coefficients();
    const auto ac = a[c].coefficients();
    const auto n0c = n0[c].coefficients();
    const auto n1c = n1[c].coefficients();
    for (std::size_t i = 0; i < n; ++i) uc[i] = ac[i] + phi2_[i] * (n1c[i] - n0c[i]);
  }
  if (!all_finite(u)) throw BlowUpError("etd step produced non-finite values");
}

VectorField etd_step(const VectorField& u, double dt, const Nonlinearity& rhs) {
  EtdRk2 stepper(u.grid(), dt);
  auto s = forward_transform(u);
  stepper.step(s, rhs);
  return inverse_transform(s);
}

// -------------------------------------------------------------- simulation

Trajectory simulate(const VectorField& f, const SolverConfig& cfg, const Nonlinearity& rhs,
                    bool divergence_free_state) {
  cfg.validate();
  const long steps = cfg.steps();
  Trajectory traj;
  traj.config = cfg;
  traj.config.dt = cfg.T / static_cast<double>(steps);
  traj.initial_max_norm = max_norm(f);

  auto record = [&](double t, const SpectralVector& s) {
    VectorField snap = inverse_transform(s);
    if (divergence_free_state) certify_divergence_free(snap, 1e-10);
    traj.times.push_back(t);
    traj.snapshots.push_back(std::move(snap));
  };

  const EtdRk2 stepper(f.grid(), traj.config.dt);
  SpectralVector u = forward_transform(f);
  traj.times.push_back(0.0);
  traj.snapshots.push_back(f);
  const double limit = 1e6 * traj.initial_max_norm;

  for (long k = 1; k <= steps; ++k) {
    const double t = k == steps ? cfg.T : static_cast<double>(k) * traj.config.dt;
    try {
      stepper.step(u, rhs);
    } catch (const BlowUpError&) {
      traj.blowup_time = t;
      break;
    }
    if (traj.initial_max_norm > 0.0 && coefficient_bound(u) > limit &&
        max_norm(inverse_transform(u)) > limit) {
      traj.blowup_time = t;
      break;
    }
    if (k % cfg.snapshot_stride == 0 || k == steps) record(t, u);
  }
  return traj;
}

Trajectory simulate_nse(const VectorField& f, const SolverConfig& cfg) {
  if (!f.divergence_free()) {
    VectorField copy = f;
    if (!certify_divergence_free(copy, 1e-10)) {
      throw PreconditionError("simulate_nse: initial datum is not divergence-free");
    }
    return simulate(copy, cfg, navier_stokes_nonlinearity(cfg.dealias), true);
  }
  return simulate(f, cfg, navier_stokes_nonlinearity(cfg.dealias), true);
}

Trajectory simulate_illustrative(const VectorField& f, const QuadraticForm& g, const SolverConfig& cfg) {
  if (g.dim() != f.size()) throw PreconditionError("simulate_illustrative: form dimension != component count");
  return simulate(f, cfg, illustrative_nonlinearity(g, cfg.dealias), false);
}

// ------------------------------------------------------------------ Picard

namespace {

// psi(x) = int_0^1 s e^{-x s} ds = (1 - e^{-x}(1 + x)) / x^2.
double psi(double x) {
  if (std::abs(x) < 1e-3) return 0.5 + x * (-1.0 / 3.0 + x * (1.0 / 8.0 + x * (-1.0 / 30.0)));
  return (-std::expm1(-x) - x * std::exp(-x)) / (x * x);
}

}  // namespace

PicardResult picard_iterate(const VectorField& f, double T, int nodes, int k_max, const PicardOptions& options) {
  if (!(T > 0.0)) throw PreconditionError("picard_iterate: T must be > 0");
  if (nodes < 8) throw PreconditionError("picard_iterate: need at least 8 nodes");
  if (k_max < 1) throw PreconditionError("picard_iterate: k_max must be >= 1");
  const double f_inf = max_norm(f);
  if (f_inf > 0.0 && T > 0.5 * options.c_win / (f_inf * f_inf) * (1.0 + 1e-12)) {
    throw PreconditionError("picard_iterate: T outside the contraction window 0.5 c_win / |f|^2");
  }
  if (!f.divergence_free()) warn("picard_iterate: initial datum is not flagged divergence-free");

  const GridSpec& grid = f.grid();
  const auto M = static_cast<std::size_t>(nodes);
  PicardResult result{f, {}, {}, true, false};
  for (std::size_t m = 0; m <= M; ++m) {
    const double r = static_cast<double>(m) / static_cast<double>(M);
    result.node_times.push_back(T * r * r);
  }

  const SpectralVector f_hat = forward_transform(f);
  std::vector<SpectralVector> free_flow(M + 1, f_hat);
  for (std::size_t m = 0; m <= M; ++m) apply_heat(free_flow[m], result.node_times[m]);

  // Per-interval weights of the exact heat factor:
  //   int_{t_m}^{t_{m+1}} e^{-a(t_{m+1}-s)} N(s) ds
  //     = h [phi1(-a h) N_{m+1} - psi(a h) (N_{m+1} - N_m)]
  // with a = |xi|^2 and N linear on the interval. The outer derivative of
  // sum_i D_i P(u_i u) is carried by the same per-mode factor.
  std::vector<std::vector<double>> w_decay(M), w_end(M), w_slope(M);
  for (std::size_t m = 0; m < M; ++m) {
    const double h = result.node_times[m + 1] - result.node_times[m];
    w_decay[m].resize(grid.size());
    w_end[m].resize(grid.size());
    w_slope[m].resize(grid.size());
    for_each_mode(grid, [&](const Mode& mode) {
      const double x = mode.xi2 * h;
      w_decay[m][mode.index] = std::exp(-x);
      w_end[m][mode.index] = h * EtdRk2::phi1(-x);
      w_slope[m][mode.index] = h * psi(x);
    });
  }

  const Nonlinearity rhs = navier_stokes_nonlinearity(options.dealias);
  std::vector<SpectralVector> iterate = free_flow;
  const double stop = options.tolerance * std::max(1.0, f_inf);
  const std::size_t ncomp = f_hat.size();

  for (int k = 0; k < k_max; ++k) {
    std::vector<SpectralVector> flux;
    flux.reserve(M + 1);
    for (std::size_t m = 0; m <= M; ++m) flux.push_back(rhs(iterate[m]));

    double residual = 0.0;
    SpectralVector integral(ncomp, SpectralField(grid));
    for (std::size_t m = 0; m <= M; ++m) {
      if (m > 0) {
        const auto& wd = w_decay[m - 1];
        const auto& we = w_end[m - 1];
        const auto& ws = w_slope[m - 1];
        for (std::size_t c = 0; c < ncomp; ++c) {
          auto ic = integral[c].coefficients();
          const auto n0 = flux[m - 1][c].coefficients();
          const auto n1 = flux[m][c].coefficients();
          for (std::size_t i = 0; i < ic.size(); ++i) {
            ic[i] = wd[i] * ic[i] + we[i] * n1[i] - ws[i] * (n1[i] - n0[i]);
          }
        }
      }
      SpectralVector next = free_flow[m];
      SpectralVector diff(ncomp, SpectralField(grid));
      for (std::size_t c = 0; c < ncomp; ++c) {
        auto nc = next[c].coefficients();
        const auto ic = integral[c].coefficients();
        const auto old = iterate[m][c].coefficients();
        auto dc = diff[c].coefficients();
        for (std::size_t i = 0; i < nc.size(); ++i) {
          nc[i] += ic[i];
          dc[i] = nc[i] - old[i];
        }
      }
      residual = std::max(residual, max_norm(inverse_transform(diff)));
      iterate[m] = std::move(next);
    }
    if (!result.residuals.empty() && residual > result.residuals.back()) result.contracting = false;
    result.residuals.push_back(residual);
    if (!std::isfinite(residual)) break;
    if (residual <= stop) {
      result.converged = true;
      break;
    }
  }
  if (!result.contracting) warn("picard_iterate: residuals increased (no contraction)");

  result.solution = inverse_transform(iterate[M]);
  certify_divergence_free(result.solution, 1e-10);
  return result;
}

}  // namespace nskl
