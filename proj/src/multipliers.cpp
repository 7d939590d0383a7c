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

#include "nskl/multipliers.hpp"

#include <cmath>
#include <iostream>
#include <mutex>

#include "fft.hpp"

namespace nskl {

namespace {

std::mutex& warning_mutex() {
  static std::mutex m;
  return m;
}

WarningHandler& warning_handler() {
  static WarningHandler h = [](const std::string& msg) { std::clog << "nskl: warning: " << msg << '\n'; };
  return h;
}

void check_axis(const GridSpec& grid, int axis, const char* what) {
  if (axis < 0 || axis >= grid.dim()) {
    throw PreconditionError(std::string(what) + ": axis out of range");
  }
}

}  // namespace

void set_warning_handler(WarningHandler handler) {
  std::lock_guard lock(warning_mutex());
  warning_handler() = std::move(handler);
}

void warn(const std::string& message) {
  std::lock_guard lock(warning_mutex());
  if (warning_handler()) warning_handler()(message);
}

// ------------------------------------------------------------- multipliers

void apply(const MultiplierSpec& multiplier, SpectralField& s) {
  auto c = s.coefficients();
  for_each_mode(s.grid(), [&](const Mode& m) {
    c[m.index] *= m.is_zero() ? multiplier.zero_mode : multiplier.symbol(m);
  });
}

MultiplierSpec heat_multiplier(double t) {
  if (!(t >= 0.0)) throw PreconditionError("heat semigroup: t must be >= 0");
  return {[t](const Mode& m) { return Complex(std::exp(-m.xi2 * t), 0.0); }, Complex(1.0, 0.0)};
}

MultiplierSpec riesz_multiplier(int axis) {
  return {[axis](const Mode& m) {
            if (m.xi2_odd == 0.0) return Complex(0.0, 0.0);
            return Complex(0.0, m.xi_odd[static_cast<std::size_t>(axis)] / std::sqrt(m.xi2_odd));
          },
          Complex(0.0, 0.0)};
}

double leray_symbol(const Mode& m, int i, int j) {
  const double delta = i == j ? 1.0 : 0.0;
  if (m.xi2_odd == 0.0) return delta;
  return delta - m.xi_odd[static_cast<std::size_t>(i)] * m.xi_odd[static_cast<std::size_t>(j)] / m.xi2_odd;
}

MultiplierSpec leray_entry_multiplier(int i, int l) {
  return {[i, l](const Mode& m) { return Complex(leray_symbol(m, i, l), 0.0); },
          Complex(i == l ? 1.0 : 0.0, 0.0)};
}

void apply_heat(std::span<SpectralField> u, double t) {
  if (!(t >= 0.0)) throw PreconditionError("heat semigroup: t must be >= 0");
  if (t == 0.0 || u.empty()) return;
  for_each_mode(u.front().grid(), [&](const Mode& m) {
    const double e = std::exp(-m.xi2 * t);
    for (auto& c : u) c[m.index] *= e;
  });
}

void apply_leray(std::span<SpectralField> u) {
  if (u.empty()) return;
  const GridSpec& grid = u.front().grid();
  const int n = grid.dim();
  if (static_cast<int>(u.size()) != n) throw PreconditionError("leray_project: component count != dim");
  for_each_mode(grid, [&](const Mode& m) {
    if (m.xi2_odd == 0.0) return;  // mean (and pure-Nyquist) modes pass through
    // u - xi (xi . u) / |xi|^2
    Complex dot{0.0, 0.0};
    for (int a = 0; a < n; ++a) dot += m.xi_odd[static_cast<std::size_t>(a)] * u[static_cast<std::size_t>(a)][m.index];
    dot /= m.xi2_odd;
    for (int a = 0; a < n; ++a) u[static_cast<std::size_t>(a)][m.index] -= m.xi_odd[static_cast<std::size_t>(a)] * dot;
  });
}

VectorField heat_semigroup(const VectorField& u, double t) {
  auto s = forward_transform(u);
  apply_heat(s, t);
  auto out = inverse_transform(s);
  out.set_divergence_free(u.divergence_free());
  return out;
}

Field heat_semigroup(const Field& f, double t) {
  auto s = forward_transform(f);
  apply(heat_multiplier(t), s);
  return inverse_transform(s);
}

Field riesz(const Field& f, int axis) {
  check_axis(f.grid(), axis, "riesz");
  auto s = forward_transform(f);
  apply(riesz_multiplier(axis), s);
  return inverse_transform(s);
}

VectorField leray_project(const VectorField& u) {
  auto s = forward_transform(u);
  apply_leray(s);
  auto out = inverse_transform(s);
  out.set_divergence_free(true);
  return out;
}

// --------------------------------------------------------------- dealiasing

bool in_dealiased_band(const GridSpec& grid, const Mode& m) {
  for (int a = 0; a < grid.dim(); ++a) {
    if (3 * std::abs(m.k[static_cast<std::size_t>(a)]) > grid.points(a)) return false;
  }
  return true;
}

void dealias_in_place(SpectralField& s) {
  auto c = s.coefficients();
  for_each_mode(s.grid(), [&](const Mode& m) {
    if (!in_dealiased_band(s.grid(), m)) c[m.index] = 0.0;
  });
}

SpectralField dealias(SpectralField s) {
  dealias_in_place(s);
  return s;
}

namespace {

// Physical samples of each component, optionally truncated to the 2/3 band.
std::vector<std::vector<double>> to_physical(std::span<const SpectralField> u, bool truncate) {
  std::vector<std::vector<double>> out;
  out.reserve(u.size());
  for (const auto& c : u) {
    SpectralField work = c;
    if (truncate) dealias_in_place(work);
    const Field f = inverse_transform(work);
    out.emplace_back(f.values().begin(), f.values().end());
  }
  return out;
}

SpectralField transform_samples(const GridSpec& grid, std::vector<Complex> data, bool truncate) {
  detail::FftPlan::for_grid(grid).forward(data);
  const double scale = 1.0 / static_cast<double>(data.size());
  for (auto& c : data) c *= scale;
  SpectralField s(grid, std::move(data));
  if (truncate) dealias_in_place(s);
  return s;
}

void check_vector(std::span<const SpectralField> u, const char* what) {
  if (u.empty() || static_cast<int>(u.size()) != u.front().grid().dim()) {
    throw PreconditionError(std::string(what) + ": need dim components");
  }
}

}  // namespace

SpectralField product(const SpectralField& a, const SpectralField& b, bool dealias) {
  if (!(a.grid() == b.grid())) throw PreconditionError("product: grid mismatch");
  const std::array<SpectralField, 2> pair{a, b};
  const auto phys = to_physical(pair, dealias);
  std::vector<Complex> data(a.size());
  for (std::size_t i = 0; i < data.size(); ++i) data[i] = phys[0][i] * phys[1][i];
  return transform_samples(a.grid(), std::move(data), dealias);
}

SpectralVector nonlinear_divergence(std::span<const SpectralField> u, bool dealias) {
  check_vector(u, "nonlinear_divergence");
  const GridSpec& grid = u.front().grid();
  const int n = grid.dim();
  const auto phys = to_physical(u, dealias);
  const std::size_t size = grid.size();

  // Symmetric flux u_i u_l, one transform per unordered pair.
  std::vector<SpectralField> flux;
  std::vector<std::size_t> pair_slot(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i) {
    for (int l = i; l < n; ++l) {
      std::vector<Complex> data(size);
      const auto& ui = phys[static_cast<std::size_t>(i)];
      const auto& ul = phys[static_cast<std::size_t>(l)];
      for (std::size_t p = 0; p < size; ++p) data[p] = ui[p] * ul[p];
      pair_slot[static_cast<std::size_t>(i * n + l)] = flux.size();
      pair_slot[static_cast<std::size_t>(l * n + i)] = flux.size();
      flux.push_back(transform_samples(grid, std::move(data), dealias));
    }
  }

  // w_l = sum_i (i xi_i) F_il, then P w. P acts per mode, so it commutes with
  // the outer derivative and this equals sum_i D_i P(u_i u).
  SpectralVector out(static_cast<std::size_t>(n), SpectralField(grid));
  for (int l = 0; l < n; ++l) {
    auto o = out[static_cast<std::size_t>(l)].coefficients();
    for_each_mode(grid, [&](const Mode& m) {
      Complex acc{0.0, 0.0};
      for (int i = 0; i < n; ++i) {
        acc += Complex(0.0, m.xi_odd[static_cast<std::size_t>(i)]) *
               flux[pair_slot[static_cast<std::size_t>(i * n + l)]][m.index];
      }
      o[m.index] = acc;
    });
  }
  apply_leray(out);
  return out;
}

SpectralVector nonlinear_advective(std::span<const SpectralField> u, bool dealias) {
  check_vector(u, "nonlinear_advective");
  const GridSpec& grid = u.front().grid();
  const int n = grid.dim();
  const auto phys = to_physical(u, dealias);
  const std::size_t size = grid.size();

  SpectralVector out;
  for (int m = 0; m < n; ++m) {
    SpectralField um = u[static_cast<std::size_t>(m)];
    if (dealias) dealias_in_place(um);
    std::vector<Complex> acc(size, Complex(0.0, 0.0));
    for (int i = 0; i < n; ++i) {
      SpectralField d = um;
      apply_derivative(d, MultiIndex::unit(n, i));
      const Field grad = inverse_transform(d);
      const auto& ui = phys[static_cast<std::size_t>(i)];
      for (std::size_t p = 0; p < size; ++p) acc[p] += ui[p] * grad[p];
    }
    out.push_back(transform_samples(grid, std::move(acc), dealias));
  }
  apply_leray(out);
  return out;
}

VectorField nonlinear_advective(const VectorField& u) {
  if (!u.divergence_free()) warn("nonlinear_advective: input is not flagged divergence-free");
  const auto s = forward_transform(u);
  return inverse_transform(nonlinear_advective(s, true));
}

VectorField nonlinear_divergence(const VectorField& u) {
  if (!u.divergence_free()) warn("nonlinear_divergence: input is not flagged divergence-free");
  const auto s = forward_transform(u);
  return inverse_transform(nonlinear_divergence(s, true));
}

// ------------------------------------------------------------------ pressure

Field pressure_from_velocity(const VectorField& u) {
  const GridSpec& grid = u.grid();
  const int n = grid.dim();
  if (u.size() != n) throw PreconditionError("pressure_from_velocity: need dim components");
  const auto s = forward_transform(u);
  SpectralField p(grid);
  auto pc = p.coefficients();
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const auto uij = product(s[static_cast<std::size_t>(i)], s[static_cast<std::size_t>(j)], true);
      const double weight = i == j ? 1.0 : 2.0;
      for_each_mode(grid, [&](const Mode& m) {
        if (m.xi2_odd == 0.0) return;
        const double rr = -m.xi_odd[static_cast<std::size_t>(i)] * m.xi_odd[static_cast<std::size_t>(j)] / m.xi2_odd;
        pc[m.index] += weight * rr * uij[m.index];
      });
    }
  }
  return inverse_transform(p);
}

}  // namespace nskl
