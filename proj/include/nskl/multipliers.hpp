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

// Fourier multipliers: heat semigroup, Riesz transforms, the Leray
// projector, pressure recovery and the projected quadratic nonlinearity.
//
// Conventions (with the transform convention of forward_transform):
//   R_j         symbol  i xi_j / |xi|,        zero mode -> 0
//   R_i R_j     symbol  -xi_i xi_j / |xi|^2,  zero mode -> 0
//   P_ij        symbol  delta_ij - xi_i xi_j / |xi|^2, zero mode passed through
//   exp(t Lap)  symbol  exp(-|xi|^2 t)

#include <functional>
#include <span>

#include "nskl/grid.hpp"

namespace nskl {

/// A scalar Fourier multiplier with an explicit value at xi = 0.
struct MultiplierSpec {
  std::function<Complex(const Mode&)> symbol;
  Complex zero_mode{0.0, 0.0};
};

void apply(const MultiplierSpec& multiplier, SpectralField& s);

MultiplierSpec heat_multiplier(double t);
MultiplierSpec riesz_multiplier(int axis);
/// delta_il + R_i R_l: one entry of the Leray matrix.
MultiplierSpec leray_entry_multiplier(int i, int l);

/// Symbol of P_ij at a non-zero mode.
double leray_symbol(const Mode& m, int i, int j);

void apply_heat(std::span<SpectralField> u, double t);
void apply_leray(std::span<SpectralField> u);

VectorField heat_semigroup(const VectorField& u, double t);
Field heat_semigroup(const Field& f, double t);

/// Riesz transform along `axis` (0-based).
Field riesz(const Field& f, int axis);

/// Projects onto divergence-free fields; the output carries the flag.
VectorField leray_project(const VectorField& u);

/// p = sum_ij R_i R_j (u_i u_j) with dealiased products, zero mean.
Field pressure_from_velocity(const VectorField& u);

/// True iff every |k_j| <= N_j / 3.
bool in_dealiased_band(const GridSpec& grid, const Mode& m);
void dealias_in_place(SpectralField& s);
SpectralField dealias(SpectralField s);

/// Spectrum of the pointwise product a*b. With `dealias` set both factors
/// are truncated to the 2/3 band first and the product after, which makes
/// the result alias-free.
SpectralField product(const SpectralField& a, const SpectralField& b, bool dealias = true);

/// P(u . grad u), products formed in physical space.
VectorField nonlinear_advective(const VectorField& u);
/// sum_i D_i P(u_i u): derivative outside the projector.
VectorField nonlinear_divergence(const VectorField& u);

/// Spectral form of nonlinear_divergence used by the solvers.
SpectralVector nonlinear_divergence(std::span<const SpectralField> u, bool dealias = true);
SpectralVector nonlinear_advective(std::span<const SpectralField> u, bool dealias = true);

/// Receives library warnings (defaults to std::clog).
using WarningHandler = std::function<void(const std::string&)>;
void set_warning_handler(WarningHandler handler);
void warn(const std::string& message);

}  // namespace nskl
