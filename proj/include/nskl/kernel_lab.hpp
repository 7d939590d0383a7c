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

// Closed-form heat-kernel derivatives and numerical kernel norms.
//
// theta(x, t) = (4 pi t)^{-n/2} exp(-|x|^2 / 4t) factors over the axes, so
// D^alpha theta is a product of one-dimensional Gaussian derivatives, each
// a Hermite polynomial times the Gaussian.

#include <span>
#include <vector>

#include "nskl/grid.hpp"

namespace nskl {

struct QuadratureSpec {
  double radius = 0.0;        ///< integrate over [-radius, radius]^n
  int samples_per_axis = 0;   ///< quadrature nodes per axis
};

struct KernelQuery {
  int dim = 1;
  MultiIndex alpha;
  double t = 1.0;
  QuadratureSpec quadrature;
  std::vector<double> s_set;  ///< sorted, positive; scales of the maximal function

  /// Defaults: radius 12 sqrt(t), samples 2048 (n = 1), 512 (n = 2) or
  /// 128 (n = 3), s_set = default_s_set().
  static KernelQuery make(const MultiIndex& alpha, double t);

  /// Throws PreconditionError on t <= 0, radius < 12 sqrt(t), dim mismatch,
  /// empty or unsorted s_set.
  void validate() const;
};

/// 10^{-3}, 10^{-2.75}, ..., 10^{2}: five decades.
std::vector<double> default_s_set();

/// d^order/dx^order of the 1-d heat kernel at (x, t).
double heat_kernel_1d_derivative(int order, double x, double t);

/// D^alpha theta(x, t); x has q.dim entries.
double heat_kernel_derivative(const KernelQuery& q, std::span<const double> x);

/// Roots of the physicists' Hermite polynomial H_order, ascending.
std::vector<double> hermite_roots(int order);

/// ||D^alpha theta(t)||_1 over the truncated box.
double kernel_l1_norm(const KernelQuery& q);

struct KernelScalingReport {
  std::vector<double> t_values;
  std::vector<double> l1_norms;
  std::vector<double> scaled_norms;  ///< t^{|alpha|/2} ||D^alpha theta(t)||_1
  double spread = 0.0;               ///< (max - min) / min of scaled_norms
};

KernelScalingReport kernel_scaling_check(int dim, const MultiIndex& alpha, std::span<const double> t_values);

struct MaximalNormReport {
  double maximal_norm = 0.0;  ///< || max_{s in s_set} |h_s * D^alpha theta(t)| ||_1
  double l1_norm = 0.0;       ///< kernel_l1_norm(q)
  double ratio = 0.0;
};

/// Discrete maximal-function norm with h = theta(., 1). Since
/// h_s = theta(., s^2), h_s * D^alpha theta(t) = D^alpha theta(t + s^2) is
/// evaluated in closed form; the L1 integral uses the midpoint rule on
/// samples_per_axis cells per half axis.
MaximalNormReport maximal_function_norm(const KernelQuery& q);

/// D^alpha theta(., t) sampled on a periodic grid, centred at the origin
/// (coordinates taken in [-L/2, L/2)).
Field sample_heat_kernel_derivative(const MultiIndex& alpha, double t, const GridSpec& grid);

struct CompositeKernelNorm {
  double l1 = 0.0;
  /// max over the faces x_j = -L_j/2 of |D^alpha theta| divided by its
  /// maximum over the box.
  double boundary_ratio = 0.0;
  bool box_too_small = false;  ///< boundary_ratio > 1e-10
};

/// ||(delta_il + R_i R_l) D^alpha theta(t)||_1 on a periodic box, Riesz
/// pair applied spectrally, trapezoid rule in space. Axes are 0-based.
/// Throws if the Gaussian mass outside the box exceeds 1e-10.
CompositeKernelNorm composite_kernel_l1_norm(int i, int l, const MultiIndex& alpha, double t,
                                             const GridSpec& grid);

struct SmoothingProfile {
  std::vector<double> t_values;
  std::vector<double> scaled;  ///< t^{j/2} |D^j e^{t Lap} P f|_inf / |f|_inf
  double bound = 0.0;          ///< max of `scaled`
};

/// Operational form of the composite bound: how t^{j/2} D^j e^{t Lap} P
/// acts on a concrete f.
SmoothingProfile semigroup_smoothing_profile(const VectorField& f, int j, std::span<const double> t_values);

}  // namespace nskl
