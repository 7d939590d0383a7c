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

#include "nskl/kernel_lab.hpp"

#include <algorithm>
#include <cmath>

#include "nskl/multipliers.hpp"

namespace nskl {

namespace {

constexpr int kGaussPoints = 16;

struct GaussRule {
  std::array<double, kGaussPoints> nodes{};
  std::array<double, kGaussPoints> weights{};
};

// Gauss-Legendre rule on [-1, 1] by Newton iteration on P_n.
const GaussRule& gauss_legendre() {
  static const GaussRule rule = [] {
    GaussRule r;
    const int n = kGaussPoints;
    for (int i = 0; i < n; ++i) {
      double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      r.nodes[static_cast<std::size_t>(i)] = x;
      r.weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
  }();
  return rule;
}

double hermite(int order, double y) {
  double h0 = 1.0;
  if (order == 0) return h0;
  double h1 = 2.0 * y;
  for (int k = 1; k < order; ++k) {
    const double h2 = 2.0 * y * h1 - 2.0 * k * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

// Integral of |d^order theta_1(., t)| over [-radius, radius], split at the
// sign changes and integrated with composite Gauss-Legendre panels.
double l1_norm_1d(int order, double t, double radius, int samples) {
  std::vector<double> breaks{-radius};
  const double scale = 2.0 * std::sqrt(t);
  for (double y : hermite_roots(order)) {
    const double x = scale * y;
    if (x > -radius && x < radius) breaks.push_back(x);
  }
  breaks.push_back(radius);

  const auto& rule = gauss_legendre();
  const int total_panels = std::max(static_cast<int>(breaks.size()) - 1, samples / kGaussPoints);
  double sum = 0.0;
  for (std::size_t b = 0; b + 1 < breaks.size(); ++b) {
    const double a0 = breaks[b];
    const double a1 = breaks[b + 1];
    const int panels = std::max(1, static_cast<int>(std::ceil(total_panels * (a1 - a0) / (2.0 * radius))));
    const double h = (a1 - a0) / panels;
    for (int p = 0; p < panels; ++p) {
      const double mid = a0 + (p + 0.5) * h;
      for (int g = 0; g < kGaussPoints; ++g) {
        const auto gs = static_cast<std::size_t>(g);
        const double x = mid + 0.5 * h * rule.nodes[gs];
        sum += 0.5 * h * rule.weights[gs] * std::abs(heat_kernel_1d_derivative(order, x, t));
      }
    }
  }
  return sum;
}

}  // namespace

std::vector<double> default_s_set() {
  std::vector<double> s;
  for (int k = 0; k <= 20; ++k) s.push_back(std::pow(10.0, -3.0 + 0.25 * k));
  return s;
}

KernelQuery KernelQuery::make(const MultiIndex& alpha, double t) {
  KernelQuery q;
  q.dim = alpha.dim();
  q.alpha = alpha;
  q.t = t;
  q.quadrature.radius = t > 0.0 ? 12.0 * std::sqrt(t) : 0.0;
  q.quadrature.samples_per_axis = q.dim == 1 ? 2048 : (q.dim == 2 ? 512 : 128);
  q.s_set = default_s_set();
  return q;
}

void KernelQuery::validate() const {
  if (!(t > 0.0)) throw PreconditionError("KernelQuery: t must be > 0");
  if (dim < 1 || alpha.dim() != dim) throw PreconditionError("KernelQuery: alpha dimension != dim");
  // The 1e-12 slack admits radius = 12 sqrt(t) computed in floating point.
  if (quadrature.radius < 12.0 * std::sqrt(t) * (1.0 - 1e-12)) {
    throw PreconditionError("KernelQuery: radius must be >= 12 sqrt(t)");
  }
  if (quadrature.samples_per_axis < 2) throw PreconditionError("KernelQuery: need >= 2 samples per axis");
  if (s_set.empty()) throw PreconditionError("KernelQuery: s_set must be non-empty");
  if (!std::is_sorted(s_set.begin(), s_set.end()) || !(s_set.front() > 0.0)) {
    throw PreconditionError("KernelQuery: s_set must be sorted and positive");
  }
}

double heat_kernel_1d_derivative(int order, double x, double t) {
  if (!(t > 0.0)) throw PreconditionError("heat kernel: t must be > 0");
  if (order < 0) throw PreconditionError("heat kernel: order must be >= 0");
  const double scale = 2.0 * std::sqrt(t);
  const double y = x / scale;
  const double gauss = std::exp(-y * y) / std::sqrt(4.0 * kPi * t);
  const double sign = (order % 2 == 0) ? 1.0 : -1.0;
  return sign * std::pow(scale, -order) * hermite(order, y) * gauss;
}

double heat_kernel_derivative(const KernelQuery& q, std::span<const double> x) {
  if (!(q.t > 0.0)) throw PreconditionError("heat kernel: t must be > 0");
  if (static_cast<int>(x.size()) != q.dim || q.alpha.dim() != q.dim) {
    throw PreconditionError("heat kernel: point / multi-index dimension mismatch");
  }
  double v = 1.0;
  for (int a = 0; a < q.dim; ++a) v *= heat_kernel_1d_derivative(q.alpha[a], x[static_cast<std::size_t>(a)], q.t);
  return v;
}

std::vector<double> hermite_roots(int order) {
  std::vector<double> roots;
  if (order <= 0) return roots;
  // All roots lie in |y| < sqrt(2 order + 1).
  const double bound = std::sqrt(2.0 * order + 1.0) + 0.5;
  const int scan = 4000 * order;
  double prev_y = -bound;
  double prev_h = hermite(order, prev_y);
  for (int i = 1; i <= scan; ++i) {
    const double y = -bound + 2.0 * bound * i / scan;
    const double h = hermite(order, y);
    if (h == 0.0) {
      roots.push_back(y);
    } else if ((prev_h < 0.0) != (h < 0.0) && prev_h != 0.0) {
      double lo = prev_y, hi = y, flo = prev_h;
      for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = hermite(order, mid);
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    prev_y = y;
    prev_h = h;
  }
  return roots;
}

double kernel_l1_norm(const KernelQuery& q) {
  q.validate();
  // The tensor-product rule of |prod_j f_j(x_j)| factors into the product of
  // the one-dimensional rules, so it is evaluated axis by axis.
  double norm = 1.0;
  for (int a = 0; a < q.dim; ++a) {
    norm *= l1_norm_1d(q.alpha[a], q.t, q.quadrature.radius, q.quadrature.samples_per_axis);
  }
  return norm;
}

KernelScalingReport kernel_scaling_check(int dim, const MultiIndex& alpha, std::span<const double> t_values) {
  if (alpha.dim() != dim) throw PreconditionError("kernel_scaling_check: alpha dimension != dim");
  std::vector<double> sorted(t_values.begin(), t_values.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::unique(sorted.begin(), sorted.end()) - sorted.begin() < 2) {
    throw PreconditionError("kernel_scaling_check: need at least two distinct t values");
  }
  KernelScalingReport r;
  for (double t : t_values) {
    const double l1 = kernel_l1_norm(KernelQuery::make(alpha, t));
    r.t_values.push_back(t);
    r.l1_norms.push_back(l1);
    r.scaled_norms.push_back(std::pow(t, 0.5 * alpha.order()) * l1);
  }
  const auto [lo, hi] = std::minmax_element(r.scaled_norms.begin(), r.scaled_norms.end());
  r.spread = (*hi - *lo) / *lo;
  return r;
}

MaximalNormReport maximal_function_norm(const KernelQuery& q) {
  q.validate();
  if (q.s_set.back() < 1e3 * q.s_set.front()) {
    throw PreconditionError("maximal_function_norm: s_set must cover at least three decades");
  }
  const int n = q.dim;
  const int m = q.quadrature.samples_per_axis;
  const double h = q.quadrature.radius / m;
  const std::size_t ns = q.s_set.size();

  // table[a][s][i] = |d^{alpha_a} theta_1(x_i, t + s^2)| at midpoints of
  // [0, radius]; |D^alpha theta| is even in every coordinate.
  std::vector<std::vector<double>> table(static_cast<std::size_t>(n), std::vector<double>(ns * static_cast<std::size_t>(m)));
  for (int a = 0; a < n; ++a) {
    for (std::size_t s = 0; s < ns; ++s) {
      const double tau = q.t + q.s_set[s] * q.s_set[s];
      for (int i = 0; i < m; ++i) {
        table[static_cast<std::size_t>(a)][s * static_cast<std::size_t>(m) + static_cast<std::size_t>(i)] =
            std::abs(heat_kernel_1d_derivative(q.alpha[a], (i + 0.5) * h, tau));
      }
    }
  }

  const auto mm = static_cast<std::size_t>(m);
  std::size_t points = 1;
  for (int a = 0; a < n; ++a) points *= mm;
  std::vector<std::size_t> idx(static_cast<std::size_t>(n));
  double sum = 0.0;
  for (std::size_t p = 0; p < points; ++p) {
    std::size_t rest = p;
    for (int a = n - 1; a >= 0; --a) {
      idx[static_cast<std::size_t>(a)] = rest % mm;
      rest /= mm;
    }
    double best = 0.0;
    for (std::size_t s = 0; s < ns; ++s) {
      double v = 1.0;
      for (int a = 0; a < n; ++a) v *= table[static_cast<std::size_t>(a)][s * mm + idx[static_cast<std::size_t>(a)]];
      best = std::max(best, v);
    }
    sum += best;
  }
  MaximalNormReport r;
  r.maximal_norm = sum * std::pow(2.0 * h, n);
  r.l1_norm = kernel_l1_norm(q);
  r.ratio = r.maximal_norm / r.l1_norm;
  return r;
}

Field sample_heat_kernel_derivative(const MultiIndex& alpha, double t, const GridSpec& grid) {
  if (alpha.dim() != grid.dim()) throw PreconditionError("sample_heat_kernel_derivative: dimension mismatch");
  if (!(t > 0.0)) throw PreconditionError("heat kernel: t must be > 0");
  // Per-axis factors on the minimal-image coordinates.
  std::vector<std::vector<double>> factor(static_cast<std::size_t>(grid.dim()));
  for (int a = 0; a < grid.dim(); ++a) {
    const int n = grid.points(a);
    auto& f = factor[static_cast<std::size_t>(a)];
    f.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const int shifted = 2 * i >= n ? i - n : i;
      f[static_cast<std::size_t>(i)] = heat_kernel_1d_derivative(alpha[a], shifted * grid.spacing(a), t);
    }
  }
  Field out(grid);
  std::vector<int> idx(static_cast<std::size_t>(grid.dim()));
  for (std::size_t p = 0; p < grid.size(); ++p) {
    std::size_t rest = p;
    double v = 1.0;
    for (int a = grid.dim() - 1; a >= 0; --a) {
      const auto n = static_cast<std::size_t>(grid.points(a));
      v *= factor[static_cast<std::size_t>(a)][rest % n];
      rest /= n;
    }
    out[p] = v;
  }
  return out;
}

CompositeKernelNorm composite_kernel_l1_norm(int i, int l, const MultiIndex& alpha, double t, const GridSpec& grid) {
  if (i < 0 || i >= grid.dim() || l < 0 || l >= grid.dim()) {
    throw PreconditionError("composite_kernel_l1_norm: axis out of range");
  }
  if (!(t > 0.0)) throw PreconditionError("heat kernel: t must be > 0");
  double outside = 0.0;
  for (int a = 0; a < grid.dim(); ++a) outside += std::erfc(0.5 * grid.box_length(a) / (2.0 * std::sqrt(t)));
  if (outside > 1e-10) {
    throw PreconditionError("composite_kernel_l1_norm: heat kernel mass outside the box exceeds 1e-10");
  }

  const Field kernel = sample_heat_kernel_derivative(alpha, t, grid);
  CompositeKernelNorm r;
  const double peak = max_norm(kernel);
  double boundary = 0.0;
  for (std::size_t p = 0; p < grid.size(); ++p) {
    std::size_t rest = p;
    bool on_face = false;
    for (int a = grid.dim() - 1; a >= 0; --a) {
      const auto n = static_cast<std::size_t>(grid.points(a));
      on_face = on_face || 2 * (rest % n) == n;
      rest /= n;
    }
    if (on_face) boundary = std::max(boundary, std::abs(kernel[p]));
  }
  r.boundary_ratio = peak > 0.0 ? boundary / peak : 0.0;
  r.box_too_small = r.boundary_ratio > 1e-10;
  if (r.box_too_small) {
    warn("composite_kernel_l1_norm: kernel not negligible on the box boundary (ratio " +
         std::to_string(r.boundary_ratio) + ")");
  }

  auto s = forward_transform(kernel);
  apply(leray_entry_multiplier(i, l), s);
  const Field k = inverse_transform(s);
  double sum = 0.0;
  for (double v : k.values()) sum += std::abs(v);
  r.l1 = sum * grid.cell_volume();
  return r;
}

SmoothingProfile semigroup_smoothing_profile(const VectorField& f, int j, std::span<const double> t_values) {
  if (j < 0) throw PreconditionError("semigroup_smoothing_profile: j must be >= 0");
  const double f_inf = max_norm(f);
  if (!(f_inf > 0.0)) throw PreconditionError("semigroup_smoothing_profile: f must be non-zero");
  auto projected = forward_transform(f);
  apply_leray(projected);
  SmoothingProfile p;
  for (double t : t_values) {
    auto s = projected;
    apply_heat(s, t);
    const double v = std::pow(t, 0.5 * j) * derivative_sup_norm(s, j) / f_inf;
    p.t_values.push_back(t);
    p.scaled.push_back(v);
    p.bound = std::max(p.bound, v);
  }
  return p;
}

}  // namespace nskl
