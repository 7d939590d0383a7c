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

#include "nskl/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "fft.hpp"
#include "nskl/multipliers.hpp"

namespace nskl {

// ---------------------------------------------------------------- GridSpec

GridSpec::GridSpec(int dim, int points, double box_length)
    : GridSpec(std::vector<int>(static_cast<std::size_t>(std::max(dim, 0)), points),
               std::vector<double>(static_cast<std::size_t>(std::max(dim, 0)), box_length)) {}

GridSpec::GridSpec(std::vector<int> points, std::vector<double> box_lengths)
    : points_(std::move(points)), box_lengths_(std::move(box_lengths)) {
  validate();
  size_ = 1;
  for (int n : points_) size_ *= static_cast<std::size_t>(n);
}

void GridSpec::validate() const {
  if (points_.size() != 2 && points_.size() != 3) {
    throw PreconditionError("GridSpec: dim must be 2 or 3, got " + std::to_string(points_.size()));
  }
  if (box_lengths_.size() != points_.size()) {
    throw PreconditionError("GridSpec: need one box length per axis");
  }
  for (int n : points_) {
    if (n < 8 || (n & (n - 1)) != 0) {
      throw PreconditionError("GridSpec: points per axis must be a power of two >= 8, got " +
                              std::to_string(n));
    }
  }
  for (double l : box_lengths_) {
    if (!(l > 0.0) || !std::isfinite(l)) {
      throw PreconditionError("GridSpec: box length must be positive and finite");
    }
  }
}

double GridSpec::cell_volume() const {
  double v = 1.0;
  for (int a = 0; a < dim(); ++a) v *= spacing(a);
  return v;
}

int GridSpec::min_points() const { return *std::min_element(points_.begin(), points_.end()); }

int GridSpec::wavenumber(int axis, int index) const {
  const int n = points(axis);
  return 2 * index <= n ? index : index - n;
}

double GridSpec::frequency(int axis, int index) const {
  return kTwoPi * wavenumber(axis, index) / box_length(axis);
}

GridSpec GridSpec::scaled(double factor) const {
  std::vector<double> lengths = box_lengths_;
  for (double& l : lengths) l *= factor;
  return GridSpec(points_, std::move(lengths));
}

namespace detail {

std::array<AxisTable, 3> axis_tables(const GridSpec& grid) {
  std::array<AxisTable, 3> t;
  for (int a = 0; a < 3; ++a) {
    auto& table = t[static_cast<std::size_t>(a)];
    if (a >= grid.dim()) {
      table.k = {0};
      table.xi = {0.0};
      table.xi_odd = {0.0};
      continue;
    }
    const int n = grid.points(a);
    table.k.resize(static_cast<std::size_t>(n));
    table.xi.resize(static_cast<std::size_t>(n));
    table.xi_odd.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const auto s = static_cast<std::size_t>(i);
      table.k[s] = grid.wavenumber(a, i);
      table.xi[s] = grid.frequency(a, i);
      table.xi_odd[s] = grid.is_nyquist(a, i) ? 0.0 : table.xi[s];
    }
  }
  return t;
}

}  // namespace detail

// -------------------------------------------------------------- MultiIndex

MultiIndex::MultiIndex(std::vector<int> components) : components_(std::move(components)) {
  for (int c : components_) {
    if (c < 0) throw PreconditionError("MultiIndex: components must be non-negative");
    order_ += c;
  }
}

MultiIndex MultiIndex::unit(int dim, int axis, int count) {
  std::vector<int> c(static_cast<std::size_t>(dim), 0);
  c.at(static_cast<std::size_t>(axis)) = count;
  return MultiIndex(std::move(c));
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  if (other.dim() != dim()) throw PreconditionError("MultiIndex: dimension mismatch");
  std::vector<int> c = components_;
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += other.components_[i];
  return MultiIndex(std::move(c));
}

namespace {

void enumerate_orders(int remaining, std::size_t axis, std::vector<int>& current,
                      std::vector<MultiIndex>& out) {
  if (axis + 1 == current.size()) {
    current[axis] = remaining;
    out.emplace_back(current);
    return;
  }
  for (int c = remaining; c >= 0; --c) {
    current[axis] = c;
    enumerate_orders(remaining - c, axis + 1, current, out);
  }
}

}  // namespace

std::vector<MultiIndex> multi_indices_of_order(int dim, int order) {
  if (dim < 1 || order < 0) throw PreconditionError("multi_indices_of_order: bad arguments");
  std::vector<MultiIndex> out;
  std::vector<int> current(static_cast<std::size_t>(dim), 0);
  enumerate_orders(order, 0, current, out);
  return out;
}

std::string to_string(const MultiIndex& alpha) {
  std::ostringstream os;
  os << '(';
  for (int a = 0; a < alpha.dim(); ++a) {
    if (a) os << ',';
    os << alpha[a];
  }
  os << ')';
  return os.str();
}

// ------------------------------------------------------------------ fields

Field::Field(GridSpec grid) : grid_(std::move(grid)), values_(grid_.size(), 0.0) {}

Field::Field(GridSpec grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw PreconditionError("Field: value count != grid size");
  if (!all_finite()) throw PreconditionError("Field: non-finite sample");
}

bool Field::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

VectorField::VectorField(GridSpec grid, int components) : grid_(std::move(grid)) {
  const int n = components < 0 ? grid_.dim() : components;
  components_.assign(static_cast<std::size_t>(n), Field(grid_));
}

VectorField::VectorField(std::vector<Field> components)
    : grid_(components.empty() ? throw PreconditionError("VectorField: no components")
                               : components.front().grid()),
      components_(std::move(components)) {
  for (const auto& c : components_) {
    if (!(c.grid() == grid_)) throw PreconditionError("VectorField: components on different grids");
  }
}

SpectralField::SpectralField(GridSpec grid) : grid_(std::move(grid)), coefficients_(grid_.size()) {}

SpectralField::SpectralField(GridSpec grid, std::vector<Complex> coefficients)
    : grid_(std::move(grid)), coefficients_(std::move(coefficients)) {
  if (coefficients_.size() != grid_.size()) {
    throw PreconditionError("SpectralField: coefficient count != grid size");
  }
}

// -------------------------------------------------------------- transforms

SpectralField forward_transform(const Field& f) {
  if (!f.all_finite()) throw PreconditionError("forward_transform: non-finite sample");
  std::vector<Complex> data(f.values().begin(), f.values().end());
  detail::FftPlan::for_grid(f.grid()).forward(data);
  const double scale = 1.0 / static_cast<double>(data.size());
  for (auto& c : data) c *= scale;
  return SpectralField(f.grid(), std::move(data));
}

Field inverse_transform(const SpectralField& s) {
  std::vector<Complex> data(s.coefficients().begin(), s.coefficients().end());
  detail::FftPlan::for_grid(s.grid()).backward(data);
  Field out(s.grid());
  auto v = out.values();
  for (std::size_t i = 0; i < data.size(); ++i) v[i] = data[i].real();
  return out;
}

SpectralVector forward_transform(const VectorField& u) {
  SpectralVector out;
  out.reserve(static_cast<std::size_t>(u.size()));
  for (const auto& c : u.components()) out.push_back(forward_transform(c));
  return out;
}

VectorField inverse_transform(std::span<const SpectralField> s) {
  std::vector<Field> comps;
  comps.reserve(s.size());
  for (const auto& c : s) comps.push_back(inverse_transform(c));
  return VectorField(std::move(comps));
}

std::size_t conjugate_index(const GridSpec& grid, std::size_t index) {
  std::size_t out = 0;
  std::size_t stride = 1;
  for (int a = grid.dim() - 1; a >= 0; --a) {
    const auto n = static_cast<std::size_t>(grid.points(a));
    const std::size_t i = index % n;
    index /= n;
    out += ((n - i) % n) * stride;
    stride *= n;
  }
  return out;
}

double hermitian_defect(const SpectralField& s) {
  double worst = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const std::size_t j = conjugate_index(s.grid(), i);
    worst = std::max(worst, std::abs(s[i] - std::conj(s[j])));
  }
  return worst;
}

// ------------------------------------------------------------- derivatives

namespace {

Complex derivative_symbol(const Mode& m, const MultiIndex& alpha) {
  Complex symbol{1.0, 0.0};
  for (int a = 0; a < alpha.dim(); ++a) {
    const int p = alpha[a];
    if (p == 0) continue;
    const auto s = static_cast<std::size_t>(a);
    const double xi = (p % 2 == 1) ? m.xi_odd[s] : m.xi[s];
    // (i xi)^p = xi^p * i^p
    Complex ip{1.0, 0.0};
    switch (p % 4) {
      case 1: ip = {0.0, 1.0}; break;
      case 2: ip = {-1.0, 0.0}; break;
      case 3: ip = {0.0, -1.0}; break;
      default: break;
    }
    symbol *= ip * std::pow(xi, p);
  }
  return symbol;
}

}  // namespace

void apply_derivative(SpectralField& s, const MultiIndex& alpha) {
  if (alpha.dim() != s.grid().dim()) throw PreconditionError("derivative: multi-index dimension mismatch");
  if (alpha.order() == 0) return;
  auto c = s.coefficients();
  for_each_mode(s.grid(), [&](const Mode& m) { c[m.index] *= derivative_symbol(m, alpha); });
}

Field derivative(const Field& f, const MultiIndex& alpha) {
  if (alpha.dim() != f.grid().dim()) throw PreconditionError("derivative: multi-index dimension mismatch");
  if (alpha.order() == 0) return f;
  auto s = forward_transform(f);
  apply_derivative(s, alpha);
  return inverse_transform(s);
}

VectorField derivative(const VectorField& u, const MultiIndex& alpha) {
  std::vector<Field> comps;
  comps.reserve(static_cast<std::size_t>(u.size()));
  for (const auto& c : u.components()) comps.push_back(derivative(c, alpha));
  return VectorField(std::move(comps));
}

// ------------------------------------------------------------------- norms

double max_norm(const Field& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

double max_norm(const VectorField& u) {
  const std::size_t n = u.grid().size();
  double m2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (const auto& c : u.components()) s += c[i] * c[i];
    m2 = std::max(m2, s);
  }
  return std::sqrt(m2);
}

double derivative_sup_norm(std::span<const SpectralField> spectrum, int order) {
  if (order < 0) throw PreconditionError("derivative_sup_norm: order must be >= 0");
  if (spectrum.empty()) return 0.0;
  const GridSpec& grid = spectrum.front().grid();
  const auto& plan = detail::FftPlan::for_grid(grid);
  const std::size_t n = grid.size();

  // Symbol tables per multi-index are recomputed per component; cheap next
  // to the transforms.
  std::vector<double> sum_sq(n);
  std::vector<Complex> work(n);
  double best = 0.0;
  for (const auto& alpha : multi_indices_of_order(grid.dim(), order)) {
    std::fill(sum_sq.begin(), sum_sq.end(), 0.0);
    for (const auto& comp : spectrum) {
      std::copy(comp.coefficients().begin(), comp.coefficients().end(), work.begin());
      if (order > 0) {
        for_each_mode(grid, [&](const Mode& m) { work[m.index] *= derivative_symbol(m, alpha); });
      }
      plan.backward(work);
      for (std::size_t i = 0; i < n; ++i) sum_sq[i] += work[i].real() * work[i].real();
    }
    best = std::max(best, *std::max_element(sum_sq.begin(), sum_sq.end()));
  }
  return std::sqrt(best);
}

double derivative_sup_norm(const VectorField& u, int order) {
  if (order == 0) return max_norm(u);
  const auto spectrum = forward_transform(u);
  return derivative_sup_norm(spectrum, order);
}

namespace {

SpectralField spectral_divergence(std::span<const SpectralField> s) {
  if (s.empty()) throw PreconditionError("divergence: empty vector field");
  const GridSpec& grid = s.front().grid();
  if (static_cast<int>(s.size()) != grid.dim()) {
    throw PreconditionError("divergence: component count must equal dimension");
  }
  SpectralField out(grid);
  auto o = out.coefficients();
  for_each_mode(grid, [&](const Mode& m) {
    Complex acc{0.0, 0.0};
    for (std::size_t a = 0; a < s.size(); ++a) acc += Complex(0.0, m.xi_odd[a]) * s[a][m.index];
    o[m.index] = acc;
  });
  return out;
}

}  // namespace

Field divergence(const VectorField& u) {
  const auto s = forward_transform(u);
  return inverse_transform(spectral_divergence(s));
}

double divergence_max_norm(std::span<const SpectralField> spectrum) {
  return max_norm(inverse_transform(spectral_divergence(spectrum)));
}

double divergence_max_norm(const VectorField& u) { return max_norm(divergence(u)); }

bool certify_divergence_free(VectorField& u, double tolerance) {
  const bool ok = u.size() == u.grid().dim() && divergence_max_norm(u) <= tolerance;
  u.set_divergence_free(ok);
  return ok;
}

// --------------------------------------------------------------- generators

VectorField taylor_green(const GridSpec& grid, double amplitude) {
  if (grid.dim() != 3) throw PreconditionError("taylor_green: requires dim = 3");
  for (int a = 0; a < 3; ++a) {
    if (std::abs(grid.box_length(a) - kTwoPi) > 1e-12) {
      throw PreconditionError("taylor_green: requires box length 2 pi on every axis");
    }
  }
  VectorField u(grid);
  for_each_point(grid, [&](std::size_t i, const std::array<double, 3>& x) {
    const double s1 = std::sin(x[0]), c1 = std::cos(x[0]);
    const double s2 = std::sin(x[1]), c2 = std::cos(x[1]);
    const double c3 = std::cos(x[2]);
    u[0][i] = amplitude * s1 * c2 * c3;
    u[1][i] = -amplitude * c1 * s2 * c3;
  });
  u.set_divergence_free(true);
  return u;
}

VectorField shear_mode(const GridSpec& grid, double amplitude) {
  VectorField u(grid);
  const double l = grid.box_length(1);
  for_each_point(grid, [&](std::size_t i, const std::array<double, 3>& x) {
    u[0][i] = amplitude * std::sin(kTwoPi * x[1] / l);
  });
  u.set_divergence_free(true);
  return u;
}

namespace {

SpectralVector random_spectrum(const GridSpec& grid, std::uint64_t seed, int band) {
  if (band < 0 || 2 * band >= grid.min_points()) {
    throw PreconditionError("random field: band must satisfy 0 <= band < N/2");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  SpectralVector out;
  for (int c = 0; c < grid.dim(); ++c) {
    SpectralField s(grid);
    auto coeff = s.coefficients();
    for_each_mode(grid, [&](const Mode& m) {
      bool inside = !m.is_zero();
      for (int a = 0; a < grid.dim(); ++a) inside = inside && std::abs(m.k[static_cast<std::size_t>(a)]) <= band;
      if (inside) {
        const double re = normal(rng);
        const double im = normal(rng);
        coeff[m.index] = {re, im};
      }
    });
    // Hermitian symmetrization: c(k) <- (c(k) + conj c(-k)) / 2.
    std::vector<Complex> sym(coeff.size());
    for (std::size_t i = 0; i < coeff.size(); ++i) {
      sym[i] = 0.5 * (coeff[i] + std::conj(coeff[conjugate_index(grid, i)]));
    }
    out.emplace_back(grid, std::move(sym));
  }
  return out;
}

VectorField rescale_to(VectorField u, double amplitude) {
  const double m = max_norm(u);
  if (m > 0.0) {
    const double f = amplitude / m;
    for (int c = 0; c < u.size(); ++c) {
      for (double& v : u[c].values()) v *= f;
    }
  }
  return u;
}

}  // namespace

VectorField random_band_limited(const GridSpec& grid, std::uint64_t seed, int band, double amplitude) {
  const auto s = random_spectrum(grid, seed, band);
  return rescale_to(inverse_transform(s), amplitude);
}

VectorField random_divergence_free(const GridSpec& grid, std::uint64_t seed, int band, double amplitude) {
  auto s = random_spectrum(grid, seed, band);
  apply_leray(s);
  auto u = rescale_to(inverse_transform(s), amplitude);
  u.set_divergence_free(true);
  return u;
}

VectorField scaled(const VectorField& u, double factor) {
  VectorField out = u;
  for (int c = 0; c < out.size(); ++c) {
    for (double& v : out[c].values()) v *= factor;
  }
  return out;
}

void set_worker_threads(int threads) { detail::set_fft_threads(threads); }

}  // namespace nskl
