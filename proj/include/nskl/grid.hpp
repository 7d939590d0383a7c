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

// Periodic grids, real fields and their spectral twins, derivatives and
// maximum norms. The whole space is modeled by the torus [0, L)^n.

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace nskl {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Raised when an input violates a documented precondition.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Uniform periodic grid on [0, L_1) x ... x [0, L_n), n in {2, 3}.
///
/// Samples are stored row-major: the last axis varies fastest. The
/// frequency lattice holds integer wavenumbers k with physical frequency
/// xi = 2 pi k / L; storage index i maps to k = i for i < N/2 and to
/// k = i - N above. The Nyquist index N/2 is reported as +N/2.
class GridSpec {
 public:
  GridSpec(int dim, int points, double box_length = kTwoPi);
  GridSpec(std::vector<int> points, std::vector<double> box_lengths);

  int dim() const noexcept { return static_cast<int>(points_.size()); }
  int points(int axis) const { return points_.at(static_cast<std::size_t>(axis)); }
  double box_length(int axis) const { return box_lengths_.at(static_cast<std::size_t>(axis)); }
  const std::vector<int>& shape() const noexcept { return points_; }
  const std::vector<double>& box_lengths() const noexcept { return box_lengths_; }

  std::size_t size() const noexcept { return size_; }
  double spacing(int axis) const { return box_length(axis) / points(axis); }
  double cell_volume() const;
  int min_points() const;

  int wavenumber(int axis, int index) const;
  bool is_nyquist(int axis, int index) const { return 2 * index == points(axis); }
  double frequency(int axis, int index) const;

  /// Same point counts, every box length multiplied by `factor`.
  GridSpec scaled(double factor) const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  void validate() const;

  std::vector<int> points_;
  std::vector<double> box_lengths_;
  std::size_t size_ = 0;
};

/// One lattice mode as seen by a Fourier multiplier. Axes beyond dim()
/// carry zeros. `xi_odd` has Nyquist components set to zero; symbols that
/// are odd in xi use it so that real fields stay real.
struct Mode {
  std::size_t index = 0;
  std::array<int, 3> k{};
  std::array<double, 3> xi{};
  std::array<double, 3> xi_odd{};
  double xi2 = 0.0;
  double xi2_odd = 0.0;

  bool is_zero() const noexcept { return k[0] == 0 && k[1] == 0 && k[2] == 0; }
};

namespace detail {
struct AxisTable {
  std::vector<int> k;
  std::vector<double> xi;
  std::vector<double> xi_odd;
};
std::array<AxisTable, 3> axis_tables(const GridSpec& grid);
}  // namespace detail

/// Calls fn(const Mode&) for every lattice mode in storage order.
template <class Fn>
void for_each_mode(const GridSpec& grid, Fn&& fn) {
  const auto tables = detail::axis_tables(grid);
  const std::size_t n0 = tables[0].k.size();
  const std::size_t n1 = tables[1].k.size();
  const std::size_t n2 = tables[2].k.size();
  Mode m;
  for (std::size_t a = 0; a < n0; ++a) {
    m.k[0] = tables[0].k[a];
    m.xi[0] = tables[0].xi[a];
    m.xi_odd[0] = tables[0].xi_odd[a];
    for (std::size_t b = 0; b < n1; ++b) {
      m.k[1] = tables[1].k[b];
      m.xi[1] = tables[1].xi[b];
      m.xi_odd[1] = tables[1].xi_odd[b];
      for (std::size_t c = 0; c < n2; ++c) {
        m.k[2] = tables[2].k[c];
        m.xi[2] = tables[2].xi[c];
        m.xi_odd[2] = tables[2].xi_odd[c];
        m.xi2 = m.xi[0] * m.xi[0] + m.xi[1] * m.xi[1] + m.xi[2] * m.xi[2];
        m.xi2_odd = m.xi_odd[0] * m.xi_odd[0] + m.xi_odd[1] * m.xi_odd[1] +
                    m.xi_odd[2] * m.xi_odd[2];
        fn(static_cast<const Mode&>(m));
        ++m.index;
      }
    }
  }
}

/// Calls fn(index, x) for every grid point, x the physical coordinate
/// (unused axes zero).
template <class Fn>
void for_each_point(const GridSpec& grid, Fn&& fn) {
  std::array<std::size_t, 3> n{1, 1, 1};
  std::array<double, 3> h{0.0, 0.0, 0.0};
  for (int a = 0; a < grid.dim(); ++a) {
    n[static_cast<std::size_t>(a)] = static_cast<std::size_t>(grid.points(a));
    h[static_cast<std::size_t>(a)] = grid.spacing(a);
  }
  std::size_t index = 0;
  std::array<double, 3> x{};
  for (std::size_t a = 0; a < n[0]; ++a) {
    x[0] = static_cast<double>(a) * h[0];
    for (std::size_t b = 0; b < n[1]; ++b) {
      x[1] = static_cast<double>(b) * h[1];
      for (std::size_t c = 0; c < n[2]; ++c) {
        x[2] = static_cast<double>(c) * h[2];
        fn(index++, static_cast<const std::array<double, 3>&>(x));
      }
    }
  }
}

/// Derivative order alpha = (alpha_1, ..., alpha_n).
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> components);

  static MultiIndex zero(int dim) { return MultiIndex(std::vector<int>(static_cast<std::size_t>(dim), 0)); }
  static MultiIndex unit(int dim, int axis, int count = 1);

  int dim() const noexcept { return static_cast<int>(components_.size()); }
  int order() const noexcept { return order_; }
  int operator[](int axis) const { return components_.at(static_cast<std::size_t>(axis)); }
  const std::vector<int>& components() const noexcept { return components_; }

  MultiIndex operator+(const MultiIndex& other) const;
  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<int> components_;
  int order_ = 0;
};

/// All multi-indices of the given order in dim variables, lexicographically
/// descending in the first component. There are C(order + dim - 1, dim - 1).
std::vector<MultiIndex> multi_indices_of_order(int dim, int order);

/// "(1,0,2)"
std::string to_string(const MultiIndex& alpha);

/// Real samples of a scalar field.
class Field {
 public:
  explicit Field(GridSpec grid);
  Field(GridSpec grid, std::vector<double> values);

  const GridSpec& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  bool all_finite() const;

 private:
  GridSpec grid_;
  std::vector<double> values_;
};

/// A vector field: one Field per component on a shared grid.
///
/// The divergence-free flag is only ever set through
/// certify_divergence_free or by operations whose output is divergence
/// free by construction.
class VectorField {
 public:
  /// Zero field with `components` components (default: grid dimension).
  explicit VectorField(GridSpec grid, int components = -1);
  explicit VectorField(std::vector<Field> components);

  const GridSpec& grid() const noexcept { return grid_; }
  int size() const noexcept { return static_cast<int>(components_.size()); }
  const Field& operator[](int i) const { return components_.at(static_cast<std::size_t>(i)); }
  Field& operator[](int i) { return components_.at(static_cast<std::size_t>(i)); }
  const std::vector<Field>& components() const noexcept { return components_; }

  bool divergence_free() const noexcept { return divergence_free_; }
  void set_divergence_free(bool flag) noexcept { divergence_free_ = flag; }

 private:
  GridSpec grid_;
  std::vector<Field> components_;
  bool divergence_free_ = false;
};

/// Fourier coefficients of a real field, normalized so that the zero mode
/// is the mean.
class SpectralField {
 public:
  explicit SpectralField(GridSpec grid);
  SpectralField(GridSpec grid, std::vector<Complex> coefficients);

  const GridSpec& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return coefficients_.size(); }
  std::span<const Complex> coefficients() const noexcept { return coefficients_; }
  std::span<Complex> coefficients() noexcept { return coefficients_; }
  Complex operator[](std::size_t i) const { return coefficients_[i]; }
  Complex& operator[](std::size_t i) { return coefficients_[i]; }

 private:
  GridSpec grid_;
  std::vector<Complex> coefficients_;
};

using SpectralVector = std::vector<SpectralField>;

SpectralField forward_transform(const Field& f);
Field inverse_transform(const SpectralField& s);
SpectralVector forward_transform(const VectorField& u);
VectorField inverse_transform(std::span<const SpectralField> s);

/// Storage index of the mode -k for the mode stored at `index`.
std::size_t conjugate_index(const GridSpec& grid, std::size_t index);

/// max_k |c(k) - conj(c(-k))|; zero for spectra of real fields.
double hermitian_defect(const SpectralField& s);

/// Multiplies by prod_j (i xi_j)^{alpha_j}.
void apply_derivative(SpectralField& s, const MultiIndex& alpha);
Field derivative(const Field& f, const MultiIndex& alpha);
VectorField derivative(const VectorField& u, const MultiIndex& alpha);

double max_norm(const Field& f);
/// Grid maximum of the pointwise Euclidean norm.
double max_norm(const VectorField& u);

/// max over |alpha| = order of max_norm(D^alpha u).
double derivative_sup_norm(const VectorField& u, int order);
double derivative_sup_norm(std::span<const SpectralField> spectrum, int order);

/// Spectral divergence sum_j D_j u_j, as a real field.
Field divergence(const VectorField& u);
double divergence_max_norm(const VectorField& u);
double divergence_max_norm(std::span<const SpectralField> spectrum);

/// Sets the divergence-free flag iff the spectral divergence is within
/// `tolerance` in max norm. Returns the flag.
bool certify_divergence_free(VectorField& u, double tolerance = 1e-10);

/// A (sin x1 cos x2 cos x3, -cos x1 sin x2 cos x3, 0) on the 2 pi torus.
VectorField taylor_green(const GridSpec& grid, double amplitude);

/// (A sin x2, 0, ...): a steady shear direction with vanishing advection.
VectorField shear_mode(const GridSpec& grid, double amplitude);

/// Zero-mean field with random coefficients on max_j |k_j| <= band,
/// rescaled to max_norm == amplitude. Deterministic per seed.
VectorField random_band_limited(const GridSpec& grid, std::uint64_t seed, int band, double amplitude);

/// As random_band_limited, Leray-projected before the rescale.
VectorField random_divergence_free(const GridSpec& grid, std::uint64_t seed, int band, double amplitude);

/// Multiplies every sample by `factor` (keeps the divergence flag).
VectorField scaled(const VectorField& u, double factor);

/// Worker threads used by the FFT backend (>= 1). Call before the first
/// transform; changing it drops every cached plan.
void set_worker_threads(int threads);

}  // namespace nskl
