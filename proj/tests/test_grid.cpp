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

#include <cmath>

#include "doctest.h"
#include "nskl/grid.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace nskl;
using testutil::Point;

TEST_CASE("grid spec validation") {
  CHECK_THROWS_AS(GridSpec(4, 16), PreconditionError);
  CHECK_THROWS_AS(GridSpec(1, 16), PreconditionError);
  CHECK_THROWS_AS(GridSpec(3, 12), PreconditionError);
  CHECK_THROWS_AS(GridSpec(3, 4), PreconditionError);
  CHECK_THROWS_AS(GridSpec(2, 16, 0.0), PreconditionError);
  CHECK_THROWS_AS(GridSpec(2, 16, -1.0), PreconditionError);
  CHECK_THROWS_AS(GridSpec({8, 16}, {1.0}), PreconditionError);

  const GridSpec g({8, 16}, {1.0, 2.0});
  CHECK(g.size() == 128);
  CHECK(g.spacing(1) == doctest::Approx(0.125));
  CHECK(g.cell_volume() == doctest::Approx(0.125 * 0.125));
  CHECK(g.min_points() == 8);
  CHECK(g.scaled(0.5).box_length(1) == doctest::Approx(1.0));
}

TEST_CASE("wavenumber layout puts Nyquist at +N/2") {
  const GridSpec g(2, 8);
  const int expected[8] = {0, 1, 2, 3, 4, -3, -2, -1};
  for (int i = 0; i < 8; ++i) CHECK(g.wavenumber(0, i) == expected[i]);
  CHECK(g.is_nyquist(0, 4));
  CHECK(g.frequency(1, 7) == doctest::Approx(-1.0));
  CHECK(GridSpec(2, 8, 1.0).frequency(0, 1) == doctest::Approx(kTwoPi));
}

TEST_CASE("forward transform matches a naive DFT normalized to the mean") {
  const GridSpec g({8, 16}, {kTwoPi, 3.0});
  const Field f = testutil::noise(g, 7);
  const auto s = forward_transform(f);
  const auto ref = oracle::naive_dft_2d(f);
  double err = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) err = std::max(err, std::abs(s.coefficients()[i] - ref[i]));
  CHECK(err < 1e-13);

  double mean = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) mean += f[i];
  CHECK(s.coefficients()[0].real() == doctest::Approx(mean / double(f.size())).epsilon(1e-12));
}

TEST_CASE("transform round trip and Hermitian symmetry") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const GridSpec g(3, 16);
    const Field f = testutil::noise(g, seed);
    const auto s = forward_transform(f);
    CHECK(hermitian_defect(s) < 1e-14);
    CHECK(testutil::max_abs_diff(inverse_transform(s), f) < 1e-13);
  }
}

TEST_CASE("spectral derivatives of trigonometric fields") {
  const GridSpec g(3, 16);
  const Field f = testutil::field_from(g, [](const Point& x) { return std::sin(x[0]) * std::sin(2.0 * x[1]); });
  const Field dx = derivative(f, MultiIndex({1, 0, 0}));
  const Field dxy = derivative(f, MultiIndex({1, 1, 0}));
  const Field dyy = derivative(f, MultiIndex({0, 2, 0}));
  CHECK(testutil::max_abs_diff(dx, testutil::field_from(g, [](const Point& x) {
          return std::cos(x[0]) * std::sin(2.0 * x[1]);
        })) < 1e-12);
  CHECK(testutil::max_abs_diff(dxy, testutil::field_from(g, [](const Point& x) {
          return 2.0 * std::cos(x[0]) * std::cos(2.0 * x[1]);
        })) < 1e-12);
  CHECK(testutil::max_abs_diff(dyy, testutil::field_from(g, [](const Point& x) {
          return -4.0 * std::sin(x[0]) * std::sin(2.0 * x[1]);
        })) < 1e-12);

  // On a box of length L the frequency is 2 pi k / L.
  const GridSpec h(2, 16, 3.0);
  const Field s = testutil::field_from(h, [](const Point& x) { return std::sin(kTwoPi * x[1] / 3.0); });
  CHECK(testutil::max_abs_diff(derivative(s, MultiIndex({0, 1})), testutil::field_from(h, [](const Point& x) {
          return kTwoPi / 3.0 * std::cos(kTwoPi * x[1] / 3.0);
        })) < 1e-12);
}

TEST_CASE("odd derivatives drop the Nyquist mode; even ones keep it") {
  const GridSpec g(2, 8);
  const Field f = testutil::field_from(g, [](const Point& x) { return std::cos(4.0 * x[0]); });
  CHECK(max_norm(derivative(f, MultiIndex({1, 0}))) < 1e-14);
  CHECK(testutil::max_abs_diff(derivative(f, MultiIndex({2, 0})), testutil::field_from(g, [](const Point& x) {
          return -16.0 * std::cos(4.0 * x[0]);
        })) < 1e-12);
}

TEST_CASE("max norm is the pointwise Euclidean norm") {
  const GridSpec g(3, 8);
  const auto u = testutil::vector_from(g, {[](const Point&) { return 3.0; }, [](const Point&) { return -4.0; },
                                           [](const Point&) { return 0.0; }});
  CHECK(max_norm(u) == doctest::Approx(5.0));
  CHECK(derivative_sup_norm(u, 0) == doctest::Approx(5.0));
  CHECK(derivative_sup_norm(u, 1) < 1e-14);
}

TEST_CASE("derivative_sup_norm maximizes over multi-indices of the order") {
  const GridSpec g(3, 16);
  const auto u = testutil::vector_from(g, {[](const Point& x) { return std::sin(3.0 * x[1]); },
                                           [](const Point&) { return 0.0; }, [](const Point&) { return 0.0; }});
  CHECK(derivative_sup_norm(u, 1) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(derivative_sup_norm(u, 2) == doctest::Approx(9.0).epsilon(1e-12));
  CHECK(derivative_sup_norm(forward_transform(u), 3) == doctest::Approx(27.0).epsilon(1e-12));
}

TEST_CASE("multi-index enumeration") {
  CHECK(multi_indices_of_order(3, 0).size() == 1);
  CHECK(multi_indices_of_order(3, 1).size() == 3);
  CHECK(multi_indices_of_order(3, 2).size() == 6);
  CHECK(multi_indices_of_order(3, 3).size() == 10);
  CHECK(multi_indices_of_order(1, 4).size() == 1);
  for (const auto& a : multi_indices_of_order(3, 3)) CHECK(a.order() == 3);
  CHECK(to_string(MultiIndex({1, 0, 2})) == "(1,0,2)");
  CHECK(multi_indices_of_order(2, 1).front() == MultiIndex({1, 0}));
  CHECK(MultiIndex::unit(3, 2, 2) == MultiIndex({0, 0, 2}));
  CHECK((MultiIndex({1, 0}) + MultiIndex({0, 1})).order() == 2);
  CHECK_THROWS_AS(MultiIndex({1, -1}), PreconditionError);
}

TEST_CASE("field construction rejects non-finite or mis-sized data") {
  const GridSpec g(2, 8);
  CHECK_THROWS_AS(Field(g, std::vector<double>(10)), PreconditionError);
  std::vector<double> v(g.size(), 0.0);
  v[3] = std::nan("");
  CHECK_THROWS_AS(Field(g, v), PreconditionError);
  CHECK_THROWS_AS(VectorField(std::vector<Field>{}), PreconditionError);
  CHECK_THROWS_AS(VectorField(std::vector<Field>{Field(g), Field(GridSpec(2, 16))}), PreconditionError);
}

TEST_CASE("divergence and certification") {
  VectorField tg = taylor_green(GridSpec(3, 16), 1.0);
  CHECK(tg.divergence_free());
  CHECK(divergence_max_norm(tg) < 1e-13);

  const GridSpec g(3, 16);
  auto compressible = testutil::vector_from(g, {[](const Point& x) { return std::sin(x[0]); },
                                                [](const Point&) { return 0.0; }, [](const Point&) { return 0.0; }});
  CHECK(divergence_max_norm(compressible) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_FALSE(certify_divergence_free(compressible));
  CHECK_FALSE(compressible.divergence_free());

  auto solenoidal = testutil::vector_from(g, {[](const Point& x) { return std::sin(x[1]); },
                                              [](const Point&) { return 0.0; }, [](const Point&) { return 0.0; }});
  CHECK(certify_divergence_free(solenoidal));
  CHECK(solenoidal.divergence_free());
}

TEST_CASE("generators") {
  CHECK_THROWS_AS(taylor_green(GridSpec(2, 16), 1.0), PreconditionError);
  CHECK_THROWS_AS(taylor_green(GridSpec(3, 16, 1.0), 1.0), PreconditionError);
  CHECK(max_norm(taylor_green(GridSpec(3, 16), 2.5)) == doctest::Approx(2.5).epsilon(1e-12));

  const auto shear = shear_mode(GridSpec(2, 16, 3.0), 1.5);
  CHECK(shear.divergence_free());
  CHECK(max_norm(shear) == doctest::Approx(1.5).epsilon(1e-2));

  const GridSpec g(3, 16);
  const auto a = random_divergence_free(g, 11, 3, 2.0);
  const auto b = random_divergence_free(g, 11, 3, 2.0);
  const auto c = random_divergence_free(g, 12, 3, 2.0);
  CHECK(a.divergence_free());
  CHECK(divergence_max_norm(a) < 1e-12);
  CHECK(max_norm(a) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(testutil::max_abs_diff(a, b) == 0.0);
  CHECK(testutil::max_abs_diff(a, c) > 1e-3);

  const auto r = random_band_limited(g, 5, 4, 1.0);
  CHECK(max_norm(r) == doctest::Approx(1.0).epsilon(1e-12));
  const auto spec = forward_transform(r);
  double mean = 0.0;
  for (const auto& s : spec) mean = std::max(mean, std::abs(s.coefficients()[0]));
  CHECK(mean < 1e-15);
  CHECK_THROWS_AS(random_band_limited(g, 5, 8, 1.0), PreconditionError);

  CHECK(max_norm(scaled(a, -3.0)) == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(scaled(a, -3.0).divergence_free());
}
