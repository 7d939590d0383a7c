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
#include "nskl/dynamics.hpp"
#include "nskl/multipliers.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace nskl;
using testutil::Point;

namespace {

SolverConfig config(double dt, double T, int stride = 1) {
  SolverConfig c;
  c.dt = dt;
  c.T = T;
  c.snapshot_stride = stride;
  return c;
}

VectorField burgers_datum(const GridSpec& g, double A, double t) {
  return testutil::vector_from(g, {[=](const Point& x) { return oracle::burgers(A, x[1], t); },
                                   [](const Point&) { return 0.0; }});
}

VectorField difference(const VectorField& a, const VectorField& b) {
  VectorField d = a;
  for (int c = 0; c < d.size(); ++c) {
    for (std::size_t i = 0; i < d[c].size(); ++i) d[c][i] -= b[c][i];
  }
  return d;
}

}  // namespace

TEST_CASE("solver config validation and step count") {
  CHECK_THROWS_AS(config(0.2, 0.1).validate(), PreconditionError);
  CHECK_THROWS_AS(config(0.0, 0.1).validate(), PreconditionError);
  CHECK_THROWS_AS(config(0.01, 0.1, 0).validate(), PreconditionError);
  CHECK(config(0.01, 0.1).steps() == 10);
  CHECK(config(0.03, 0.1).steps() == 4);
  CHECK(config(0.1, 0.1).steps() == 1);
}

TEST_CASE("phi functions: series and closed form agree across the switch") {
  CHECK(EtdRk2::phi1(0.0) == 1.0);
  CHECK(EtdRk2::phi2(0.0) == 0.5);
  for (double z : {-0.99e-4, -1.01e-4, 1.01e-4, -0.5, -3.0, -40.0}) {
    CHECK(EtdRk2::phi1(z) == doctest::Approx(std::expm1(z) / z).epsilon(1e-12));
    CHECK(EtdRk2::phi2(z) == doctest::Approx((std::expm1(z) - z) / (z * z)).epsilon(1e-7));
  }
}

TEST_CASE("quadratic forms") {
  const auto sq = QuadraticForm::squares(3, 0);
  CHECK(sq.constant() == 1.0);
  const double u[3] = {1.0, -2.0, 3.0};
  const auto g = sq.evaluate(u);
  CHECK(g == std::vector<double>{1.0, 4.0, 9.0});

  std::vector<double> a(8, 0.0);
  a[0 * 4 + 0 * 2 + 1] = 2.0;  // g_0 = 2 u_0 u_1
  a[1 * 4 + 1 * 2 + 1] = -0.5;
  a[1 * 4 + 0 * 2 + 0] = 1.0;  // g_1 = u_0^2 - u_1^2 / 2
  const QuadraticForm q(2, a, 1);
  CHECK(q.constant() == 2.0);
  CHECK(q.direction() == 1);
  CHECK(q.coefficient(1, 1, 1) == -0.5);
  CHECK_THROWS_AS(QuadraticForm(2, std::vector<double>(7), 0), PreconditionError);
  CHECK_THROWS_AS(QuadraticForm(2, a, 2), PreconditionError);
  a[0] = std::nan("");
  CHECK_THROWS_AS(QuadraticForm(2, a, 0), PreconditionError);
}

TEST_CASE("zero datum stays zero") {
  const GridSpec g(3, 16);
  VectorField zero(g);
  REQUIRE(certify_divergence_free(zero));
  const auto traj = simulate_nse(zero, config(0.01, 0.05));
  CHECK(traj.times.front() == 0.0);
  CHECK(traj.snapshots.size() == 6);
  for (const auto& s : traj.snapshots) CHECK(max_norm(s) == 0.0);
  CHECK_FALSE(traj.blew_up());
  CHECK(max_norm(etd_step(zero, 0.1, navier_stokes_nonlinearity())) == 0.0);
}

TEST_CASE("without nonlinearity the step is the exact heat flow") {
  const GridSpec g(3, 16);
  const VectorField f = random_band_limited(g, 3, 5, 1.0);
  const VectorField u = etd_step(f, 0.37, zero_nonlinearity());
  CHECK(testutil::max_abs_diff(u, heat_semigroup(f, 0.37)) < 1e-15);
  CHECK_THROWS_AS(etd_step(f, 0.0, zero_nonlinearity()), PreconditionError);
}

TEST_CASE("shear mode decays as e^{-t} under Navier-Stokes") {
  const GridSpec g(3, 16);
  const VectorField f = shear_mode(g, 1.0);
  const auto traj = simulate_nse(f, config(0.05, 1.0, 5));
  for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
    CHECK(testutil::max_abs_diff(traj.snapshots[k], scaled(f, std::exp(-traj.times[k]))) < 1e-13);
  }
}

TEST_CASE("2-d Taylor-Green is an exact solution with decay e^{-2t}") {
  const GridSpec g(2, 16);
  VectorField f = testutil::taylor_green_2d(g, 1.0);
  REQUIRE(certify_divergence_free(f));
  const auto traj = simulate_nse(f, config(0.1, 1.0, 2));
  for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
    CHECK(testutil::max_abs_diff(traj.snapshots[k], scaled(f, std::exp(-2.0 * traj.times[k]))) < 1e-13);
  }
}

TEST_CASE("simulate_nse rejects compressible data") {
  const GridSpec g(3, 16);
  const auto f = testutil::vector_from(g, {[](const Point& x) { return std::sin(x[0]); },
                                           [](const Point&) { return 0.0; }, [](const Point&) { return 0.0; }});
  CHECK_THROWS_AS(simulate_nse(f, config(0.01, 0.1)), PreconditionError);
}

TEST_CASE("small-amplitude Taylor-Green departs from heat flow at second order") {
  const GridSpec g(3, 16);
  std::vector<double> eps{1e-2, 1e-3, 1e-4};
  std::vector<double> dev;
  for (double e : eps) {
    const VectorField f = taylor_green(g, e);
    const auto traj = simulate_nse(f, config(0.01, 0.1, 10));
    dev.push_back(testutil::max_abs_diff(traj.snapshots.back(), heat_semigroup(f, 0.1)));
  }
  // Least-squares slope of log(dev) against log(eps).
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    mx += std::log(eps[i]) / 3.0;
    my += std::log(dev[i]) / 3.0;
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    sxy += (std::log(eps[i]) - mx) * (std::log(dev[i]) - my);
    sxx += (std::log(eps[i]) - mx) * (std::log(eps[i]) - mx);
  }
  CHECK(sxy / sxx == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("Taylor-Green step halving shows second order") {
  const GridSpec g(3, 16);
  const VectorField f = taylor_green(g, 1.0);
  const double T = 0.5;
  const auto a = simulate_nse(f, config(0.05, T, 100)).snapshots.back();
  const auto b = simulate_nse(f, config(0.025, T, 100)).snapshots.back();
  const auto c = simulate_nse(f, config(0.0125, T, 100)).snapshots.back();
  const double ratio = testutil::max_abs_diff(a, b) / testutil::max_abs_diff(b, c);
  CHECK(ratio == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("invariants along a Navier-Stokes trajectory") {
  const GridSpec g(3, 16);
  VectorField f = random_divergence_free(g, 5, 3, 1.0);
  // A constant mean flow is divergence free and must be preserved.
  for (std::size_t i = 0; i < f[0].size(); ++i) f[0][i] += 0.3;
  REQUIRE(certify_divergence_free(f));
  const auto traj = simulate_nse(f, config(0.01, 0.2, 4));
  const Complex mean0 = forward_transform(f)[0].coefficients()[0];
  for (const auto& s : traj.snapshots) {
    CHECK(s.divergence_free());
    CHECK(divergence_max_norm(s) <= 1e-10);
    const auto spec = forward_transform(s);
    CHECK(std::abs(spec[0].coefficients()[0] - mean0) < 1e-14);
    CHECK(testutil::max_abs_diff(nonlinear_advective(s), nonlinear_divergence(s)) <= 1e-9);
  }
  CHECK(traj.times.back() == 0.2);
  CHECK(testutil::max_abs_diff(traj.snapshots.front(), f) == 0.0);
}

TEST_CASE("illustrative system: g = (u_1^2, 0, 0), D_1, f = (sin x_1, 0, 0) is pure heat flow") {
  const GridSpec g(3, 16);
  const auto f = testutil::vector_from(g, {[](const Point& x) { return std::sin(x[0]); },
                                           [](const Point&) { return 0.0; }, [](const Point&) { return 0.0; }});
  std::vector<double> a(27, 0.0);
  a[0] = 1.0;
  const QuadraticForm q(3, a, 0);
  const auto traj = simulate_illustrative(f, q, config(0.01, 0.1));
  CHECK(testutil::max_abs_diff(traj.snapshots.back(), heat_semigroup(f, 0.1)) < 1e-14);
}

TEST_CASE("illustrative system reduces to viscous Burgers: one step is third-order accurate") {
  // u = (a(y), 0), g = squares, D along y: a_t = a_yy + 2 a a_y.
  const GridSpec g(2, 32);
  const auto q = QuadraticForm::squares(2, 1);
  const VectorField f = burgers_datum(g, 1.0, 0.0);
  std::vector<double> err;
  for (double dt : {0.02, 0.01, 0.005}) {
    const VectorField u = etd_step(f, dt, illustrative_nonlinearity(q));
    err.push_back(testutil::max_abs_diff(u, burgers_datum(g, 1.0, dt)));
  }
  CHECK(err[0] / err[1] == doctest::Approx(8.0).epsilon(0.25));
  CHECK(err[1] / err[2] == doctest::Approx(8.0).epsilon(0.25));

  const auto traj = simulate_illustrative(f, q, config(0.005, 0.5, 100));
  CHECK(testutil::max_abs_diff(traj.snapshots.back(), burgers_datum(g, 1.0, 0.5)) < 1e-5);
}

TEST_CASE("illustrative snapshots respect |g(u)| <= C_g |u|^2") {
  const GridSpec g(3, 16);
  const VectorField f = random_band_limited(g, 8, 3, 1.0);
  const auto q = QuadraticForm::squares(3, 2);
  const auto traj = simulate_illustrative(f, q, config(0.01, 0.1, 2));
  for (const auto& s : traj.snapshots) {
    const double u = max_norm(s);
    for (std::size_t i = 0; i < s[0].size(); ++i) {
      const double point[3] = {s[0][i], s[1][i], s[2][i]};
      for (double gm : q.evaluate(point)) CHECK(std::abs(gm) <= q.constant() * u * u * (1 + 1e-12));
    }
  }
}

TEST_CASE("blow-up detection truncates the trajectory") {
  const GridSpec g(2, 16);
  const VectorField f = shear_mode(g, 1.0);
  Nonlinearity growth = [](std::span<const SpectralField> u) {
    SpectralVector out(u.begin(), u.end());
    for (auto& c : out) {
      for (auto& v : c.coefficients()) v *= 1e3;
    }
    return out;
  };
  const auto traj = simulate(f, config(1e-3, 0.1), growth, false);
  REQUIRE(traj.blew_up());
  CHECK(*traj.blowup_time < 0.1);
  CHECK(traj.times.back() < *traj.blowup_time);
  for (const auto& s : traj.snapshots) CHECK(max_norm(s) <= 1e6);
}

TEST_CASE("Picard iteration") {
  const GridSpec g(3, 16);
  VectorField zero(g);
  REQUIRE(certify_divergence_free(zero));
  const auto z = picard_iterate(zero, 0.05, 8, 10);
  CHECK(z.residuals.size() == 1);
  CHECK(z.converged);
  CHECK(max_norm(z.solution) == 0.0);

  const VectorField f = taylor_green(g, 1.0);
  CHECK_THROWS_AS(picard_iterate(f, 0.06, 16, 10), PreconditionError);
  CHECK_THROWS_AS(picard_iterate(f, 0.05, 4, 10), PreconditionError);

  const auto p = picard_iterate(f, 0.05, 32, 30);
  CHECK(p.converged);
  CHECK(p.contracting);
  REQUIRE(p.node_times.size() == 33);
  CHECK(p.node_times[16] == doctest::Approx(0.05 * 0.25));
  for (std::size_t k = 1; k < p.residuals.size(); ++k) {
    if (p.residuals[k - 1] > 1e-11) CHECK(p.residuals[k] / p.residuals[k - 1] <= 0.8);
  }
  const auto ref = simulate_nse(f, config(0.05 / 400, 0.05, 400)).snapshots.back();
  CHECK(max_norm(difference(p.solution, ref)) < 1e-6);
}
