// Copyright 2026 The machlimit Authors
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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "machlimit/acoustic.hpp"
#include "machlimit/errors.hpp"
#include "machlimit/spectral.hpp"
#include "machlimit/transport.hpp"

using namespace machlimit;
using std::numbers::pi;

namespace {

const GasModel kGas = GasModel::fn_degenerate();
const ReferenceState kRef = linearization_coefficients(kGas, 1.0, 1.0);

ScalarField gauss(const Grid& g, double cx, double cy, double w) {
  return ScalarField::from_function(g, [&](auto& x) {
    return std::exp(-((x[0] - cx) * (x[0] - cx) + (x[1] - cy) * (x[1] - cy)) / (2 * w * w));
  });
}

// Φ(t, x) = A sin(2t) cos x cos y on the 2π-box.
ScalarField manufactured_phi(const Grid& g, double t) {
  const double a = 0.5 * std::sin(2.0 * t);
  return ScalarField::from_function(g, [&](auto& x) { return a * std::cos(x[0]) * std::cos(x[1]); });
}

double balance_residual(double dt, double t_final, kernels::InterpOrder order) {
  const Grid g(2, 128, 2 * pi);
  TransportOptions opts;
  opts.order = order;
  TransportState s{ScalarField::from_function(g, [](auto& x) { return std::exp(std::cos(x[0]) + 0.5 * std::sin(x[1])); }), 0.0};
  std::vector<TransportState> hist{s};
  std::vector<ScalarField> phis{manufactured_phi(g, 0.0)};
  const int steps = static_cast<int>(std::lround(t_final / dt));
  for (int i = 0; i < steps; ++i) {
    const ScalarField phi_mid = manufactured_phi(g, (i + 0.5) * dt);
    s = transport_step(s, grad(phi_mid), laplacian(phi_mid), dt, opts);
    s.t = (i + 1) * dt;
    hist.push_back(s);
    phis.push_back(manufactured_phi(g, s.t));
  }
  return l2_balance_residual(hist, phis);
}

}  // namespace

TEST_CASE("zero velocity leaves W unchanged") {
  const Grid g(2, 32, 8.0);
  const TransportState s{gauss(g, 4, 4, 1), 0.0};
  const TransportState t = transport_step(s, VectorField(g), ScalarField(g), 0.1);
  CHECK((t.W - s.W).max_abs() < 1e-15);
  CHECK(t.t == doctest::Approx(0.1));
}

TEST_CASE("constant velocity shifts the data") {
  auto error = [](int n) {
    const Grid g(2, n, 10.0);
    const double c[2] = {0.7, -0.4};
    VectorField U(g);
    U[0] = ScalarField(g, c[0]);
    U[1] = ScalarField(g, c[1]);
    TransportState s{gauss(g, 5, 5, 1), 0.0};
    const double dt = 0.5 * g.dx();
    const int steps = static_cast<int>(std::lround(1.0 / dt));
    for (int i = 0; i < steps; ++i) s = transport_step(s, U, ScalarField(g), dt);
    const double t = steps * dt;
    const ScalarField exact = gauss(g, 5 + c[0] * t, 5 + c[1] * t, 1);
    return (s.W - exact).max_abs();
  };
  const double e1 = error(32), e2 = error(64);
  CHECK(e2 < 1e-3);
  CHECK(std::log2(e1 / e2) >= 2.0);
}

TEST_CASE("bounded transport keeps nonnegative data nonnegative") {
  const Grid g(2, 32, 8.0);
  TransportOptions opts;
  opts.bounded = true;
  VectorField U(g);
  U[0] = ScalarField::from_function(g, [](auto& x) { return std::sin(x[1]); });
  TransportState s{gauss(g, 4, 4, 0.3), 0.0};
  for (int i = 0; i < 20; ++i) s = transport_step(s, U, ScalarField(g), 0.1, opts);
  CHECK(s.W.min() >= -1e-10);
  VectorField fast = U;
  fast *= 100.0;
  CHECK_THROWS_AS(transport_step(s, fast, ScalarField(g), 0.1, opts), CflError);
}

TEST_CASE("L2 balance with a solenoidal velocity") {
  const Grid g(2, 64, 2 * pi);
  VectorField U(g);
  U[0] = ScalarField::from_function(g, [](auto& x) { return std::sin(x[1]); });
  TransportOptions opts;
  opts.order = kernels::InterpOrder::Quintic;
  TransportState s{ScalarField::from_function(g, [](auto& x) { return std::cos(x[0]); }), 0.0};
  std::vector<TransportState> hist{s};
  std::vector<ScalarField> phis{ScalarField(g)};
  const double dt = 1e-3;
  for (int i = 0; i < 1000; ++i) {
    s = transport_step(s, U, ScalarField(g), dt, opts);
    hist.push_back(s);
    phis.push_back(ScalarField(g));
  }
  CHECK(l2_balance_residual(hist, phis) < 1e-6);

  const std::vector<TransportState> zero(4, TransportState{ScalarField(g), 0.0});
  std::vector<TransportState> zt = zero;
  for (int i = 0; i < 4; ++i) zt[i].t = 0.1 * i;
  CHECK(l2_balance_residual(zt, std::vector<ScalarField>(4, ScalarField(g))) == 0.0);
  CHECK_THROWS(l2_balance_residual({hist.begin(), hist.begin() + 2}, {phis.begin(), phis.begin() + 2}));
}

TEST_CASE("L2 balance converges in dt with a manufactured potential") {
  const double r4 = balance_residual(4e-3, 0.5, kernels::InterpOrder::Quintic);
  const double r2 = balance_residual(2e-3, 0.5, kernels::InterpOrder::Quintic);
  const double r1 = balance_residual(1e-3, 0.5, kernels::InterpOrder::Quintic);
  MESSAGE("residuals " << r4 << " " << r2 << " " << r1);
  CHECK(std::log2(r4 / r2) >= 1.8);
  CHECK(std::log2(r2 / r1) >= 1.8);
}

TEST_CASE("adjusted initial temperature") {
  const Grid g(2, 64, 16.0);
  const ScalarField rho1 = gauss(g, 8, 8, 1.0), theta1 = gauss(g, 8.5, 8, 1.5), zero(g);
  CHECK((adjusted_initial_temperature(zero, theta1, kGas, kRef) - kRef.delta * theta1).max_abs() < 1e-14);
  CHECK((adjusted_initial_temperature(rho1, zero, kGas, kRef) + kRef.beta * rho1).max_abs() < 1e-14);
  const AcousticInit a = acoustic_init(rho1, theta1, VectorField(g), Regularization{1e-6, 1e3}, kRef, 0.1);
  CHECK((a.W0 - adjusted_initial_temperature(rho1, theta1, kGas, kRef)).max_abs() < 1e-12);
}

TEST_CASE("limit temperature under a differential rotation") {
  const Grid g(2, 128, 10.0);
  const double c = 5.0, sigma = 2.0, A = 1.0;
  // Streamfunction A σ² exp(−r²/2σ²): angular velocity Ω(r) = A exp(−r²/2σ²).
  const ScalarField psi = ScalarField::from_function(g, [&](auto& x) {
    const double r2 = (x[0] - c) * (x[0] - c) + (x[1] - c) * (x[1] - c);
    return A * sigma * sigma * std::exp(-r2 / (2 * sigma * sigma));
  });
  const VectorField gp = grad(psi);
  VectorField v(g);
  v[0] = gp[1];
  v[1] = -1.0 * gp[0];
  auto T0f = [&](double x, double y) {
    return std::exp(-((x - c - 1.0) * (x - c - 1.0) + (y - c) * (y - c)) / (2 * 0.8 * 0.8));
  };
  ScalarField T = ScalarField::from_function(g, [&](auto& x) { return T0f(x[0], x[1]); });
  const double l2_0 = T.l2_norm();
  const double dt = 1e-3;
  for (int i = 0; i < 1000; ++i) T = limit_temperature_step(T, v, dt);
  const double t = 1.0;
  const ScalarField exact = ScalarField::from_function(g, [&](auto& x) {
    const double dx = x[0] - c, dy = x[1] - c;
    const double r = std::hypot(dx, dy);
    const double ang = -A * std::exp(-r * r / (2 * sigma * sigma)) * t;
    return T0f(c + dx * std::cos(ang) - dy * std::sin(ang), c + dx * std::sin(ang) + dy * std::cos(ang));
  });
  CHECK((T - exact).max_abs() < 1e-3);
  CHECK(std::abs(T.l2_norm() - l2_0) < 1e-6 * l2_0);

  CHECK((limit_temperature_step(T, VectorField(g), dt) - T).max_abs() == 0.0);
  VectorField compressive(g);
  compressive[0] = ScalarField::from_function(g, [&](auto& x) { return std::sin(2 * pi * x[0] / g.L); });
  CHECK_THROWS_AS(limit_temperature_step(T, compressive, dt), DomainError);
}
