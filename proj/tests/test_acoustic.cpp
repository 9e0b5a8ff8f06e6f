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
#include <random>

#include "machlimit/acoustic.hpp"
#include "machlimit/errors.hpp"
#include "machlimit/thermo.hpp"

using namespace machlimit;
using std::numbers::pi;

namespace {

const ReferenceState kRef = linearization_coefficients(GasModel::fn_degenerate(), 1.0, 1.0);

ScalarField bump(const Grid& g, double w, double shift = 0.0) {
  return ScalarField::from_function(g, [&](auto& x) {
    double r2 = 0.0;
    for (int d = 0; d < g.dim; ++d) r2 += std::pow(x[d] - g.L / 2 - shift, 2);
    return std::exp(-r2 / (2 * w * w));
  });
}

AcousticState random_state(const Grid& g, double eps) {
  AcousticState s;
  s.Z = bump(g, 1.0);
  s.Phi = bump(g, 0.7, 0.5);
  s.Phi *= 0.3;
  s.eps = eps;
  s.ref = kRef;
  return s;
}

double rel_l2(const ScalarField& a, const ScalarField& b) {
  return (a - b).l2_norm() / std::max(b.l2_norm(), 1e-300);
}

}  // namespace

TEST_CASE("zero advance is the identity") {
  const Grid g(2, 32, 10.0);
  const AcousticState s = random_state(g, 0.1);
  const AcousticState t = acoustic_advance(s, 0.0);
  CHECK(rel_l2(t.Z, s.Z) < 1e-14);
  // Φ loses only its mean.
  const ScalarField phi0 = s.Phi - ScalarField(g, s.Phi.integral() / g.box_volume());
  CHECK(rel_l2(t.Phi, phi0) < 1e-14);
  CHECK_THROWS_AS(acoustic_propagate(s, -1.0), DomainError);
}

TEST_CASE("single mode against RK4 time stepping") {
  const Grid g(1, 16, 2 * pi);
  const double eps = 0.5, k = 3.0;
  AcousticState s;
  s.Z = ScalarField::from_function(g, [&](auto& x) { return std::cos(k * x[0]); });
  s.Phi = ScalarField(g);
  s.eps = eps;
  s.ref = kRef;
  // ε∂tZ = −ωΔΦ, ε∂tΦ = −Z by classical RK4 at dt = 1e-4.
  auto rhs = [&](const ScalarField& Z, const ScalarField& P) {
    ScalarField dZ = laplacian(P);
    dZ *= -kRef.omega / eps;
    ScalarField dP = Z;
    dP *= -1.0 / eps;
    return std::pair{dZ, dP};
  };
  ScalarField Z = s.Z, P = s.Phi;
  const double dt = 1e-4;
  const int steps = 1000;
  for (int i = 0; i < steps; ++i) {
    const auto [k1z, k1p] = rhs(Z, P);
    const auto [k2z, k2p] = rhs(Z + 0.5 * dt * k1z, P + 0.5 * dt * k1p);
    const auto [k3z, k3p] = rhs(Z + 0.5 * dt * k2z, P + 0.5 * dt * k2p);
    const auto [k4z, k4p] = rhs(Z + dt * k3z, P + dt * k3p);
    Z += (dt / 6) * (k1z + 2.0 * k2z + 2.0 * k3z + k4z);
    P += (dt / 6) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
  }
  const double t = steps * dt;
  const AcousticState exact = acoustic_propagate(s, t);
  CHECK(rel_l2(exact.Z, Z) < 1e-6);
  CHECK((exact.Phi - P).max_abs() < 1e-6);
  ScalarField closed = s.Z;
  closed *= std::cos(std::sqrt(kRef.omega) * k * t / eps);
  CHECK((exact.Z - closed).max_abs() < 1e-12);
}

TEST_CASE("energy equality under long composition") {
  const Grid g(2, 32, 10.0);
  AcousticState s = random_state(g, 0.05);
  const double e0 = acoustic_energy(s);
  for (int i = 0; i < 10000; ++i) s = acoustic_advance(s, 0.0137);
  CHECK(std::abs(acoustic_energy(s) - e0) < 1e-10 * e0);
  CHECK(std::abs(acoustic_energy(s, 2) - acoustic_energy(random_state(g, 0.05), 2)) <
        1e-10 * acoustic_energy(s, 2));
}

TEST_CASE("reversibility and group property") {
  const Grid g(2, 32, 10.0);
  const AcousticState s = acoustic_advance(random_state(g, 0.1), 0.0);
  const AcousticState back = acoustic_advance(acoustic_advance(s, 0.37), -0.37);
  CHECK(rel_l2(back.Z, s.Z) < 1e-10);
  CHECK(rel_l2(back.Phi, s.Phi) < 1e-10);
  const AcousticState two = acoustic_advance(acoustic_advance(s, 0.2), 0.31);
  const AcousticState one = acoustic_advance(s, 0.51);
  CHECK(rel_l2(two.Z, one.Z) < 1e-12);
  CHECK(rel_l2(two.Phi, one.Phi) < 1e-12);
  const AcousticPropagator prop(s);
  CHECK(rel_l2(prop.state_at(0.51).Z, one.Z) < 1e-14);
}

TEST_CASE("acoustic energy form") {
  const Grid g(2, 16, 5.0);
  AcousticState s;
  s.Z = ScalarField(g);
  s.Phi = ScalarField(g);
  s.ref = kRef;
  CHECK(acoustic_energy(s) == 0.0);
  s.Z = bump(g, 0.8);
  const double e1 = acoustic_energy(s);
  s.Z *= 2.0;
  CHECK(acoustic_energy(s) == doctest::Approx(4.0 * e1).epsilon(1e-14));
  CHECK(e1 == doctest::Approx(std::pow(bump(g, 0.8).l2_norm(), 2) / kRef.omega).epsilon(1e-12));
}

TEST_CASE("initial data") {
  const Grid g(2, 32, 2 * pi);
  const Regularization reg{0.1, 0.0};
  const ScalarField zero(g);
  // Divergence-free u0.
  VectorField u0(g);
  u0[0] = ScalarField::from_function(g, [](auto& x) { return std::sin(x[1]); });
  const AcousticInit a = acoustic_init(zero, zero, u0, reg, kRef, 0.1);
  CHECK(a.state.Phi.max_abs() < 1e-10);
  CHECK(a.state.Z.max_abs() == 0.0);
  CHECK(a.W0.max_abs() == 0.0);

  // u0 = ∇cos(k·x): Φ0 = +cos(k·x) times the mollifier symbol at k.
  const int k1 = 2, k2 = 1;
  const ScalarField c = ScalarField::from_function(g, [&](auto& x) { return std::cos(k1 * x[0] + k2 * x[1]); });
  const AcousticInit b = acoustic_init(zero, zero, grad(c), Regularization{0.2, 1e3}, kRef, 0.1);
  ScalarField expected = c;
  expected *= std::exp(-0.5 * (k1 * k1 + k2 * k2) * 0.04);
  CHECK((b.state.Phi - expected).max_abs() < 1e-12);
  CHECK_THROWS_AS(acoustic_init(zero, ScalarField(Grid(2, 16, 2 * pi)), u0, reg, kRef, 0.1), GridMismatch);
}

TEST_CASE("decay exponent fit on synthetic series") {
  std::vector<DecaySample> power, flat;
  const double eps = 0.3;
  for (int i = 0; i < 20; ++i) {
    const double t = 0.1 + 0.2 * i;
    power.push_back({t, 3.0 / (1.0 + t / eps)});
    flat.push_back({t, 2.0});
  }
  CHECK(decay_exponent_fit(power, eps) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(std::abs(decay_exponent_fit(flat, eps)) < 1e-12);
  CHECK_THROWS_AS(decay_exponent_fit(power, eps, 1.0), WindowError);
  CHECK_THROWS_AS(decay_exponent_fit({power.begin(), power.begin() + 3}, eps), FitError);
  const Grid g(3, 32, 20.0);
  CHECK(acoustic_wrap_time(g, 4.0, 4.0, 0.5) == doctest::Approx(0.5 * 6.0 / 2.0));
}

TEST_CASE("recombination of R and T") {
  const Grid g(1, 16, 1.0);
  std::mt19937 rng(1);
  std::normal_distribution<double> nd;
  std::vector<double> zs(16), ws(16);
  for (auto& v : zs) v = nd(rng);
  for (auto& v : ws) v = nd(rng);
  const ScalarField Z(g, zs), W(g, ws);

  ReferenceState unit;
  unit.alpha = unit.beta = unit.delta = 1.0;
  const auto [R1, T1] = recombine_RT(Z, W, unit);
  CHECK((T1 - 0.5 * (Z + W)).max_abs() < 1e-15);
  CHECK((R1 - 0.5 * (Z - W)).max_abs() < 1e-15);

  const double det = kRef.beta * kRef.beta + kRef.alpha * kRef.delta;
  const auto [R0, T0] = recombine_RT(Z, ScalarField(g), kRef);
  CHECK((T0 - (kRef.beta / det) * Z).max_abs() < 1e-15);
  CHECK((R0 - (kRef.delta / det) * Z).max_abs() < 1e-15);

  const auto [R, T] = recombine_RT(Z, W, kRef);
  CHECK((axpby(kRef.alpha, R, kRef.beta, T) - Z).max_abs() < 1e-14);
  CHECK((axpby(kRef.delta, T, -kRef.beta, R) - W).max_abs() < 1e-14);

  ReferenceState degenerate;
  CHECK_THROWS_AS(recombine_RT(Z, W, degenerate), DomainError);
}
