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

#pragma once

// Incompressible Euler equations with a passively transported temperature
// deviation:
//   ∂t v + v·∇v + ∇Π = 0,  div v = 0,  ∂t T + v·∇T = 0.

#include <vector>

#include "machlimit/grid.hpp"
#include "machlimit/transport.hpp"

namespace machlimit {

struct EulerBoussinesqState {
  VectorField v;
  ScalarField T;
  ScalarField Pi;
  double t = 0.0;
};

struct EulerOptions {
  bool dealias = true;
  double cfl_max = 0.5;
  TransportOptions temperature{kernels::InterpOrder::Quintic};
};

/// −H[v·∇v], 2/3-filtered.
VectorField euler_tendency(const VectorField& v, bool dealiased = true);

/// Π solving ΔΠ = −div(v·∇v), zero mean.
ScalarField euler_pressure(const VectorField& v, bool dealiased = true);

/// RK4 step of v with projected stage tendencies; T advected with the
/// midpoint velocity; Π refreshed at the new time.
EulerBoussinesqState euler_step(const EulerBoussinesqState& state, double dt,
                                const EulerOptions& opts = {});

/// Integrate from (v0, T0) and return the states at `sample_times`
/// (increasing, ≥ 0). v0 is projected onto solenoidal fields first. Steps
/// are at most dt and land on every sample time.
std::vector<EulerBoussinesqState> euler_boussinesq_run(const VectorField& v0,
                                                       const ScalarField& T0,
                                                       const std::vector<double>& sample_times,
                                                       double dt, const EulerOptions& opts = {});

/// Initial state used by the run: dealiased H[v0], T0, matching Π.
EulerBoussinesqState euler_initial_state(const VectorField& v0, const ScalarField& T0,
                                         const EulerOptions& opts = {});

double kinetic_energy(const VectorField& v);
/// ∫ω² with the 2D vorticity ω = ∂x v₂ − ∂y v₁.
double enstrophy_2d(const VectorField& v);

}  // namespace machlimit
