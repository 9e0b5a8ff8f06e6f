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

// Transport of W = δT − βR by the velocity U = v + ∇Φ,
//   ∂t W + U·∇W + W div U = 0,
// and passive transport of the limit temperature by solenoidal v.

#include <string>
#include <vector>

#include "machlimit/grid.hpp"
#include "machlimit/kernels.hpp"
#include "machlimit/thermo.hpp"

namespace machlimit {

struct TransportState {
  ScalarField W;
  double t = 0.0;
};

struct TransportOptions {
  kernels::InterpOrder order = kernels::InterpOrder::Cubic;
  /// Limit interpolated values to the enclosing cell's range.
  bool bounded = false;
  bool parallel = true;
  /// Largest admissible |U|max·dt/dx.
  double cfl_max = 1.0;
};

/// One semi-Lagrangian step; U and divU are the velocity and its divergence
/// at the midpoint of the step.
TransportState transport_step(const TransportState& state, const VectorField& U,
                              const ScalarField& divU, double dt,
                              const TransportOptions& opts = {});

/// |[∫W²]₀^τ + ∫₀^τ∫ ΔΦ W²| / ‖W₀‖², trapezoid rule in time. `phi_history`
/// holds Φ at the same (uniform) times as `history`.
double l2_balance_residual(const std::vector<TransportState>& history,
                           const std::vector<ScalarField>& phi_history);

/// δθ⁽¹⁾ − βρ⁽¹⁾ with δ, β evaluated from the gas at the reference state.
ScalarField adjusted_initial_temperature(const ScalarField& rho1, const ScalarField& theta1,
                                         const GasModel& gas, const ReferenceState& ref);

/// Semi-Lagrangian advection of T by solenoidal v (v at the step midpoint).
ScalarField limit_temperature_step(const ScalarField& T, const VectorField& v, double dt,
                                   const TransportOptions& opts = {kernels::InterpOrder::Quintic});

struct TransportRecord {
  double t;
  double l2_W;
  double linf_W;
  double a3_residual;
};

void write_transport_csv(const std::string& path, const std::vector<TransportRecord>& rows);

}  // namespace machlimit
