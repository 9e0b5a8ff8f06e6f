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

// Scaled compressible Navier-Stokes-Fourier system in conservative variables
// (ρ, m = ρu, E = ½|m|²/ρ + ε⁻²ρe):
//   ∂t ρ + div m = 0
//   ∂t m + div(m⊗u) + ε⁻²∇p = ε^a div S
//   ∂t E + div((E + ε⁻²p)u) = ε^a div(S u) − ε^{b−2} div q
// with S = μ(θ)(∇u + ∇uᵀ − (2/3) div u I) and q = −κ(θ)∇θ.

#include <string>
#include <vector>

#include "machlimit/grid.hpp"
#include "machlimit/thermo.hpp"

namespace machlimit {

struct ScalingParams {
  double eps = 0.1;
  double a_exp = 1.0;
  double b_exp = 1.0;
  /// Mollifier width of the regularized data.
  double eta = 0.05;

  /// Throws DomainError unless b > 0 and 0 < a < 10/3 (and eps, eta > 0).
  void validate() const;
};

struct NsfOptions {
  /// Switch off viscosity / heat conduction (μ = κ = 0 test mode).
  bool viscous = true;
  bool conductive = true;
  /// 2/3-rule filtering of the nonlinear tendencies.
  bool dealias = true;
  bool parallel = true;
  /// Largest admissible advective Courant number |u|max·dt/dx.
  double cfl_max = 0.5;
};

struct NsfState {
  ScalarField rho;
  VectorField m;
  ScalarField E;
  /// Temperature recovered from (ρ, E); kept in sync by the solver.
  ScalarField theta;
  double t = 0.0;
  ScalingParams scaling;
  GasModel gas;
  ReferenceState ref;

  const Grid& grid() const { return rho.grid(); }
  VectorField velocity() const;
  double mass() const;
  double total_energy() const;
};

/// ρ = ρ̄ + ερ⁽¹⁾, θ = θ̄ + εθ⁽¹⁾, m = ρu₀, E from the equation of state.
NsfState make_ill_prepared_data(const ScalarField& rho1, const ScalarField& theta1,
                                const VectorField& u0, const ScalingParams& scaling,
                                const ReferenceState& ref, const GasModel& gas);

/// Recompute state.theta from (ρ, m, E); throws StateCorruption on failure.
void refresh_temperature(NsfState& state, const NsfOptions& opts = {});

struct NsfTendency {
  ScalarField drho;
  VectorField dm;
  ScalarField dE;
};

/// Full right-hand side; uses state.theta as the recovery guess.
NsfTendency nsf_rhs(const NsfState& state, const NsfOptions& opts = {});

/// One step: exact per-mode acoustic block (linearized about (ρ̄, θ̄)) for
/// dt/2, SSP-RK3 on the remainder for dt, acoustic block for dt/2.
NsfState nsf_step_imex(const NsfState& state, double dt, const NsfOptions& opts = {});

/// Largest step allowed by the advective Courant limit.
double nsf_max_dt(const NsfState& state, const NsfOptions& opts = {});

/// σ = θ⁻¹(ε^{2+a} S:∇u − ε^b q·∇θ/θ), pointwise.
ScalarField entropy_production(const NsfState& state, const NsfOptions& opts = {});

/// ∫[½ρ|u|² + ε⁻²(H_θ̄(ρ,θ) − ∂ρH_θ̄(ρ̄,θ̄)(ρ−ρ̄) − H_θ̄(ρ̄,θ̄))].
double dissipation_functional(const NsfState& state);

/// ε⁻² θ̄ ∫σ, the instantaneous dissipation rate of the functional.
double dissipation_rate(const NsfState& state, const NsfOptions& opts = {});

struct BalanceReport {
  std::vector<double> t;
  std::vector<double> lhs;
  std::vector<double> rhs;
  std::vector<double> gap;  ///< lhs − rhs
  double max_gap = 0.0;
  double max_abs_rel_gap = 0.0;
};

/// Total dissipation balance from uniformly sampled states (trapezoid rule).
BalanceReport dissipation_balance(const std::vector<NsfState>& history,
                                  const NsfOptions& opts = {});

/// Same balance accumulated step by step during a run.
class DissipationAccumulator {
 public:
  DissipationAccumulator(const NsfState& initial, const NsfOptions& opts = {});
  /// Call after each step with the new state.
  void advance(const NsfState& state);
  /// Same, with the dissipation rate already computed by the caller.
  void advance(const NsfState& state, double rate);
  double lhs() const { return functional_ + integrated_; }
  double rhs() const { return initial_; }
  double gap() const { return lhs() - rhs(); }

 private:
  NsfOptions opts_;
  double initial_;
  double functional_;
  double integrated_ = 0.0;
  double last_rate_;
  double last_t_;
};

struct NsfRecord {
  double t;
  double mass;
  double energy;
  double min_rho;
  double min_theta;
  double entropy_prod_min;
  double v4_gap;
};

void write_nsf_csv(const std::string& path, const std::vector<NsfRecord>& rows);

}  // namespace machlimit
