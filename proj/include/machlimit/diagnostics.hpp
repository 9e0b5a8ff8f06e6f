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

#include <array>
#include <map>
#include <string>
#include <vector>

#include "machlimit/acoustic.hpp"
#include "machlimit/euler.hpp"
#include "machlimit/nsf.hpp"
#include "machlimit/transport.hpp"

namespace machlimit {

/// ∫[½ρ|u−U|² + ε⁻²(H_Θ(ρ,θ) − ∂ρH_Θ(r,Θ)(ρ−r) − H_Θ(r,Θ))].
double relative_entropy(const NsfState& nsf, const ScalarField& r, const ScalarField& Theta,
                        const VectorField& U);

/// Indicator of ρ̄/2 < ρ < 2ρ̄ and θ̄/2 < θ < 2θ̄ and its complement.
struct EssResMasks {
  std::vector<unsigned char> ess;
  std::vector<unsigned char> res;
  std::size_t ess_count() const;
};

EssResMasks ess_res_split(const NsfState& nsf, const ReferenceState& ref);
ScalarField essential_part(const ScalarField& h, const EssResMasks& masks);
ScalarField residual_part(const ScalarField& h, const EssResMasks& masks);

using NamedValues = std::map<std::string, double>;

/// Norms of the ε-uniform bound list over a sampled trajectory (uniform
/// sampling assumed for the time integrals).
NamedValues uniform_bounds_report(const std::vector<NsfState>& history,
                                  const ScalingParams& scaling);

/// Ball of the given radius about `center`; a nonpositive radius selects the
/// whole box.
struct Subdomain {
  std::array<double, 3> center{0.0, 0.0, 0.0};
  double radius = 0.0;

  std::vector<unsigned char> mask(const Grid& grid) const;
};

/// Temperature deviation of the limit flow, α/(β²+αδ)·T, where T is the
/// transported quantity δθ⁽¹⁾ − βρ⁽¹⁾ of the target system.
double limit_temperature_factor(const ReferenceState& ref);

/// m3 = ‖[ρ−ρ̄]_ess‖_{L²} + ‖[ρ−ρ̄]_res‖_{L^{5/3}},
/// m4 = ‖√ρ u − √ρ̄ v‖_{L²(K)},
/// m5_q1, m5_q3/2 = ‖(θ−θ̄)/ε − α/(β²+αδ)·T‖_{L^q(K)}.
NamedValues convergence_metrics(const NsfState& nsf, const EulerBoussinesqState& euler,
                                const ReferenceState& ref, const ScalingParams& scaling,
                                const Subdomain& K);

/// Integrands of the relative entropy inequality at one instant, with the
/// test trio r = ρ̄ + εR, Θ = θ̄ + εT, U = v + ∇Φ built from the acoustic
/// state, the transported W and the target velocity.
struct R1Sample {
  double t = 0.0;
  double rel_entropy = 0.0;
  double rhs_rate = 0.0;      ///< right-hand-side integrand
  double dissipation = 0.0;   ///< Θ/θ-weighted dissipation on the left
  double magnitude = 0.0;     ///< Σ of the absolute values of all terms
};

R1Sample r1_sample(const NsfState& nsf, const AcousticState& acoustic, const ScalarField& W,
                   const EulerBoussinesqState& euler, const NsfOptions& opts = {});

/// Trapezoid accumulation of the inequality over a run.
class R1Accumulator {
 public:
  explicit R1Accumulator(const R1Sample& initial);
  void add(const R1Sample& s);
  /// RHS(τ) − LHS(τ) at the last sample.
  double gap() const { return gap_; }
  /// ∫Σ|terms| dt + |E(τ) − E(0)|, the scale of the RHS.
  double scale() const;
  double t() const { return last_.t; }

 private:
  R1Sample first_, last_;
  double rhs_int_ = 0.0;
  double diss_int_ = 0.0;
  double mag_int_ = 0.0;
  double gap_ = 0.0;
};

/// Signed gap at time τ from aligned histories (trapezoid rule over the
/// samples with t ≤ τ).
double r1_residual(const std::vector<NsfState>& history,
                   const std::vector<AcousticState>& acoustic_hist,
                   const std::vector<TransportState>& transport_hist,
                   const std::vector<EulerBoussinesqState>& euler_hist, double tau,
                   const NsfOptions& opts = {});

}  // namespace machlimit
