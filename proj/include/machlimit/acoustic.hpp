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

// Linear acoustic system for the potential Φ and Z = αR + βT:
//   ε ∂t Z + ω ΔΦ = 0,   ε ∂t Φ + Z = 0,
// propagated exactly mode by mode.

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "machlimit/grid.hpp"
#include "machlimit/spectral.hpp"
#include "machlimit/thermo.hpp"

namespace machlimit {

struct AcousticState {
  ScalarField Z;
  ScalarField Phi;
  double eps = 1.0;
  ReferenceState ref;
  double t = 0.0;
};

struct AcousticInit {
  AcousticState state;
  ScalarField W0;  ///< δT₀ − βR₀, the transported combination
};

/// Regularized ill-prepared data: R₀, T₀ mollified and cut off, Φ₀ from the
/// gradient part of u0.
AcousticInit acoustic_init(const ScalarField& rho1, const ScalarField& theta1,
                           const VectorField& u0, const Regularization& reg,
                           const ReferenceState& ref, double eps);

/// Advance by dt (any sign); exact per mode.
AcousticState acoustic_advance(const AcousticState& state, double dt);
/// Advance to t_target ≥ state.t.
AcousticState acoustic_propagate(const AcousticState& state, double t_target);

/// Repeated evaluation from a fixed initial state without re-transforming it.
class AcousticPropagator {
 public:
  explicit AcousticPropagator(const AcousticState& initial);
  AcousticState state_at(double t) const;
  double t0() const { return t0_; }

 private:
  void coefficients_at(double t, Spectrum& z, Spectrum& phi) const;

  Spectrum z0_, phi0_;
  double eps_, t0_;
  ReferenceState ref_;
};

/// ‖∇Φ‖² + ‖Z‖²/ω in the Sobolev norm of index k (k = 0: plain L²).
double acoustic_energy(const AcousticState& state, int sobolev_k = 0);

/// Wrap-around time for data supported in a ball of radius r_support about
/// the box centre.
double acoustic_wrap_time(const Grid& grid, double r_support, double omega, double eps);

struct DecaySample {
  double t;
  double sup_norm;
};

/// Least-squares σ in sup_norm ≈ C(1 + t/ε)^{−σ}. Throws WindowError if a
/// sample lies beyond `t_wrap`.
double decay_exponent_fit(const std::vector<DecaySample>& series, double eps,
                          double t_wrap = std::numeric_limits<double>::infinity());

/// T = (βZ + αW)/(β²+αδ), R = (δZ − βW)/(β²+αδ).
std::pair<ScalarField, ScalarField> recombine_RT(const ScalarField& Z, const ScalarField& W,
                                                 const ReferenceState& ref);

struct AcousticRecord {
  double t;
  double eps;
  double sup_norm_Z;
  double sup_norm_gradPhi;
  double energy_a1;
};

AcousticRecord acoustic_record(const AcousticState& state);
void write_acoustic_csv(const std::string& path, const std::vector<AcousticRecord>& rows);

}  // namespace machlimit
