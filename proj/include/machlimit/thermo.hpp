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

// Constitutive relations of a monatomic gas with radiation:
//   p = θ^{5/2} P(Z) + (a/3) θ⁴,   Z = ρ θ^{-3/2}
//   e = (3/2) θ^{5/2} P(Z)/ρ + a θ⁴/ρ
//   s = S(Z) + (4a/3) θ³/ρ
// together with the temperature-dependent transport coefficients.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace machlimit {

enum class GasVariant { FNDegenerate, Custom };

/// User-supplied structural function and its companions. S must be an
/// antiderivative of -(3/2)(5/3 P - P' Z)/Z² for the model to be consistent.
struct StructuralLaw {
  std::function<double(double)> P;
  std::function<double(double)> dP;
  std::function<double(double)> S;
};

struct GasModel {
  double p_infty = 1.0;
  double a_rad = 0.1;
  double mu0 = 0.1;
  double kappa0 = 0.1;
  GasVariant variant = GasVariant::FNDegenerate;
  std::shared_ptr<const StructuralLaw> custom;

  static GasModel fn_degenerate(double p_infty = 1.0, double a_rad = 0.1,
                                double mu0 = 0.1, double kappa0 = 0.1);
  static GasModel make_custom(StructuralLaw law, double p_infty, double a_rad = 0.0,
                              double mu0 = 0.1, double kappa0 = 0.1);
};

struct Structural {
  double P = 0.0;
  double dP = 0.0;
  /// Meaningless when `entropy_pole` is set (Z = 0).
  double S = 0.0;
  bool entropy_pole = false;
};

struct EosPoint {
  double p;
  double e;
  double s;
};

/// First partial derivatives of p, e, s in (ρ, θ).
struct EosDerivatives {
  double p_rho, p_theta;
  double e_rho, e_theta;
  double s_rho, s_theta;
};

struct ReferenceState {
  double rho_bar = 1.0;
  double theta_bar = 1.0;
  double alpha = 0.0;  ///< (1/ρ̄) ∂p/∂ρ
  double beta = 0.0;   ///< (1/ρ̄) ∂p/∂θ
  double delta = 0.0;  ///< ρ̄ ∂s/∂θ
  double omega = 0.0;  ///< ρ̄ (α + β²/δ), squared sound speed
};

struct TransportCoefficients {
  double mu;
  double kappa;
};

Structural eval_structural(const GasModel& gas, double Z);

/// (5/3 P(Z) - P'(Z) Z); positive and bounded by c·Z for admissible gases.
double specific_heat_numerator(const GasModel& gas, double Z);

/// S'(Z) from the defining relation S' = -(3/2)(5/3 P - P' Z)/Z².
double entropy_slope(const GasModel& gas, double Z);

EosPoint eval_eos(const GasModel& gas, double rho, double theta);
EosDerivatives eos_derivatives(const GasModel& gas, double rho, double theta);

/// e(ρ,θ) and ∂e/∂θ, the pair needed to invert e for θ.
struct EnergySlope {
  double e;
  double e_theta;
};
EnergySlope energy_and_slope(const GasModel& gas, double rho, double theta);

/// H_Θ(ρ,θ) = ρ (e(ρ,θ) - Θ s(ρ,θ)).
double ballistic_free_energy(const GasModel& gas, double rho, double theta, double Theta);

/// ∂H_Θ/∂ρ evaluated at (r, Θ).
double ballistic_free_energy_drho(const GasModel& gas, double r, double Theta);

/// H_Θ(ρ,θ) - ∂H_Θ(r,Θ)/∂ρ (ρ - r) - H_Θ(r,Θ); nonnegative.
double relative_entropy_integrand(const GasModel& gas, double rho, double theta, double r,
                                  double Theta);

ReferenceState linearization_coefficients(const GasModel& gas, double rho_bar,
                                          double theta_bar);

TransportCoefficients transport_coefficients(const GasModel& gas, double theta);

/// Rectangle [rho_min, rho_max] × [theta_min, theta_max].
struct StateBox {
  double rho_min, rho_max;
  double theta_min, theta_max;
};

/// Sampled minimum over K of integrand / (|ρ-r|² + |θ-Θ|²).
double coercivity_constant(const GasModel& gas, const StateBox& K, double Theta_ref,
                           double r_ref, int samples_per_axis = 65);

struct HypothesisCheck {
  std::string name;
  bool passed = false;
  double observed = 0.0;
  std::string detail;
};

struct HypothesisReport {
  std::vector<HypothesisCheck> checks;

  bool all_passed() const;
  const HypothesisCheck& get(const std::string& name) const;
  std::vector<std::string> failed() const;
};

/// Exponents of the Reynolds/Péclet scaling; only the (a, b) constraint is
/// consulted by the verifier.
struct ScalingExponents {
  double a_exp;
  double b_exp;
};

namespace hypothesis {
inline constexpr const char* kPressureAtVacuum = "P(0)=0";
inline constexpr const char* kMonotone = "P'>0";
inline constexpr const char* kAsymptote = "P/Z^(5/3)->P_inf";
inline constexpr const char* kSpecificHeat = "0<(5/3P-P'Z)/Z<c";
inline constexpr const char* kEntropyOde = "S'=-(3/2)(5/3P-P'Z)/Z^2";
inline constexpr const char* kThirdLaw = "S(inf)=0";
inline constexpr const char* kViscosity = "mu Lipschitz, mu>=mu0(1+theta)";
inline constexpr const char* kConductivity = "kappa0(1+theta^3)<=kappa<=kappa1(1+theta^3)";
inline constexpr const char* kScaling = "b>0, 0<a<10/3";
}  // namespace hypothesis

HypothesisReport verify_hypotheses(const GasModel& gas,
                                   std::optional<ScalingExponents> scaling = std::nullopt);

}  // namespace machlimit
