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

#include "machlimit/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "machlimit/errors.hpp"

namespace machlimit {

namespace {

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    std::ostringstream os;
    os << what << " must be positive and finite, got " << value;
    throw DomainError(os.str());
  }
}

// x = Z^{2/3}
inline double two_thirds_power(double Z) {
  const double c = std::cbrt(Z);
  return c * c;
}

// (5/3 P - P' Z)/Z, the specific-heat ratio; Z > 0.
double heat_ratio(const GasModel& gas, double Z) {
  if (gas.variant == GasVariant::FNDegenerate) {
    return (2.0 / 3.0) / (1.0 + two_thirds_power(Z));
  }
  const auto& law = *gas.custom;
  return (5.0 / 3.0 * law.P(Z) - law.dP(Z) * Z) / Z;
}

}  // namespace

GasModel GasModel::fn_degenerate(double p_infty, double a_rad, double mu0, double kappa0) {
  require_positive(p_infty, "P_infty");
  require_positive(mu0, "mu0");
  require_positive(kappa0, "kappa0");
  if (a_rad < 0.0) throw DomainError("radiation constant must be nonnegative");
  GasModel gas;
  gas.p_infty = p_infty;
  gas.a_rad = a_rad;
  gas.mu0 = mu0;
  gas.kappa0 = kappa0;
  gas.variant = GasVariant::FNDegenerate;
  return gas;
}

GasModel GasModel::make_custom(StructuralLaw law, double p_infty, double a_rad, double mu0,
                               double kappa0) {
  if (!law.P || !law.dP || !law.S) {
    throw DomainError("custom gas needs P, P' and S callables");
  }
  GasModel gas = fn_degenerate(p_infty, a_rad, mu0, kappa0);
  gas.variant = GasVariant::Custom;
  gas.custom = std::make_shared<const StructuralLaw>(std::move(law));
  return gas;
}

Structural eval_structural(const GasModel& gas, double Z) {
  if (!(Z >= 0.0)) throw DomainError("structural function needs Z >= 0");
  Structural out;
  if (gas.variant == GasVariant::Custom) {
    const auto& law = *gas.custom;
    out.P = law.P(Z);
    out.dP = law.dP(Z);
    if (Z == 0.0) {
      out.entropy_pole = true;
      out.S = std::numeric_limits<double>::quiet_NaN();
    } else {
      out.S = law.S(Z);
    }
    return out;
  }
  if (Z == 0.0) {
    out.P = 0.0;
    out.dP = 1.0;
    out.S = std::numeric_limits<double>::infinity();
    out.entropy_pole = true;
    return out;
  }
  // P(Z) = P∞ Z^{5/3} + Z - Z^{5/3} ln(1 + Z^{-2/3}), written in x = Z^{2/3}.
  const double x = two_thirds_power(Z);
  const double log_term = std::log1p(1.0 / x);
  out.P = Z * (1.0 + x * (gas.p_infty - log_term));
  out.dP = 1.0 + (5.0 / 3.0) * x * (gas.p_infty - log_term) + (2.0 / 3.0) * x / (1.0 + x);
  out.S = 1.5 * log_term;
  return out;
}

double specific_heat_numerator(const GasModel& gas, double Z) {
  if (!(Z >= 0.0)) throw DomainError("structural function needs Z >= 0");
  if (Z == 0.0) return 0.0;
  return heat_ratio(gas, Z) * Z;
}

double entropy_slope(const GasModel& gas, double Z) {
  require_positive(Z, "Z");
  return -1.5 * heat_ratio(gas, Z) / Z;
}

EosPoint eval_eos(const GasModel& gas, double rho, double theta) {
  require_positive(rho, "density");
  require_positive(theta, "temperature");
  const double sqrt_theta = std::sqrt(theta);
  const double theta32 = theta * sqrt_theta;
  const double theta52 = theta * theta32;
  const double theta3 = theta * theta * theta;
  const double theta4 = theta3 * theta;
  const Structural st = eval_structural(gas, rho / theta32);
  const double a = gas.a_rad;
  return {theta52 * st.P + a / 3.0 * theta4, (1.5 * theta52 * st.P + a * theta4) / rho,
          st.S + 4.0 * a / 3.0 * theta3 / rho};
}

EosDerivatives eos_derivatives(const GasModel& gas, double rho, double theta) {
  require_positive(rho, "density");
  require_positive(theta, "temperature");
  const double theta32 = theta * std::sqrt(theta);
  const double theta52 = theta * theta32;
  const double theta2 = theta * theta;
  const double theta3 = theta2 * theta;
  const double theta4 = theta3 * theta;
  const double Z = rho / theta32;
  const Structural st = eval_structural(gas, Z);
  const double hz = heat_ratio(gas, Z);
  const double a = gas.a_rad;
  EosDerivatives d{};
  d.p_rho = theta * st.dP;
  d.p_theta = 1.5 * theta32 * hz * Z + 4.0 * a / 3.0 * theta3;
  d.e_rho = -1.5 * theta52 * st.P / (rho * rho) + 1.5 * theta * st.dP / rho -
            a * theta4 / (rho * rho);
  d.e_theta = 2.25 * theta32 * hz * Z / rho + 4.0 * a * theta3 / rho;
  d.s_rho = -1.5 * hz / rho - 4.0 * a / 3.0 * theta3 / (rho * rho);
  d.s_theta = 2.25 * hz / theta + 4.0 * a * theta2 / rho;
  return d;
}

EnergySlope energy_and_slope(const GasModel& gas, double rho, double theta) {
  require_positive(rho, "density");
  require_positive(theta, "temperature");
  const double theta32 = theta * std::sqrt(theta);
  const double theta3 = theta * theta * theta;
  const double Z = rho / theta32;
  const Structural st = eval_structural(gas, Z);
  const double a = gas.a_rad;
  return {(1.5 * theta * theta32 * st.P + a * theta3 * theta) / rho,
          2.25 * theta32 * heat_ratio(gas, Z) * Z / rho + 4.0 * a * theta3 / rho};
}

double ballistic_free_energy(const GasModel& gas, double rho, double theta, double Theta) {
  require_positive(Theta, "Theta");
  const EosPoint st = eval_eos(gas, rho, theta);
  return rho * (st.e - Theta * st.s);
}

double ballistic_free_energy_drho(const GasModel& gas, double r, double Theta) {
  require_positive(r, "r");
  require_positive(Theta, "Theta");
  // ∂(ρe)/∂ρ = (3/2) θ P'(Z),  ∂(ρs)/∂ρ = S + Z S' = S - (3/2) h/Z.
  const double Z = r / (Theta * std::sqrt(Theta));
  const Structural st = eval_structural(gas, Z);
  return Theta * (1.5 * st.dP - st.S + 1.5 * heat_ratio(gas, Z));
}

double relative_entropy_integrand(const GasModel& gas, double rho, double theta, double r,
                                  double Theta) {
  require_positive(r, "r");
  return ballistic_free_energy(gas, rho, theta, Theta) -
         ballistic_free_energy_drho(gas, r, Theta) * (rho - r) -
         ballistic_free_energy(gas, r, Theta, Theta);
}

ReferenceState linearization_coefficients(const GasModel& gas, double rho_bar,
                                          double theta_bar) {
  require_positive(rho_bar, "reference density");
  require_positive(theta_bar, "reference temperature");
  const EosDerivatives d = eos_derivatives(gas, rho_bar, theta_bar);
  ReferenceState ref;
  ref.rho_bar = rho_bar;
  ref.theta_bar = theta_bar;
  ref.alpha = d.p_rho / rho_bar;
  ref.beta = d.p_theta / rho_bar;
  ref.delta = rho_bar * d.s_theta;
  if (!(ref.delta > 0.0)) {
    throw ThermodynamicInstability("ds/dtheta <= 0 at the reference state");
  }
  ref.omega = rho_bar * (ref.alpha + ref.beta * ref.beta / ref.delta);
  return ref;
}

TransportCoefficients transport_coefficients(const GasModel& gas, double theta) {
  if (!(theta >= 0.0)) throw DomainError("transport coefficients need theta >= 0");
  return {gas.mu0 * (1.0 + theta), gas.kappa0 * (1.0 + theta * theta * theta)};
}

double coercivity_constant(const GasModel& gas, const StateBox& K, double Theta_ref,
                           double r_ref, int samples_per_axis) {
  if (!(K.rho_min > 0.0) || !(K.theta_min > 0.0)) {
    throw DomainError("coercivity box must stay away from rho = 0 and theta = 0");
  }
  if (!(K.rho_max > K.rho_min) || !(K.theta_max > K.theta_min)) {
    throw DomainError("coercivity box is empty");
  }
  if (r_ref < K.rho_min || r_ref > K.rho_max || Theta_ref < K.theta_min ||
      Theta_ref > K.theta_max) {
    throw DomainError("reference point must lie in the coercivity box");
  }
  if (samples_per_axis < 3) throw DomainError("need at least 3 samples per axis");
  double best = std::numeric_limits<double>::infinity();
  const double drho = (K.rho_max - K.rho_min) / (samples_per_axis - 1);
  const double dtheta = (K.theta_max - K.theta_min) / (samples_per_axis - 1);
  for (int i = 0; i < samples_per_axis; ++i) {
    const double rho = K.rho_min + i * drho;
    for (int j = 0; j < samples_per_axis; ++j) {
      const double theta = K.theta_min + j * dtheta;
      const double dist2 = (rho - r_ref) * (rho - r_ref) + (theta - Theta_ref) * (theta - Theta_ref);
      if (dist2 <= 1e-24 * (r_ref * r_ref + Theta_ref * Theta_ref)) continue;
      const double value = relative_entropy_integrand(gas, rho, theta, r_ref, Theta_ref);
      best = std::min(best, value / dist2);
    }
  }
  return best;
}

// ---------------------------------------------------------------------------

bool HypothesisReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

const HypothesisCheck& HypothesisReport::get(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw std::out_of_range("no hypothesis check named " + name);
}

std::vector<std::string> HypothesisReport::failed() const {
  std::vector<std::string> out;
  for (const auto& c : checks) {
    if (!c.passed) out.push_back(c.name);
  }
  return out;
}

HypothesisReport verify_hypotheses(const GasModel& gas, std::optional<ScalingExponents> scaling) {
  constexpr int kPoints = 512;
  constexpr double kZmin = 1e-6;
  constexpr double kZmax = 1e6;
  std::vector<double> zs(kPoints);
  for (int i = 0; i < kPoints; ++i) {
    const double f = static_cast<double>(i) / (kPoints - 1);
    zs[i] = kZmin * std::pow(kZmax / kZmin, f);
  }

  HypothesisReport report;
  auto add = [&](const char* name, bool ok, double observed, std::string detail) {
    report.checks.push_back({name, ok, observed, std::move(detail)});
  };

  const Structural at_zero = eval_structural(gas, 0.0);
  add(hypothesis::kPressureAtVacuum, std::abs(at_zero.P) <= 1e-14, at_zero.P, "P(0)");

  double min_dP = at_zero.dP;
  for (double Z : zs) min_dP = std::min(min_dP, eval_structural(gas, Z).dP);
  add(hypothesis::kMonotone, min_dP > 0.0, min_dP, "min P' over {0} and the log grid");

  const Structural top = eval_structural(gas, kZmax);
  const double ratio = top.P / std::pow(kZmax, 5.0 / 3.0);
  const double rel = std::abs(ratio - gas.p_infty) / gas.p_infty;
  add(hypothesis::kAsymptote, rel <= 0.01, ratio, "P(Z)/Z^(5/3) at Z = 1e6");

  bool heat_ok = true;
  double heat_sup = 0.0;
  for (double Z : zs) {
    const double hz = specific_heat_numerator(gas, Z) / Z;
    if (!(hz > 0.0) || !std::isfinite(hz)) heat_ok = false;
    heat_sup = std::max(heat_sup, hz);
  }
  add(hypothesis::kSpecificHeat, heat_ok, heat_sup, "observed supremum of (5/3P-P'Z)/Z");

  double worst_ode = 0.0;
  for (double Z : zs) {
    const double h = 1e-4 * Z;
    const double fd = (eval_structural(gas, Z + h).S - eval_structural(gas, Z - h).S) / (2.0 * h);
    const double exact = entropy_slope(gas, Z);
    worst_ode = std::max(worst_ode, std::abs(fd - exact) / std::abs(exact));
  }
  add(hypothesis::kEntropyOde, worst_ode <= 1e-6, worst_ode,
      "max relative mismatch of central-difference S' against the defining relation");

  const double s_top = top.S;
  add(hypothesis::kThirdLaw, std::isfinite(s_top) && std::abs(s_top) <= 1e-3, s_top,
      "S(Z) at Z = 1e6");

  constexpr int kThetaPoints = 256;
  std::vector<double> thetas(kThetaPoints + 1, 0.0);
  for (int i = 0; i < kThetaPoints; ++i) {
    thetas[i + 1] = 1e-3 * std::pow(1e6, static_cast<double>(i) / (kThetaPoints - 1));
  }
  bool mu_ok = true;
  double lipschitz = 0.0;
  bool kappa_ok = true;
  double kappa_upper = 0.0;
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    const double th = thetas[i];
    const auto tc = transport_coefficients(gas, th);
    if (tc.mu < gas.mu0 * (1.0 + th) * (1.0 - 1e-12)) mu_ok = false;
    const double kr = tc.kappa / (1.0 + th * th * th);
    if (kr < gas.kappa0 * (1.0 - 1e-12) || !std::isfinite(kr)) kappa_ok = false;
    kappa_upper = std::max(kappa_upper, kr);
    if (i > 0) {
      const double prev = thetas[i - 1];
      const double slope =
          std::abs(tc.mu - transport_coefficients(gas, prev).mu) / (th - prev);
      lipschitz = std::max(lipschitz, slope);
    }
  }
  add(hypothesis::kViscosity, mu_ok && std::isfinite(lipschitz), lipschitz,
      "observed Lipschitz constant of mu on [0, 1e3]");
  add(hypothesis::kConductivity, kappa_ok, kappa_upper,
      "observed upper constant of kappa/(1+theta^3)");

  if (scaling) {
    const bool ok = scaling->b_exp > 0.0 && scaling->a_exp > 0.0 && scaling->a_exp < 10.0 / 3.0;
    add(hypothesis::kScaling, ok, scaling->a_exp, "Reynolds exponent a");
  }
  return report;
}

}  // namespace machlimit
