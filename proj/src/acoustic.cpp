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

#include "machlimit/acoustic.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>

#include "machlimit/errors.hpp"

namespace machlimit {

AcousticInit acoustic_init(const ScalarField& rho1, const ScalarField& theta1,
                           const VectorField& u0, const Regularization& reg,
                           const ReferenceState& ref, double eps) {
  require_same_grid(rho1.grid(), theta1.grid(), "acoustic_init");
  require_same_grid(rho1.grid(), u0.grid(), "acoustic_init");
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  const ScalarField R0 = mollify_regularize(rho1, reg);
  const ScalarField T0 = mollify_regularize(theta1, reg);
  AcousticInit out;
  out.state.Z = axpby(ref.alpha, R0, ref.beta, T0);
  out.state.Phi = mollify_regularize(gradient_potential(u0), reg);
  out.state.eps = eps;
  out.state.ref = ref;
  out.state.t = 0.0;
  out.W0 = axpby(ref.delta, T0, -ref.beta, R0);
  return out;
}

AcousticPropagator::AcousticPropagator(const AcousticState& initial)
    : z0_(forward(initial.Z)),
      phi0_(forward(initial.Phi)),
      eps_(initial.eps),
      t0_(initial.t),
      ref_(initial.ref) {
  require_same_grid(initial.Z.grid(), initial.Phi.grid(), "AcousticPropagator");
}

void AcousticPropagator::coefficients_at(double t, Spectrum& z, Spectrum& phi) const {
  const auto modes = mode_table(z0_.grid);
  const double c = std::sqrt(ref_.omega);
  const double dt = t - t0_;
  z = z0_;
  phi = phi0_;
  for (std::size_t j = 0; j < modes->size(); ++j) {
    const double kk = std::sqrt(modes->k2[j]);
    if (kk == 0.0) {
      phi.c[j] = 0.0;
      continue;
    }
    const double ck = c * kk;
    const double arg = ck * dt / eps_;
    const double cs = std::cos(arg), sn = std::sin(arg);
    const Complex p0 = phi0_.c[j], z0 = z0_.c[j];
    phi.c[j] = p0 * cs - z0 / ck * sn;
    z.c[j] = z0 * cs + ck * p0 * sn;
  }
}

AcousticState AcousticPropagator::state_at(double t) const {
  Spectrum z, phi;
  coefficients_at(t, z, phi);
  return {inverse(z), inverse(phi), eps_, ref_, t};
}

AcousticState acoustic_advance(const AcousticState& state, double dt) {
  return AcousticPropagator(state).state_at(state.t + dt);
}

AcousticState acoustic_propagate(const AcousticState& state, double t_target) {
  if (t_target < state.t) throw DomainError("acoustic_propagate cannot go backwards; use acoustic_advance");
  return acoustic_advance(state, t_target - state.t);
}

double acoustic_energy(const AcousticState& state, int sobolev_k) {
  const Spectrum z = forward(state.Z);
  const Spectrum phi = forward(state.Phi);
  const auto modes = mode_table(z.grid);
  double grad_part = 0.0, z_part = 0.0;
  for (std::size_t j = 0; j < modes->size(); ++j) {
    const double k2 = modes->k2[j];
    const double w = modes->weight[j] * (sobolev_k == 0 ? 1.0 : std::pow(1.0 + k2, sobolev_k));
    grad_part += w * k2 * std::norm(phi.c[j]);
    z_part += w * std::norm(z.c[j]);
  }
  const double vol = z.grid.box_volume();
  return vol * (grad_part + z_part / state.ref.omega);
}

double acoustic_wrap_time(const Grid& grid, double r_support, double omega, double eps) {
  return eps * (grid.L / 2.0 - r_support) / std::sqrt(omega);
}

double decay_exponent_fit(const std::vector<DecaySample>& series, double eps, double t_wrap) {
  if (series.size() < 5) throw FitError("decay fit needs at least 5 samples");
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& s : series) {
    if (s.t > t_wrap) throw WindowError("decay sample beyond the wrap-around time");
    if (!(s.sup_norm > 0.0)) throw FitError("decay fit needs positive sup norms");
    const double x = -std::log1p(s.t / eps);
    const double y = std::log(s.sup_norm);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(series.size());
  const double den = n * sxx - sx * sx;
  if (!(den > 0.0)) throw FitError("decay fit needs distinct sample times");
  return (n * sxy - sx * sy) / den;
}

std::pair<ScalarField, ScalarField> recombine_RT(const ScalarField& Z, const ScalarField& W,
                                                 const ReferenceState& ref) {
  require_same_grid(Z.grid(), W.grid(), "recombine_RT");
  const double det = ref.beta * ref.beta + ref.alpha * ref.delta;
  if (!(det > 0.0)) throw DomainError("beta^2 + alpha*delta must be positive");
  ScalarField R = axpby(ref.delta / det, Z, -ref.beta / det, W);
  ScalarField T = axpby(ref.beta / det, Z, ref.alpha / det, W);
  return {std::move(R), std::move(T)};
}

AcousticRecord acoustic_record(const AcousticState& state) {
  return {state.t, state.eps, state.Z.max_abs(), grad(state.Phi).max_magnitude(),
          acoustic_energy(state)};
}

void write_acoustic_csv(const std::string& path, const std::vector<AcousticRecord>& rows) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "t,eps,sup_norm_Z,sup_norm_gradPhi,energy_a1\n" << std::setprecision(12);
  for (const auto& r : rows) {
    out << r.t << ',' << r.eps << ',' << r.sup_norm_Z << ',' << r.sup_norm_gradPhi << ','
        << r.energy_a1 << '\n';
  }
}

}  // namespace machlimit
