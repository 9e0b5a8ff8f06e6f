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

#include "machlimit/nsf.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "machlimit/errors.hpp"
#include "machlimit/kernels.hpp"
#include "machlimit/spectral.hpp"

namespace machlimit {

void ScalingParams::validate() const {
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  if (!(eta > 0.0)) throw DomainError("eta must be positive");
  if (!(b_exp > 0.0)) throw DomainError("Peclet exponent b must be positive");
  if (!(a_exp > 0.0 && a_exp < 10.0 / 3.0)) {
    throw DomainError("Reynolds exponent a must lie in (0, 10/3)");
  }
}

VectorField NsfState::velocity() const {
  VectorField u(grid());
  for (int d = 0; d < grid().dim; ++d) {
    for (std::size_t i = 0; i < rho.size(); ++i) u[d][i] = m[d][i] / rho[i];
  }
  return u;
}

double NsfState::mass() const { return rho.integral(); }
double NsfState::total_energy() const { return E.integral(); }

namespace {

double kinetic_density(const NsfState& s, std::size_t i) {
  double m2 = 0.0;
  for (int d = 0; d < s.grid().dim; ++d) m2 += s.m[d][i] * s.m[d][i];
  return 0.5 * m2 / s.rho[i];
}

// Coefficients of the acoustic block linearized about (ρ̄, θ̄): the pressure
// deviation is A(ρ−ρ̄) + Γ(ε²E − ρ̄ē) to first order, the enthalpy h̄ carries
// the energy flux.
struct LinearBlock {
  double A, Gamma, h_bar, e_bar, p_bar, omega;
};

LinearBlock linear_block(const GasModel& gas, const ReferenceState& ref) {
  const EosPoint pt = eval_eos(gas, ref.rho_bar, ref.theta_bar);
  const EosDerivatives d = eos_derivatives(gas, ref.rho_bar, ref.theta_bar);
  LinearBlock lb{};
  lb.Gamma = d.p_theta / (ref.rho_bar * d.e_theta);
  lb.A = d.p_rho - lb.Gamma * (pt.e + ref.rho_bar * d.e_rho);
  lb.e_bar = pt.e;
  lb.p_bar = pt.p;
  lb.h_bar = pt.e + pt.p / ref.rho_bar;
  lb.omega = lb.A + lb.Gamma * lb.h_bar;
  return lb;
}

// Σ_j ∂_j F_j, optionally 2/3-filtered.
ScalarField divergence_of(const std::vector<ScalarField>& F, bool filtered) {
  const Grid& g = F.front().grid();
  const auto modes = mode_table(g);
  Spectrum acc{g, std::vector<Complex>(modes->size())};
  for (int d = 0; d < g.dim; ++d) {
    const Spectrum s = forward(F[d]);
    for (std::size_t j = 0; j < acc.c.size(); ++j) {
      acc.c[j] += Complex(0.0, modes->k_odd[j][d]) * s.c[j];
    }
  }
  if (filtered) {
    for (std::size_t j = 0; j < acc.c.size(); ++j) {
      if (!modes->keep[j]) acc.c[j] = 0.0;
    }
  }
  return inverse(acc);
}

// ∂_j f for all j.
std::vector<ScalarField> gradient_components(const ScalarField& f) {
  const VectorField g = grad(f);
  std::vector<ScalarField> out;
  for (int d = 0; d < g.dim(); ++d) out.push_back(g[d]);
  return out;
}

struct Kinematics {
  VectorField u;
  std::vector<std::vector<ScalarField>> G;  // G[i][j] = ∂_j u_i
  ScalarField divu;
};

Kinematics kinematics(const NsfState& s) {
  Kinematics k;
  k.u = s.velocity();
  const int dim = s.grid().dim;
  k.divu = ScalarField(s.grid());
  for (int i = 0; i < dim; ++i) {
    k.G.push_back(gradient_components(k.u[i]));
    k.divu += k.G[i][i];
  }
  return k;
}

// S_ij = μ(∂_j u_i + ∂_i u_j − (2/3) div u δ_ij).
double stress(const Kinematics& k, int i, int j, std::size_t n, double mu) {
  double v = k.G[i][j][n] + k.G[j][i][n];
  if (i == j) v -= 2.0 / 3.0 * k.divu[n];
  return mu * v;
}

// 2|D°|² + 2(1/d − 1/3)(div u)² = S:∇u/μ, written as a sum of squares.
double shear_dissipation(const Kinematics& k, std::size_t n, int dim) {
  const double dv = k.divu[n];
  double dev = 0.0;
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      double Dij = 0.5 * (k.G[i][j][n] + k.G[j][i][n]);
      if (i == j) Dij -= dv / dim;
      dev += Dij * Dij;
    }
  }
  return 2.0 * dev + 2.0 * (1.0 / dim - 1.0 / 3.0) * dv * dv;
}

enum class Part { Full, Remainder };

NsfTendency tendency(const NsfState& s, const NsfOptions& opts, Part part,
                     const LinearBlock& lb) {
  const Grid& g = s.grid();
  const int dim = g.dim;
  const std::size_t N = g.size();
  const double eps = s.scaling.eps;
  const double inv_eps2 = 1.0 / (eps * eps);
  const double visc_scale = std::pow(eps, s.scaling.a_exp);
  const double heat_scale = std::pow(eps, s.scaling.b_exp - 2.0);
  const ReferenceState& ref = s.ref;

  const Kinematics k = kinematics(s);
  std::vector<ScalarField> grad_theta;
  if (opts.conductive) grad_theta = gradient_components(s.theta);

  // Pressure-like scalar entering the momentum flux and the energy flux factor.
  ScalarField press(g), enth(g), ke(g);
  std::vector<double> mu(N, 0.0), kappa(N, 0.0);
  for (std::size_t n = 0; n < N; ++n) {
    const double rho = s.rho[n];
    const double th = s.theta[n];
    const double p = eval_eos(s.gas, rho, th).p;
    ke[n] = kinetic_density(s, n);
    const double rho_e = eps * eps * (s.E[n] - ke[n]);
    if (part == Part::Full) {
      press[n] = p - lb.p_bar;
      enth[n] = rho_e + p;
    } else {
      press[n] = p - lb.p_bar - lb.A * (rho - ref.rho_bar) -
                 lb.Gamma * (eps * eps * s.E[n] - ref.rho_bar * lb.e_bar);
      enth[n] = (rho_e - ref.rho_bar * lb.e_bar) + (p - lb.p_bar) - lb.h_bar * (rho - ref.rho_bar);
    }
    const TransportCoefficients tc = transport_coefficients(s.gas, th);
    mu[n] = opts.viscous ? tc.mu : 0.0;
    kappa[n] = opts.conductive ? tc.kappa : 0.0;
  }

  NsfTendency out;
  out.dm = VectorField(g);
  std::vector<ScalarField> flux(dim, ScalarField(g));
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      for (std::size_t n = 0; n < N; ++n) {
        double f = s.m[i][n] * k.u[j][n];
        if (i == j) f += inv_eps2 * press[n];
        if (opts.viscous) f -= visc_scale * stress(k, i, j, n, mu[n]);
        flux[j][n] = f;
      }
    }
    out.dm[i] = divergence_of(flux, opts.dealias);
    out.dm[i] *= -1.0;
  }

  for (int j = 0; j < dim; ++j) {
    for (std::size_t n = 0; n < N; ++n) {
      double f = (ke[n] + inv_eps2 * enth[n]) * k.u[j][n];
      if (opts.viscous) {
        double su = 0.0;
        for (int i = 0; i < dim; ++i) su += stress(k, j, i, n, mu[n]) * k.u[i][n];
        f -= visc_scale * su;
      }
      if (opts.conductive) f -= heat_scale * kappa[n] * grad_theta[j][n];
      flux[j][n] = f;
    }
  }
  out.dE = divergence_of(flux, opts.dealias);
  out.dE *= -1.0;

  if (part == Part::Full) {
    std::vector<ScalarField> mf;
    for (int d = 0; d < dim; ++d) mf.push_back(s.m[d]);
    out.drho = divergence_of(mf, false);
    out.drho *= -1.0;
  } else {
    out.drho = ScalarField(g);
  }
  return out;
}

// Exact evolution of the linear acoustic block over τ, mode by mode.
void linear_acoustic(NsfState& s, double tau, const LinearBlock& lb) {
  const Grid& g = s.grid();
  const int dim = g.dim;
  const auto modes = mode_table(g);
  const double eps = s.scaling.eps;
  const double c = std::sqrt(lb.omega);
  const double ec = eps * c;
  Spectrum rho = forward(s.rho);
  Spectrum E = forward(s.E);
  std::vector<Spectrum> m;
  for (int d = 0; d < dim; ++d) m.push_back(forward(s.m[d]));
  const Complex I(0.0, 1.0);
  for (std::size_t j = 0; j < modes->size(); ++j) {
    const auto& ko = modes->k_odd[j];
    const double kk = std::sqrt(ko[0] * ko[0] + ko[1] * ko[1] + ko[2] * ko[2]);
    if (kk == 0.0) continue;
    Complex ml = 0.0;
    for (int d = 0; d < dim; ++d) ml += ko[d] / kk * m[d].c[j];
    const Complex a = lb.A * rho.c[j] + lb.Gamma * eps * eps * E.c[j];
    const Complex b = ec * ml;
    const double nu = c * kk / eps;
    const double cs = std::cos(nu * tau), sn = std::sin(nu * tau);
    const Complex b_new = b * cs - I * a * sn;
    const Complex J = (b * sn - I * a * (1.0 - cs)) / (nu * ec);
    rho.c[j] -= I * kk * J;
    E.c[j] -= I * kk * lb.h_bar / (eps * eps) * J;
    const Complex dml = b_new / ec - ml;
    for (int d = 0; d < dim; ++d) m[d].c[j] += ko[d] / kk * dml;
  }
  s.rho = inverse(rho);
  s.E = inverse(E);
  for (int d = 0; d < dim; ++d) s.m[d] = inverse(m[d]);
}

void add_scaled(NsfState& s, double w, const NsfTendency& k, double dt) {
  const std::size_t N = s.rho.size();
  for (std::size_t n = 0; n < N; ++n) {
    s.rho[n] += w * dt * k.drho[n];
    s.E[n] += w * dt * k.dE[n];
  }
  for (int d = 0; d < s.grid().dim; ++d) {
    for (std::size_t n = 0; n < N; ++n) s.m[d][n] += w * dt * k.dm[d][n];
  }
}

// a·x + b·y for the conservative fields; keeps x's metadata.
NsfState combine(double a, const NsfState& x, double b, const NsfState& y) {
  NsfState out = x;
  out.rho = axpby(a, x.rho, b, y.rho);
  out.E = axpby(a, x.E, b, y.E);
  for (int d = 0; d < x.grid().dim; ++d) out.m[d] = axpby(a, x.m[d], b, y.m[d]);
  return out;
}

}  // namespace

NsfState make_ill_prepared_data(const ScalarField& rho1, const ScalarField& theta1,
                                const VectorField& u0, const ScalingParams& scaling,
                                const ReferenceState& ref, const GasModel& gas) {
  require_same_grid(rho1.grid(), theta1.grid(), "make_ill_prepared_data");
  require_same_grid(rho1.grid(), u0.grid(), "make_ill_prepared_data");
  scaling.validate();
  const Grid& g = rho1.grid();
  const double eps = scaling.eps;
  NsfState s;
  s.scaling = scaling;
  s.gas = gas;
  s.ref = ref;
  s.rho = axpby(1.0, ScalarField(g, ref.rho_bar), eps, rho1);
  s.theta = axpby(1.0, ScalarField(g, ref.theta_bar), eps, theta1);
  s.m = VectorField(g);
  s.E = ScalarField(g);
  for (std::size_t n = 0; n < g.size(); ++n) {
    if (!(s.rho[n] > 0.0)) {
      std::ostringstream os;
      os << "vacuum in initial data at node " << n << " (rho = " << s.rho[n] << ")";
      throw DomainError(os.str());
    }
    if (!(s.theta[n] > 0.0)) {
      std::ostringstream os;
      os << "nonpositive initial temperature at node " << n;
      throw DomainError(os.str());
    }
    double u2 = 0.0;
    for (int d = 0; d < g.dim; ++d) {
      s.m[d][n] = s.rho[n] * u0[d][n];
      u2 += u0[d][n] * u0[d][n];
    }
    const double e = eval_eos(gas, s.rho[n], s.theta[n]).e;
    s.E[n] = 0.5 * s.rho[n] * u2 + s.rho[n] * e / (eps * eps);
  }
  return s;
}

void refresh_temperature(NsfState& state, const NsfOptions& opts) {
  const std::size_t N = state.rho.size();
  const double eps2 = state.scaling.eps * state.scaling.eps;
  std::vector<double> e(N);
  for (std::size_t n = 0; n < N; ++n) {
    if (!(state.rho[n] > 0.0) || !std::isfinite(state.rho[n])) {
      std::ostringstream os;
      os << "density lost positivity at node " << n << " (rho = " << state.rho[n]
         << ", t = " << state.t << ")";
      throw StateCorruption(os.str());
    }
    e[n] = eps2 * (state.E[n] - kinetic_density(state, n)) / state.rho[n];
  }
  std::span<const double> guess;
  if (state.theta.size() == N) guess = state.theta.values();
  const auto rec = opts.parallel
                       ? kernels::parallel::recover_temperature(state.gas, state.rho.values(), e,
                                                                guess, state.ref.theta_bar)
                       : kernels::serial::recover_temperature(state.gas, state.rho.values(), e,
                                                              guess, state.ref.theta_bar);
  if (rec.failed_at >= 0) {
    const auto n = static_cast<std::size_t>(rec.failed_at);
    std::ostringstream os;
    os << "temperature recovery failed at node " << n << " (rho = " << state.rho[n]
       << ", e = " << e[n] << ", t = " << state.t << ")";
    throw StateCorruption(os.str());
  }
  state.theta = ScalarField(state.grid(), rec.theta);
}

NsfTendency nsf_rhs(const NsfState& state, const NsfOptions& opts) {
  NsfState s = state;
  refresh_temperature(s, opts);
  return tendency(s, opts, Part::Full, linear_block(s.gas, s.ref));
}

double nsf_max_dt(const NsfState& state, const NsfOptions& opts) {
  const double umax = state.velocity().max_magnitude();
  if (umax == 0.0) return std::numeric_limits<double>::infinity();
  return opts.cfl_max * state.grid().dx() / umax;
}

NsfState nsf_step_imex(const NsfState& state, double dt, const NsfOptions& opts) {
  if (!(dt > 0.0)) throw DomainError("time step must be positive");
  const double limit = nsf_max_dt(state, opts);
  if (dt > limit) {
    std::ostringstream os;
    os << "time step " << dt << " exceeds the advective limit " << limit << " at t = " << state.t;
    throw CflError(os.str());
  }
  const LinearBlock lb = linear_block(state.gas, state.ref);

  NsfState y = state;
  linear_acoustic(y, 0.5 * dt, lb);
  refresh_temperature(y, opts);

  NsfState y1 = y;
  add_scaled(y1, 1.0, tendency(y, opts, Part::Remainder, lb), dt);
  refresh_temperature(y1, opts);

  NsfState y2 = y1;
  add_scaled(y2, 1.0, tendency(y1, opts, Part::Remainder, lb), dt);
  y2 = combine(0.75, y, 0.25, y2);
  refresh_temperature(y2, opts);

  NsfState y3 = y2;
  add_scaled(y3, 1.0, tendency(y2, opts, Part::Remainder, lb), dt);
  y3 = combine(1.0 / 3.0, y, 2.0 / 3.0, y3);

  linear_acoustic(y3, 0.5 * dt, lb);
  refresh_temperature(y3, opts);
  y3.t = state.t + dt;
  return y3;
}

ScalarField entropy_production(const NsfState& state, const NsfOptions& opts) {
  const Grid& g = state.grid();
  const int dim = g.dim;
  const double eps = state.scaling.eps;
  const double visc = std::pow(eps, 2.0 + state.scaling.a_exp);
  const double heat = std::pow(eps, state.scaling.b_exp);
  ScalarField sigma(g);
  std::vector<ScalarField> gt;
  if (opts.conductive) gt = gradient_components(state.theta);
  Kinematics k;
  if (opts.viscous) k = kinematics(state);
  for (std::size_t n = 0; n < g.size(); ++n) {
    const double th = state.theta[n];
    const TransportCoefficients tc = transport_coefficients(state.gas, th);
    double v = 0.0;
    if (opts.viscous) v += visc * tc.mu * shear_dissipation(k, n, dim);
    if (opts.conductive) {
      double gt2 = 0.0;
      for (int d = 0; d < dim; ++d) gt2 += gt[d][n] * gt[d][n];
      v += heat * tc.kappa * gt2 / th;
    }
    sigma[n] = v / th;
  }
  return sigma;
}

double dissipation_functional(const NsfState& state) {
  const std::size_t N = state.rho.size();
  const double inv_eps2 = 1.0 / (state.scaling.eps * state.scaling.eps);
  const double rb = state.ref.rho_bar, tb = state.ref.theta_bar;
  std::vector<double> dens(N);
  for (std::size_t n = 0; n < N; ++n) {
    dens[n] = kinetic_density(state, n) +
              inv_eps2 * relative_entropy_integrand(state.gas, state.rho[n], state.theta[n], rb, tb);
  }
  return kernels::serial::blocked_sum(dens) * state.grid().cell_volume();
}

double dissipation_rate(const NsfState& state, const NsfOptions& opts) {
  const double eps = state.scaling.eps;
  return state.ref.theta_bar / (eps * eps) * entropy_production(state, opts).integral();
}

BalanceReport dissipation_balance(const std::vector<NsfState>& history, const NsfOptions& opts) {
  BalanceReport rep;
  if (history.empty()) return rep;
  const double rhs = dissipation_functional(history.front());
  double integrated = 0.0;
  double last_rate = dissipation_rate(history.front(), opts);
  for (std::size_t i = 0; i < history.size(); ++i) {
    if (i > 0) {
      const double rate = dissipation_rate(history[i], opts);
      integrated += 0.5 * (history[i].t - history[i - 1].t) * (rate + last_rate);
      last_rate = rate;
    }
    const double lhs = (i == 0 ? rhs : dissipation_functional(history[i])) + integrated;
    rep.t.push_back(history[i].t);
    rep.lhs.push_back(lhs);
    rep.rhs.push_back(rhs);
    rep.gap.push_back(lhs - rhs);
    rep.max_gap = std::max(rep.max_gap, lhs - rhs);
    if (rhs != 0.0) rep.max_abs_rel_gap = std::max(rep.max_abs_rel_gap, std::abs(lhs - rhs) / rhs);
  }
  return rep;
}

DissipationAccumulator::DissipationAccumulator(const NsfState& initial, const NsfOptions& opts)
    : opts_(opts),
      initial_(dissipation_functional(initial)),
      functional_(initial_),
      last_rate_(dissipation_rate(initial, opts)),
      last_t_(initial.t) {}

void DissipationAccumulator::advance(const NsfState& state) {
  advance(state, dissipation_rate(state, opts_));
}

void DissipationAccumulator::advance(const NsfState& state, double rate) {
  integrated_ += 0.5 * (state.t - last_t_) * (rate + last_rate_);
  last_rate_ = rate;
  last_t_ = state.t;
  functional_ = dissipation_functional(state);
}

void write_nsf_csv(const std::string& path, const std::vector<NsfRecord>& rows) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "t,mass,energy,min_rho,min_theta,entropy_prod_min,v4_gap\n" << std::setprecision(15);
  for (const auto& r : rows) {
    out << r.t << ',' << r.mass << ',' << r.energy << ',' << r.min_rho << ',' << r.min_theta << ','
        << r.entropy_prod_min << ',' << r.v4_gap << '\n';
  }
}

}  // namespace machlimit
