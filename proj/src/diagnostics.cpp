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

#include "machlimit/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "machlimit/errors.hpp"
#include "machlimit/kernels.hpp"
#include "machlimit/spectral.hpp"

namespace machlimit {
namespace {

double quadrature(const std::vector<double>& density, const Grid& g) {
  return kernels::serial::blocked_sum(density) * g.cell_volume();
}

// G[i][j] = ∂_j f_i
std::vector<VectorField> jacobian(const VectorField& f) {
  std::vector<VectorField> G;
  for (int i = 0; i < f.dim(); ++i) G.push_back(grad(f[i]));
  return G;
}

double l2_sq_of_gradient(const ScalarField& f) {
  const VectorField g = grad(f);
  return inner_product(g, g);
}

}  // namespace

double relative_entropy(const NsfState& nsf, const ScalarField& r, const ScalarField& Theta,
                        const VectorField& U) {
  const Grid& g = nsf.grid();
  require_same_grid(g, r.grid(), "relative_entropy");
  require_same_grid(g, Theta.grid(), "relative_entropy");
  require_same_grid(g, U.grid(), "relative_entropy");
  const double inv_eps2 = 1.0 / (nsf.scaling.eps * nsf.scaling.eps);
  std::vector<double> dens(g.size());
  for (std::size_t n = 0; n < g.size(); ++n) {
    const double rho = nsf.rho[n];
    double w2 = 0.0;
    for (int d = 0; d < g.dim; ++d) {
      const double w = nsf.m[d][n] / rho - U[d][n];
      w2 += w * w;
    }
    dens[n] = 0.5 * rho * w2 +
              inv_eps2 * relative_entropy_integrand(nsf.gas, rho, nsf.theta[n], r[n], Theta[n]);
  }
  return quadrature(dens, g);
}

std::size_t EssResMasks::ess_count() const {
  return static_cast<std::size_t>(std::count(ess.begin(), ess.end(), 1));
}

EssResMasks ess_res_split(const NsfState& nsf, const ReferenceState& ref) {
  EssResMasks m;
  const std::size_t N = nsf.rho.size();
  m.ess.resize(N);
  m.res.resize(N);
  for (std::size_t n = 0; n < N; ++n) {
    const double rho = nsf.rho[n], th = nsf.theta[n];
    const bool ess = rho > 0.5 * ref.rho_bar && rho < 2.0 * ref.rho_bar &&
                     th > 0.5 * ref.theta_bar && th < 2.0 * ref.theta_bar;
    m.ess[n] = ess ? 1 : 0;
    m.res[n] = ess ? 0 : 1;
  }
  return m;
}

ScalarField essential_part(const ScalarField& h, const EssResMasks& masks) {
  ScalarField out(h.grid());
  for (std::size_t n = 0; n < h.size(); ++n) out[n] = masks.ess[n] ? h[n] : 0.0;
  return out;
}

ScalarField residual_part(const ScalarField& h, const EssResMasks& masks) {
  ScalarField out(h.grid());
  for (std::size_t n = 0; n < h.size(); ++n) out[n] = masks.res[n] ? h[n] : 0.0;
  return out;
}

NamedValues uniform_bounds_report(const std::vector<NsfState>& history,
                                  const ScalingParams& scaling) {
  NamedValues out{{"b3", 0.0},          {"b4_rho", 0.0}, {"b4_theta", 0.0},
                  {"b5", 0.0},          {"b5_over_eps2", 0.0},
                  {"b6", 0.0},          {"b7_theta", 0.0}, {"b7_log_theta", 0.0}};
  if (history.empty()) return out;
  const double eps = scaling.eps;
  std::vector<double> t, b6_rate, b7_rate, b7_log_rate;
  for (const NsfState& s : history) {
    const Grid& g = s.grid();
    const std::size_t N = g.size();
    const ReferenceState& ref = s.ref;
    const EssResMasks masks = ess_res_split(s, ref);

    std::vector<double> kin(N), res(N);
    ScalarField drho(g), dth(g), logth(g);
    for (std::size_t n = 0; n < N; ++n) {
      double m2 = 0.0;
      for (int d = 0; d < g.dim; ++d) m2 += s.m[d][n] * s.m[d][n];
      kin[n] = m2 / s.rho[n];
      drho[n] = s.rho[n] - ref.rho_bar;
      dth[n] = s.theta[n] - ref.theta_bar;
      logth[n] = std::log(s.theta[n]) - std::log(ref.theta_bar);
      res[n] = masks.res[n] ? std::pow(s.rho[n], 5.0 / 3.0) + std::pow(s.theta[n], 4) + 1.0 : 0.0;
    }
    out["b3"] = std::max(out["b3"], std::sqrt(quadrature(kin, g)));
    out["b4_rho"] = std::max(out["b4_rho"], essential_part(drho, masks).l2_norm() / eps);
    out["b4_theta"] = std::max(out["b4_theta"], essential_part(dth, masks).l2_norm() / eps);
    const double b5 = quadrature(res, g);
    out["b5"] = std::max(out["b5"], b5);
    out["b5_over_eps2"] = std::max(out["b5_over_eps2"], b5 / (eps * eps));

    const VectorField u = s.velocity();
    double grad_u = 0.0;
    for (int d = 0; d < g.dim; ++d) grad_u += l2_sq_of_gradient(u[d]);
    t.push_back(s.t);
    b6_rate.push_back(std::pow(eps, scaling.a_exp) * (inner_product(u, u) + grad_u));
    const double w = std::pow(eps, scaling.b_exp - 2.0);
    b7_rate.push_back(w * (inner_product(dth, dth) + l2_sq_of_gradient(dth)));
    b7_log_rate.push_back(w * (inner_product(logth, logth) + l2_sq_of_gradient(logth)));
  }
  auto integrate = [&](const std::vector<double>& f) {
    double s = 0.0;
    for (std::size_t i = 1; i < f.size(); ++i) s += 0.5 * (t[i] - t[i - 1]) * (f[i] + f[i - 1]);
    return s;
  };
  out["b6"] = std::sqrt(integrate(b6_rate));
  out["b7_theta"] = std::sqrt(integrate(b7_rate));
  out["b7_log_theta"] = std::sqrt(integrate(b7_log_rate));
  return out;
}

std::vector<unsigned char> Subdomain::mask(const Grid& grid) const {
  std::vector<unsigned char> m(grid.size(), 1);
  if (radius <= 0.0) return m;
  for (std::size_t n = 0; n < grid.size(); ++n) {
    const auto x = grid.coord(n);
    double r2 = 0.0;
    for (int d = 0; d < grid.dim; ++d) r2 += (x[d] - center[d]) * (x[d] - center[d]);
    m[n] = r2 <= radius * radius ? 1 : 0;
  }
  return m;
}

double limit_temperature_factor(const ReferenceState& ref) {
  const double det = ref.beta * ref.beta + ref.alpha * ref.delta;
  if (!(det > 0.0)) throw DomainError("beta^2 + alpha*delta must be positive");
  return ref.alpha / det;
}

NamedValues convergence_metrics(const NsfState& nsf, const EulerBoussinesqState& euler,
                                const ReferenceState& ref, const ScalingParams& scaling,
                                const Subdomain& K) {
  const Grid& g = nsf.grid();
  require_same_grid(g, euler.v.grid(), "convergence_metrics");
  if (std::abs(nsf.t - euler.t) > 1e-9 * std::max(1.0, std::abs(nsf.t))) {
    throw GridMismatch("convergence_metrics: states at different times");
  }
  const std::size_t N = g.size();
  const double eps = scaling.eps;
  const EssResMasks masks = ess_res_split(nsf, ref);
  const auto in_K = K.mask(g);
  const double factor = limit_temperature_factor(ref);

  ScalarField drho(g);
  std::vector<double> m4(N, 0.0), m5a(N, 0.0), m5b(N, 0.0);
  const double sqrt_rb = std::sqrt(ref.rho_bar);
  for (std::size_t n = 0; n < N; ++n) {
    drho[n] = nsf.rho[n] - ref.rho_bar;
    if (!in_K[n]) continue;
    const double sr = std::sqrt(nsf.rho[n]);
    double w2 = 0.0;
    for (int d = 0; d < g.dim; ++d) {
      const double w = nsf.m[d][n] / sr - sqrt_rb * euler.v[d][n];
      w2 += w * w;
    }
    m4[n] = w2;
    const double dev = std::abs((nsf.theta[n] - ref.theta_bar) / eps - factor * euler.T[n]);
    m5a[n] = dev;
    m5b[n] = std::pow(dev, 1.5);
  }
  NamedValues out;
  out["m3"] = essential_part(drho, masks).l2_norm() + residual_part(drho, masks).lp_norm(5.0 / 3.0);
  out["m4"] = std::sqrt(quadrature(m4, g));
  out["m5_q1"] = quadrature(m5a, g);
  out["m5_q3/2"] = std::pow(quadrature(m5b, g), 2.0 / 3.0);
  return out;
}

R1Sample r1_sample(const NsfState& nsf, const AcousticState& acoustic, const ScalarField& W,
                   const EulerBoussinesqState& euler, const NsfOptions& opts) {
  const Grid& g = nsf.grid();
  require_same_grid(g, acoustic.Z.grid(), "r1_sample");
  require_same_grid(g, W.grid(), "r1_sample");
  require_same_grid(g, euler.v.grid(), "r1_sample");
  const int dim = g.dim;
  const std::size_t N = g.size();
  const ReferenceState& ref = nsf.ref;
  const double eps = nsf.scaling.eps;
  const double inv_eps2 = 1.0 / (eps * eps);
  const double visc = std::pow(eps, nsf.scaling.a_exp);
  const double heat = std::pow(eps, nsf.scaling.b_exp);

  // Test trio and its time derivative.
  const auto [R, T] = recombine_RT(acoustic.Z, W, ref);
  ScalarField r = axpby(1.0, ScalarField(g, ref.rho_bar), eps, R);
  ScalarField Theta = axpby(1.0, ScalarField(g, ref.theta_bar), eps, T);
  if (r.min() <= 0.0 || Theta.min() <= 0.0) {
    throw TestFunctionError("test density or temperature lost positivity; reduce eps or amplitude");
  }
  VectorField U = euler.v;
  U += grad(acoustic.Phi);
  ScalarField dZ = laplacian(acoustic.Phi);
  dZ *= -acoustic.ref.omega / eps;
  VectorField WU(g);
  for (int d = 0; d < dim; ++d) {
    for (std::size_t n = 0; n < N; ++n) WU[d][n] = W[n] * U[d][n];
  }
  ScalarField dW = div(WU);
  dW *= -1.0;
  const auto [dR, dT] = recombine_RT(dZ, dW, ref);
  VectorField dU = euler_tendency(euler.v);
  {
    ScalarField zs = acoustic.Z;
    zs *= -1.0 / eps;
    dU += grad(zs);
  }

  ScalarField p_rT(g);
  std::vector<double> dp_rT(N), s_rT(N);
  for (std::size_t n = 0; n < N; ++n) {
    const EosPoint pt = eval_eos(nsf.gas, r[n], Theta[n]);
    const EosDerivatives dd = eos_derivatives(nsf.gas, r[n], Theta[n]);
    p_rT[n] = pt.p;
    s_rT[n] = pt.s;
    dp_rT[n] = dd.p_rho * eps * dR[n] + dd.p_theta * eps * dT[n];
  }
  const VectorField grad_p = grad(p_rT);
  const VectorField grad_Theta = grad(Theta);
  const auto GU = jacobian(U);
  const ScalarField divU = div(U);
  const VectorField u = nsf.velocity();
  const auto Gu = jacobian(u);
  const VectorField grad_theta = grad(nsf.theta);

  std::vector<double> rhs(N), diss(N), mag(N);
  for (std::size_t n = 0; n < N; ++n) {
    const double rho = nsf.rho[n];
    const double th = nsf.theta[n];
    const TransportCoefficients tc = transport_coefficients(nsf.gas, th);
    const double mu = opts.viscous ? tc.mu : 0.0;
    const double kappa = opts.conductive ? tc.kappa : 0.0;
    const EosPoint st = eval_eos(nsf.gas, rho, th);

    double divu = 0.0;
    for (int d = 0; d < dim; ++d) divu += Gu[d][d][n];

    double t1 = 0.0, t2 = 0.0, shear = 0.0;
    for (int i = 0; i < dim; ++i) {
      double adv = dU[i][n];
      for (int j = 0; j < dim; ++j) adv += u[j][n] * GU[i][j][n];
      t1 += adv * (U[i][n] - u[i][n]);
      for (int j = 0; j < dim; ++j) {
        double S = Gu[i][j][n] + Gu[j][i][n];
        if (i == j) S -= 2.0 / 3.0 * divu;
        S *= mu;
        t2 += S * GU[i][j][n];
        shear += S * Gu[i][j][n];
      }
    }
    t1 *= rho;
    t2 *= visc;

    double wgp = 0.0, ugT = 0.0, UgP = 0.0, qgT = 0.0, gth2 = 0.0;
    for (int d = 0; d < dim; ++d) {
      wgp += (U[d][n] - u[d][n]) * grad_p[d][n];
      ugT += u[d][n] * grad_Theta[d][n];
      UgP += U[d][n] * grad_p[d][n];
      const double q = -kappa * grad_theta[d][n];
      qgT += q / th * grad_Theta[d][n];
      gth2 += grad_theta[d][n] * grad_theta[d][n];
    }
    const double t3a = inv_eps2 * (p_rT[n] - st.p) * divU[n];
    const double t3b = inv_eps2 * rho / r[n] * wgp;
    const double ds = rho * (st.s - s_rT[n]);
    const double t4a = -inv_eps2 * ds * eps * dT[n];
    const double t4b = -inv_eps2 * ds * ugT;
    const double t4c = -inv_eps2 * heat * qgT;
    const double t5 = inv_eps2 * (r[n] - rho) / r[n] * (dp_rT[n] + UgP);

    rhs[n] = t1 + t2 + t3a + t3b + t4a + t4b + t4c + t5;
    diss[n] = Theta[n] / th * (visc * shear + heat * inv_eps2 * kappa * gth2 / th);
    mag[n] = std::abs(t1) + std::abs(t2) + std::abs(t3a) + std::abs(t3b) + std::abs(t4a) +
             std::abs(t4b) + std::abs(t4c) + std::abs(t5) + std::abs(diss[n]);
  }

  R1Sample s;
  s.t = nsf.t;
  s.rel_entropy = relative_entropy(nsf, r, Theta, U);
  s.rhs_rate = quadrature(rhs, g);
  s.dissipation = quadrature(diss, g);
  s.magnitude = quadrature(mag, g);
  return s;
}

R1Accumulator::R1Accumulator(const R1Sample& initial) : first_(initial), last_(initial) {}

void R1Accumulator::add(const R1Sample& s) {
  const double h = s.t - last_.t;
  rhs_int_ += 0.5 * h * (s.rhs_rate + last_.rhs_rate);
  diss_int_ += 0.5 * h * (s.dissipation + last_.dissipation);
  mag_int_ += 0.5 * h * (s.magnitude + last_.magnitude);
  last_ = s;
  const double lhs = (last_.rel_entropy - first_.rel_entropy) + diss_int_;
  gap_ = rhs_int_ - lhs;
}

double R1Accumulator::scale() const {
  return mag_int_ + std::abs(last_.rel_entropy - first_.rel_entropy);
}

double r1_residual(const std::vector<NsfState>& history,
                   const std::vector<AcousticState>& acoustic_hist,
                   const std::vector<TransportState>& transport_hist,
                   const std::vector<EulerBoussinesqState>& euler_hist, double tau,
                   const NsfOptions& opts) {
  const std::size_t n = history.size();
  if (n == 0 || acoustic_hist.size() != n || transport_hist.size() != n || euler_hist.size() != n) {
    throw GridMismatch("r1_residual: histories must be aligned and nonempty");
  }
  R1Accumulator acc(r1_sample(history[0], acoustic_hist[0], transport_hist[0].W, euler_hist[0], opts));
  for (std::size_t i = 1; i < n && history[i].t <= tau + 1e-12; ++i) {
    acc.add(r1_sample(history[i], acoustic_hist[i], transport_hist[i].W, euler_hist[i], opts));
  }
  return acc.gap();
}

}  // namespace machlimit
