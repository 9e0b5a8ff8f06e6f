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

#include "machlimit/euler.hpp"

#include <cmath>
#include <sstream>

#include "machlimit/errors.hpp"
#include "machlimit/spectral.hpp"

namespace machlimit {
namespace {

// (v·∇)v componentwise.
VectorField advection(const VectorField& v) {
  const Grid& g = v.grid();
  VectorField out(g);
  for (int i = 0; i < g.dim; ++i) {
    const VectorField gi = grad(v[i]);
    for (std::size_t n = 0; n < g.size(); ++n) {
      double s = 0.0;
      for (int j = 0; j < g.dim; ++j) s += v[j][n] * gi[j][n];
      out[i][n] = s;
    }
  }
  return out;
}

double divergence_ratio(const VectorField& v) {
  const double vmax = v.max_magnitude();
  if (vmax == 0.0) return 0.0;
  return div(v).max_abs() * v.grid().dx() / vmax;
}

VectorField combine(const VectorField& v, double w, const VectorField& k) {
  VectorField out = v;
  for (int d = 0; d < v.dim(); ++d) {
    for (std::size_t n = 0; n < out[d].size(); ++n) out[d][n] += w * k[d][n];
  }
  return out;
}

}  // namespace

VectorField euler_tendency(const VectorField& v, bool dealiased) {
  VectorField a = advection(v);
  if (dealiased) a = dealias(a);
  VectorField t = leray_project(a);
  t *= -1.0;
  return t;
}

ScalarField euler_pressure(const VectorField& v, bool dealiased) {
  VectorField a = advection(v);
  if (dealiased) a = dealias(a);
  ScalarField d = div(a);
  d *= -1.0;
  return inverse_laplacian(d);
}

EulerBoussinesqState euler_step(const EulerBoussinesqState& state, double dt,
                                const EulerOptions& opts) {
  if (divergence_ratio(state.v) > 1e-8) {
    throw DomainError("euler_step needs a divergence-free velocity");
  }
  const double vmax = state.v.max_magnitude();
  if (vmax * dt / state.v.grid().dx() > opts.cfl_max) {
    std::ostringstream os;
    os << "Euler step " << dt << " exceeds the Courant limit at t = " << state.t;
    throw CflError(os.str());
  }
  const VectorField& v = state.v;
  const VectorField k1 = euler_tendency(v, opts.dealias);
  const VectorField k2 = euler_tendency(combine(v, 0.5 * dt, k1), opts.dealias);
  const VectorField k3 = euler_tendency(combine(v, 0.5 * dt, k2), opts.dealias);
  const VectorField k4 = euler_tendency(combine(v, dt, k3), opts.dealias);
  VectorField next = v;
  for (int d = 0; d < v.dim(); ++d) {
    for (std::size_t n = 0; n < next[d].size(); ++n) {
      next[d][n] += dt / 6.0 * (k1[d][n] + 2.0 * k2[d][n] + 2.0 * k3[d][n] + k4[d][n]);
    }
  }
  next = leray_project(next);

  EulerBoussinesqState out;
  VectorField vmid = v;
  vmid += next;
  vmid *= 0.5;
  out.T = limit_temperature_step(state.T, vmid, dt, opts.temperature);
  out.Pi = euler_pressure(next, opts.dealias);
  out.v = std::move(next);
  out.t = state.t + dt;
  return out;
}

EulerBoussinesqState euler_initial_state(const VectorField& v0, const ScalarField& T0,
                                         const EulerOptions& opts) {
  require_same_grid(v0.grid(), T0.grid(), "euler_initial_state");
  EulerBoussinesqState s;
  s.v = leray_project(opts.dealias ? dealias(v0) : v0);
  s.T = T0;
  s.Pi = euler_pressure(s.v, opts.dealias);
  s.t = 0.0;
  return s;
}

std::vector<EulerBoussinesqState> euler_boussinesq_run(const VectorField& v0,
                                                       const ScalarField& T0,
                                                       const std::vector<double>& sample_times,
                                                       double dt, const EulerOptions& opts) {
  if (!(dt > 0.0)) throw DomainError("time step must be positive");
  EulerBoussinesqState s = euler_initial_state(v0, T0, opts);
  std::vector<EulerBoussinesqState> out;
  for (double target : sample_times) {
    if (target < s.t - 1e-12) throw DomainError("sample times must be increasing");
    const double span = target - s.t;
    if (span > 1e-14) {
      const long steps = static_cast<long>(std::ceil(span / dt - 1e-9));
      const double h = span / static_cast<double>(steps);
      for (long i = 0; i < steps; ++i) s = euler_step(s, h, opts);
    }
    s.t = target;
    out.push_back(s);
  }
  return out;
}

double kinetic_energy(const VectorField& v) { return inner_product(v, v); }

double enstrophy_2d(const VectorField& v) {
  if (v.dim() != 2) throw GridMismatch("enstrophy_2d needs a 2D field");
  const VectorField g0 = grad(v[0]);
  const VectorField g1 = grad(v[1]);
  ScalarField w = g1[0];
  w -= g0[1];
  return inner_product(w, w);
}

}  // namespace machlimit
