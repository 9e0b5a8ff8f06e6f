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

#include "machlimit/transport.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "machlimit/errors.hpp"
#include "machlimit/spectral.hpp"

namespace machlimit {
namespace {

void interpolate(const ScalarField& f, const kernels::Points& pts, const TransportOptions& opts,
                 bool clip, std::span<double> out) {
  if (opts.parallel) kernels::parallel::interpolate(f, pts, opts.order, clip, out);
  else kernels::serial::interpolate(f, pts, opts.order, clip, out);
}

void check_cfl(const VectorField& U, double dt, const TransportOptions& opts) {
  const double courant = U.max_magnitude() * std::abs(dt) / U.grid().dx();
  if (courant > opts.cfl_max) {
    std::ostringstream os;
    os << "transport step too large: Courant number " << courant << " > " << opts.cfl_max;
    throw CflError(os.str());
  }
}

// Midpoint characteristic feet: X_m = x − dt/2 U(X_m), X_d = x − dt U(X_m).
struct Feet {
  kernels::Points mid;
  kernels::Points dep;
};

Feet trace_back(const VectorField& U, double dt, const TransportOptions& opts) {
  const Grid& g = U.grid();
  const std::size_t N = g.size();
  const int dim = g.dim;
  Feet feet;
  feet.mid.dim = feet.dep.dim = dim;
  feet.mid.xyz.resize(N * dim);
  feet.dep.xyz.resize(N * dim);
  std::vector<std::array<double, 3>> x(N);
  for (std::size_t i = 0; i < N; ++i) x[i] = g.coord(i);
  for (std::size_t i = 0; i < N; ++i) {
    for (int d = 0; d < dim; ++d) feet.mid.xyz[i * dim + d] = x[i][d] - 0.5 * dt * U[d][i];
  }
  std::vector<double> u(N);
  std::vector<double> um(N * dim);
  for (int iter = 0; iter < 3; ++iter) {
    for (int d = 0; d < dim; ++d) {
      interpolate(U[d], feet.mid, opts, false, u);
      for (std::size_t i = 0; i < N; ++i) um[i * dim + d] = u[i];
    }
    for (std::size_t i = 0; i < N; ++i) {
      for (int d = 0; d < dim; ++d) feet.mid.xyz[i * dim + d] = x[i][d] - 0.5 * dt * um[i * dim + d];
    }
  }
  for (std::size_t i = 0; i < N; ++i) {
    for (int d = 0; d < dim; ++d) feet.dep.xyz[i * dim + d] = x[i][d] - dt * um[i * dim + d];
  }
  return feet;
}

}  // namespace

TransportState transport_step(const TransportState& state, const VectorField& U,
                              const ScalarField& divU, double dt, const TransportOptions& opts) {
  require_same_grid(state.W.grid(), U.grid(), "transport_step");
  require_same_grid(state.W.grid(), divU.grid(), "transport_step");
  check_cfl(U, dt, opts);
  const Feet feet = trace_back(U, dt, opts);
  const std::size_t N = state.W.size();
  std::vector<double> w(N), dm(N);
  interpolate(state.W, feet.dep, opts, opts.bounded, w);
  interpolate(divU, feet.mid, opts, false, dm);
  for (std::size_t i = 0; i < N; ++i) w[i] *= std::exp(-dt * dm[i]);
  return {ScalarField(state.W.grid(), std::move(w)), state.t + dt};
}

double l2_balance_residual(const std::vector<TransportState>& history,
                           const std::vector<ScalarField>& phi_history) {
  if (history.size() < 3) throw DomainError("L2 balance needs at least 3 samples");
  if (phi_history.size() != history.size()) {
    throw GridMismatch("potential history and transport history differ in length");
  }
  const double dt = history[1].t - history[0].t;
  for (std::size_t i = 1; i < history.size(); ++i) {
    const double step = history[i].t - history[i - 1].t;
    if (std::abs(step - dt) > 1e-9 * std::abs(dt)) {
      throw DomainError("L2 balance needs uniform sampling in time");
    }
  }
  std::vector<double> source(history.size());
  for (std::size_t i = 0; i < history.size(); ++i) {
    const ScalarField lap = laplacian(phi_history[i]);
    const ScalarField& W = history[i].W;
    require_same_grid(W.grid(), lap.grid(), "l2_balance_residual");
    double s = 0.0;
    for (std::size_t j = 0; j < W.size(); ++j) s += lap[j] * W[j] * W[j];
    source[i] = s * W.grid().cell_volume();
  }
  double integral = 0.0;
  for (std::size_t i = 1; i < source.size(); ++i) integral += 0.5 * dt * (source[i - 1] + source[i]);
  const double w0 = history.front().W.l2_norm();
  const double w1 = history.back().W.l2_norm();
  const double gap = std::abs((w1 * w1 - w0 * w0) + integral);
  return w0 > 0.0 ? gap / (w0 * w0) : gap;
}

ScalarField adjusted_initial_temperature(const ScalarField& rho1, const ScalarField& theta1,
                                         const GasModel& gas, const ReferenceState& ref) {
  require_same_grid(rho1.grid(), theta1.grid(), "adjusted_initial_temperature");
  const EosDerivatives d = eos_derivatives(gas, ref.rho_bar, ref.theta_bar);
  return axpby(ref.rho_bar * d.s_theta, theta1, -d.p_theta / ref.rho_bar, rho1);
}

ScalarField limit_temperature_step(const ScalarField& T, const VectorField& v, double dt,
                                   const TransportOptions& opts) {
  require_same_grid(T.grid(), v.grid(), "limit_temperature_step");
  const double vmax = v.max_magnitude();
  if (vmax == 0.0) return T;
  const double divergence = div(v).max_abs();
  if (divergence > 1e-8 * vmax / v.grid().dx() + 1e-14) {
    throw DomainError("limit temperature transport needs a solenoidal velocity");
  }
  check_cfl(v, dt, opts);
  const Feet feet = trace_back(v, dt, opts);
  std::vector<double> out(T.size());
  interpolate(T, feet.dep, opts, opts.bounded, out);
  return ScalarField(T.grid(), std::move(out));
}

void write_transport_csv(const std::string& path, const std::vector<TransportRecord>& rows) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "t,l2_W,linf_W,a3_residual\n" << std::setprecision(12);
  for (const auto& r : rows) {
    out << r.t << ',' << r.l2_W << ',' << r.linf_W << ',' << r.a3_residual << '\n';
  }
}

}  // namespace machlimit
