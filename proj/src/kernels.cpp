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

#include "machlimit/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "machlimit/errors.hpp"

namespace machlimit::kernels {
namespace {

constexpr int kMaxStencil = 6;

struct AxisStencil {
  std::array<int, kMaxStencil> idx;
  std::array<double, kMaxStencil> w;
  int lo, hi;  // cell corners
};

AxisStencil axis_stencil(double x, double h, int n, int order) {
  const int width = order + 1;
  const int start = -(order - 1) / 2;
  const double s = x / h;
  const double fl = std::floor(s);
  const double t = s - fl;
  long base = static_cast<long>(fl) % n;
  if (base < 0) base += n;
  AxisStencil st{};
  for (int j = 0; j < width; ++j) {
    const double oj = start + j;
    double w = 1.0;
    for (int m = 0; m < width; ++m) {
      if (m == j) continue;
      const double om = start + m;
      w *= (t - om) / (oj - om);
    }
    st.w[j] = w;
    st.idx[j] = static_cast<int>(((base + start + j) % n + n) % n);
  }
  st.lo = static_cast<int>(base);
  st.hi = static_cast<int>((base + 1) % n);
  return st;
}

double interpolate_point(const ScalarField& f, const double* x, int order, bool clip) {
  const Grid& g = f.grid();
  const int width = order + 1;
  const double h = g.dx();
  const int n = g.n;
  std::array<AxisStencil, 3> ax;
  for (int d = 0; d < g.dim; ++d) ax[d] = axis_stencil(x[d], h, n, order);
  const auto v = f.values();
  double value = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  auto corner = [&](std::size_t idx) {
    lo = std::min(lo, v[idx]);
    hi = std::max(hi, v[idx]);
  };
  const std::size_t nn = static_cast<std::size_t>(n);
  if (g.dim == 1) {
    for (int a = 0; a < width; ++a) value += ax[0].w[a] * v[ax[0].idx[a]];
    if (clip) {
      corner(ax[0].lo);
      corner(ax[0].hi);
    }
  } else if (g.dim == 2) {
    for (int a = 0; a < width; ++a) {
      const std::size_t row = static_cast<std::size_t>(ax[0].idx[a]) * nn;
      double acc = 0.0;
      for (int b = 0; b < width; ++b) acc += ax[1].w[b] * v[row + ax[1].idx[b]];
      value += ax[0].w[a] * acc;
    }
    if (clip) {
      for (int a : {ax[0].lo, ax[0].hi}) {
        for (int b : {ax[1].lo, ax[1].hi}) corner(static_cast<std::size_t>(a) * nn + b);
      }
    }
  } else {
    for (int a = 0; a < width; ++a) {
      double acc_a = 0.0;
      for (int b = 0; b < width; ++b) {
        const std::size_t row =
            (static_cast<std::size_t>(ax[0].idx[a]) * nn + ax[1].idx[b]) * nn;
        double acc = 0.0;
        for (int c = 0; c < width; ++c) acc += ax[2].w[c] * v[row + ax[2].idx[c]];
        acc_a += ax[1].w[b] * acc;
      }
      value += ax[0].w[a] * acc_a;
    }
    if (clip) {
      for (int a : {ax[0].lo, ax[0].hi}) {
        for (int b : {ax[1].lo, ax[1].hi}) {
          for (int c : {ax[2].lo, ax[2].hi}) {
            corner((static_cast<std::size_t>(a) * nn + b) * nn + c);
          }
        }
      }
    }
  }
  if (clip) value = std::clamp(value, lo, hi);
  return value;
}

void check_points(const ScalarField& f, const Points& pts, std::span<double> out) {
  if (pts.dim != f.grid().dim) throw GridMismatch("departure points have the wrong dimension");
  if (out.size() != pts.size()) throw GridMismatch("output size does not match point count");
}

void check_recovery_inputs(std::span<const double> rho, std::span<const double> e,
                           std::span<const double> guess) {
  if (rho.size() != e.size() || (!guess.empty() && guess.size() != rho.size())) {
    throw GridMismatch("temperature recovery inputs differ in length");
  }
}

}  // namespace

double solve_temperature(const GasModel& gas, double rho, double e, double guess,
                         double theta_bar) {
  if (!(rho > 0.0) || !std::isfinite(e)) return -1.0;
  auto residual = [&](double th) { return energy_and_slope(gas, rho, th).e - e; };
  double lo = theta_bar / 10.0;
  double hi = theta_bar * 10.0;
  while (residual(lo) > 0.0) {
    lo /= 10.0;
    if (lo < 1e-12 * theta_bar) return -1.0;
  }
  while (residual(hi) < 0.0) {
    hi *= 10.0;
    if (hi > 1e12 * theta_bar) return -1.0;
  }
  double th = (guess > lo && guess < hi) ? guess : 0.5 * (lo + hi);
  const double tol = 1e-15 * std::max(std::abs(e), 1e-300);
  for (int it = 0; it < 200; ++it) {
    const EnergySlope es = energy_and_slope(gas, rho, th);
    const double r = es.e - e;
    if (std::abs(r) <= tol) return th;
    if (r > 0.0) hi = th;
    else lo = th;
    double next = th - r / es.e_theta;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - th) <= 4.0 * std::numeric_limits<double>::epsilon() * th) return next;
    th = next;
  }
  return th;
}

namespace serial {

void interpolate(const ScalarField& f, const Points& pts, InterpOrder order, bool clip,
                 std::span<double> out) {
  check_points(f, pts, out);
  const int p = static_cast<int>(order);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    out[i] = interpolate_point(f, &pts.xyz[i * pts.dim], p, clip);
  }
}

TemperatureRecovery recover_temperature(const GasModel& gas, std::span<const double> rho,
                                        std::span<const double> e,
                                        std::span<const double> guess, double theta_bar) {
  check_recovery_inputs(rho, e, guess);
  TemperatureRecovery out;
  out.theta.resize(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) {
    const double g = guess.empty() ? -1.0 : guess[i];
    out.theta[i] = solve_temperature(gas, rho[i], e[i], g, theta_bar);
    if (out.theta[i] <= 0.0 && out.failed_at < 0) out.failed_at = static_cast<long>(i);
  }
  return out;
}

double blocked_sum(std::span<const double> v) {
  double total = 0.0;
  for (std::size_t b = 0; b < v.size(); b += kSumBlock) {
    const std::size_t e = std::min(v.size(), b + kSumBlock);
    double s = 0.0;
    for (std::size_t i = b; i < e; ++i) s += v[i];
    total += s;
  }
  return total;
}

}  // namespace serial

namespace parallel {

void interpolate(const ScalarField& f, const Points& pts, InterpOrder order, bool clip,
                 std::span<double> out) {
  check_points(f, pts, out);
  const int p = static_cast<int>(order);
  const long count = static_cast<long>(pts.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < count; ++i) {
    out[i] = interpolate_point(f, &pts.xyz[static_cast<std::size_t>(i) * pts.dim], p, clip);
  }
}

TemperatureRecovery recover_temperature(const GasModel& gas, std::span<const double> rho,
                                        std::span<const double> e,
                                        std::span<const double> guess, double theta_bar) {
  check_recovery_inputs(rho, e, guess);
  TemperatureRecovery out;
  out.theta.resize(rho.size());
  const long count = static_cast<long>(rho.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < count; ++i) {
    const double g = guess.empty() ? -1.0 : guess[i];
    out.theta[i] = solve_temperature(gas, rho[i], e[i], g, theta_bar);
  }
  for (long i = 0; i < count; ++i) {
    if (out.theta[i] <= 0.0) {
      out.failed_at = i;
      break;
    }
  }
  return out;
}

double blocked_sum(std::span<const double> v) {
  const long blocks = static_cast<long>((v.size() + kSumBlock - 1) / kSumBlock);
  std::vector<double> partial(static_cast<std::size_t>(blocks), 0.0);
#pragma omp parallel for schedule(static)
  for (long b = 0; b < blocks; ++b) {
    const std::size_t first = static_cast<std::size_t>(b) * kSumBlock;
    const std::size_t last = std::min(v.size(), first + kSumBlock);
    double s = 0.0;
    for (std::size_t i = first; i < last; ++i) s += v[i];
    partial[b] = s;
  }
  double total = 0.0;
  for (double s : partial) total += s;
  return total;
}

}  // namespace parallel

}  // namespace machlimit::kernels
