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

#include "machlimit/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "machlimit/errors.hpp"

namespace machlimit {
namespace {

// Planner calls are not thread-safe in FFTW; execution on distinct buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanSet {
  int dim = 0;
  int n = 0;
  std::size_t real_size = 0;
  std::size_t complex_size = 0;
  double* real_buf = nullptr;
  fftw_complex* complex_buf = nullptr;
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;

  PlanSet(int dim_, int n_) : dim(dim_), n(n_) {
    const Grid g(dim, n, 1.0);
    real_size = g.size();
    complex_size = spectrum_size(g);
    std::array<int, 3> dims{n, n, n};
    std::lock_guard<std::mutex> lock(planner_mutex());
    real_buf = fftw_alloc_real(real_size);
    complex_buf = fftw_alloc_complex(complex_size);
    r2c = fftw_plan_dft_r2c(dim, dims.data(), real_buf, complex_buf, FFTW_ESTIMATE);
    c2r = fftw_plan_dft_c2r(dim, dims.data(), complex_buf, real_buf, FFTW_ESTIMATE);
  }
  PlanSet(const PlanSet&) = delete;
  PlanSet& operator=(const PlanSet&) = delete;
  ~PlanSet() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(r2c);
    fftw_destroy_plan(c2r);
    fftw_free(real_buf);
    fftw_free(complex_buf);
  }
};

PlanSet& plans_for(const Grid& grid) {
  thread_local std::map<std::pair<int, int>, std::unique_ptr<PlanSet>> cache;
  auto& slot = cache[{grid.dim, grid.n}];
  if (!slot) slot = std::make_unique<PlanSet>(grid.dim, grid.n);
  return *slot;
}

int signed_index(int i, int n) { return i <= n / 2 - 1 ? i : i - n; }

Spectrum map_modes(const Spectrum& s, const std::function<Complex(std::size_t, Complex)>& f) {
  Spectrum out{s.grid, std::vector<Complex>(s.c.size())};
  for (std::size_t j = 0; j < s.c.size(); ++j) out.c[j] = f(j, s.c[j]);
  return out;
}

double odd_norm2(const std::array<double, 3>& k) { return k[0] * k[0] + k[1] * k[1] + k[2] * k[2]; }

}  // namespace

std::size_t spectrum_size(const Grid& grid) {
  std::size_t total = static_cast<std::size_t>(grid.n / 2 + 1);
  for (int d = 0; d < grid.dim - 1; ++d) total *= static_cast<std::size_t>(grid.n);
  return total;
}

std::shared_ptr<const ModeTable> mode_table(const Grid& grid) {
  static std::mutex m;
  static std::map<std::tuple<int, int, double>, std::shared_ptr<const ModeTable>> tables;
  std::lock_guard<std::mutex> lock(m);
  auto& slot = tables[{grid.dim, grid.n, grid.L}];
  if (slot) return slot;

  auto t = std::make_shared<ModeTable>();
  t->grid = grid;
  const int n = grid.n;
  const int half = n / 2 + 1;
  const std::size_t count = spectrum_size(grid);
  t->k.resize(count);
  t->k_odd.resize(count);
  t->k2.resize(count);
  t->weight.resize(count);
  t->keep.resize(count);
  const double k0 = 2.0 * std::numbers::pi / grid.L;

  for (std::size_t j = 0; j < count; ++j) {
    std::array<int, 3> m{0, 0, 0};
    std::size_t rest = j;
    const int last = static_cast<int>(rest % static_cast<std::size_t>(half));
    rest /= static_cast<std::size_t>(half);
    m[grid.dim - 1] = last;
    for (int d = grid.dim - 2; d >= 0; --d) {
      m[d] = signed_index(static_cast<int>(rest % static_cast<std::size_t>(n)), n);
      rest /= static_cast<std::size_t>(n);
    }
    std::array<double, 3> k{0, 0, 0}, ko{0, 0, 0};
    bool keep = true;
    for (int d = 0; d < grid.dim; ++d) {
      const bool nyquist = (d == grid.dim - 1) ? (m[d] == n / 2) : (m[d] == -n / 2);
      const int signed_m = (d == grid.dim - 1 && nyquist) ? -n / 2 : m[d];
      k[d] = k0 * signed_m;
      ko[d] = nyquist ? 0.0 : k[d];
      if (3 * std::abs(signed_m) >= n) keep = false;
    }
    t->k[j] = k;
    t->k_odd[j] = ko;
    t->k2[j] = odd_norm2(k);
    t->weight[j] = (last == 0 || last == n / 2) ? 1.0 : 2.0;
    t->keep[j] = keep ? 1 : 0;
  }
  slot = t;
  return slot;
}

Spectrum forward(const ScalarField& f) {
  const Grid& g = f.grid();
  PlanSet& p = plans_for(g);
  const auto v = f.values();
  std::copy(v.begin(), v.end(), p.real_buf);
  fftw_execute(p.r2c);
  Spectrum s{g, std::vector<Complex>(p.complex_size)};
  const double scale = 1.0 / static_cast<double>(p.real_size);
  for (std::size_t j = 0; j < p.complex_size; ++j) {
    s.c[j] = Complex(p.complex_buf[j][0], p.complex_buf[j][1]) * scale;
  }
  return s;
}

ScalarField inverse(const Spectrum& s) {
  PlanSet& p = plans_for(s.grid);
  if (s.c.size() != p.complex_size) throw GridMismatch("spectrum size does not match grid");
  for (std::size_t j = 0; j < p.complex_size; ++j) {
    p.complex_buf[j][0] = s.c[j].real();
    p.complex_buf[j][1] = s.c[j].imag();
  }
  fftw_execute(p.c2r);
  return ScalarField(s.grid, std::vector<double>(p.real_buf, p.real_buf + p.real_size));
}

VectorField grad(const ScalarField& f) {
  const auto modes = mode_table(f.grid());
  const Spectrum s = forward(f);
  std::vector<ScalarField> comps;
  for (int d = 0; d < f.grid().dim; ++d) {
    comps.push_back(inverse(map_modes(s, [&](std::size_t j, Complex c) {
      return Complex(0.0, modes->k_odd[j][d]) * c;
    })));
  }
  return VectorField(std::move(comps));
}

ScalarField div(const VectorField& U) {
  const auto modes = mode_table(U.grid());
  Spectrum acc{U.grid(), std::vector<Complex>(spectrum_size(U.grid()))};
  for (int d = 0; d < U.dim(); ++d) {
    const Spectrum s = forward(U[d]);
    for (std::size_t j = 0; j < acc.c.size(); ++j) {
      acc.c[j] += Complex(0.0, modes->k_odd[j][d]) * s.c[j];
    }
  }
  return inverse(acc);
}

ScalarField laplacian(const ScalarField& f) {
  const auto modes = mode_table(f.grid());
  return inverse(map_modes(forward(f), [&](std::size_t j, Complex c) { return -modes->k2[j] * c; }));
}

ScalarField inverse_laplacian(const ScalarField& f) {
  const auto modes = mode_table(f.grid());
  return inverse(map_modes(forward(f), [&](std::size_t j, Complex c) {
    return modes->k2[j] > 0.0 ? -c / modes->k2[j] : Complex(0.0);
  }));
}

AnyField spectral_calculus(const AnyField& f, SpectralOp which) {
  switch (which) {
    case SpectralOp::Grad:
      if (!std::holds_alternative<ScalarField>(f)) throw GridMismatch("grad needs a scalar field");
      return grad(std::get<ScalarField>(f));
    case SpectralOp::Div:
      if (!std::holds_alternative<VectorField>(f)) throw GridMismatch("div needs a vector field");
      return div(std::get<VectorField>(f));
    case SpectralOp::Laplacian:
      if (std::holds_alternative<ScalarField>(f)) return laplacian(std::get<ScalarField>(f));
      {
        const auto& U = std::get<VectorField>(f);
        std::vector<ScalarField> comps;
        for (int d = 0; d < U.dim(); ++d) comps.push_back(laplacian(U[d]));
        return VectorField(std::move(comps));
      }
  }
  throw DomainError("unknown spectral operator");
}

namespace {

// k·Û / |k|² with the odd-derivative wavevector; zero where that vanishes.
Spectrum projected_divergence(const VectorField& U, const ModeTable& modes) {
  Spectrum acc{U.grid(), std::vector<Complex>(modes.size())};
  for (int d = 0; d < U.dim(); ++d) {
    const Spectrum s = forward(U[d]);
    for (std::size_t j = 0; j < acc.c.size(); ++j) acc.c[j] += modes.k_odd[j][d] * s.c[j];
  }
  for (std::size_t j = 0; j < acc.c.size(); ++j) {
    const double ko2 = odd_norm2(modes.k_odd[j]);
    acc.c[j] = ko2 > 0.0 ? acc.c[j] / ko2 : Complex(0.0);
  }
  return acc;
}

}  // namespace

HelmholtzParts helmholtz_split(const VectorField& U) {
  const auto modes = mode_table(U.grid());
  const Spectrum q = projected_divergence(U, *modes);
  std::vector<ScalarField> g;
  for (int d = 0; d < U.dim(); ++d) {
    g.push_back(inverse(map_modes(q, [&](std::size_t j, Complex c) { return modes->k_odd[j][d] * c; })));
  }
  VectorField gradient(std::move(g));
  VectorField solenoidal = U - gradient;
  return {std::move(solenoidal), std::move(gradient)};
}

VectorField leray_project(const VectorField& U) { return helmholtz_split(U).solenoidal; }

ScalarField gradient_potential(const VectorField& U) {
  const auto modes = mode_table(U.grid());
  const Spectrum q = projected_divergence(U, *modes);
  return inverse(map_modes(q, [](std::size_t, Complex c) { return Complex(0.0, -1.0) * c; }));
}

ScalarField dealias(const ScalarField& f) {
  const auto modes = mode_table(f.grid());
  return inverse(map_modes(forward(f), [&](std::size_t j, Complex c) {
    return modes->keep[j] ? c : Complex(0.0);
  }));
}

VectorField dealias(const VectorField& U) {
  std::vector<ScalarField> comps;
  for (int d = 0; d < U.dim(); ++d) comps.push_back(dealias(U[d]));
  return VectorField(std::move(comps));
}

double spectral_l2_norm_squared(const Spectrum& s) {
  const auto modes = mode_table(s.grid);
  double sum = 0.0;
  for (std::size_t j = 0; j < s.c.size(); ++j) sum += modes->weight[j] * std::norm(s.c[j]);
  return sum * s.grid.box_volume();
}

double mollifier_symbol(double k2, double eta) {
  const double v = std::exp(-0.5 * k2 * eta * eta);
  return v < 1e-17 ? 0.0 : v;
}

ScalarField cutoff_function(const Grid& grid, const Regularization& reg) {
  if (!(reg.eta > 0.0)) throw DomainError("mollifier width must be positive");
  const double unit = reg.cutoff_unit > 0.0 ? reg.cutoff_unit : grid.L / 40.0;
  const double eta_hat = reg.eta / grid.L;
  const double r_in = unit / (2.0 * eta_hat);
  const double r_out = unit / eta_hat;
  if (r_out < grid.dx()) {
    throw DegenerateRegularization("cut-off radius below one grid spacing; decrease eta");
  }
  const double c = grid.L / 2.0;
  return ScalarField::from_function(grid, [&](const std::array<double, 3>& x) {
    double r2 = 0.0;
    for (int d = 0; d < grid.dim; ++d) r2 += (x[d] - c) * (x[d] - c);
    const double r = std::sqrt(r2);
    if (r <= r_in) return 1.0;
    if (r >= r_out) return 0.0;
    const double s = (r - r_in) / (r_out - r_in);
    return 1.0 - (s - std::sin(2.0 * std::numbers::pi * s) / (2.0 * std::numbers::pi));
  });
}

ScalarField mollify(const ScalarField& f, double eta) {
  if (!(eta > 0.0)) throw DomainError("mollifier width must be positive");
  const auto modes = mode_table(f.grid());
  return inverse(map_modes(forward(f), [&](std::size_t j, Complex c) {
    return mollifier_symbol(modes->k2[j], eta) * c;
  }));
}

ScalarField mollify_regularize(const ScalarField& h, const Regularization& reg) {
  const ScalarField psi = cutoff_function(h.grid(), reg);
  ScalarField cut(h.grid());
  for (std::size_t i = 0; i < cut.size(); ++i) cut[i] = psi[i] * h[i];
  return mollify(cut, reg.eta);
}

ScalarField mollify_regularize(const ScalarField& h, double eta) {
  return mollify_regularize(h, Regularization{eta, 0.0});
}

}  // namespace machlimit
