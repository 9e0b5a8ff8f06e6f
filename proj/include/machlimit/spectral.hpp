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

// Pseudospectral calculus on the periodic grid. Coefficients are stored in
// the real-to-complex half-spectrum layout (last axis has n/2+1 entries) and
// normalized so that f(x) = Σ_k c_k exp(i k·x).

#include <array>
#include <complex>
#include <memory>
#include <variant>
#include <vector>

#include "machlimit/grid.hpp"

namespace machlimit {

using Complex = std::complex<double>;

struct Spectrum {
  Grid grid;
  std::vector<Complex> c;
};

/// Per-mode wavenumber data for one grid, shared read-only.
struct ModeTable {
  Grid grid;
  std::vector<std::array<double, 3>> k;      ///< physical wavevector
  std::vector<std::array<double, 3>> k_odd;  ///< same with Nyquist components zeroed
  std::vector<double> k2;                    ///< |k|² (full)
  std::vector<double> weight;                ///< Parseval multiplicity (1 or 2)
  std::vector<unsigned char> keep;           ///< 2/3-rule de-aliasing mask
  std::size_t size() const { return k.size(); }
};

std::shared_ptr<const ModeTable> mode_table(const Grid& grid);

std::size_t spectrum_size(const Grid& grid);

Spectrum forward(const ScalarField& f);
ScalarField inverse(const Spectrum& s);

enum class SpectralOp { Grad, Div, Laplacian };
using AnyField = std::variant<ScalarField, VectorField>;

/// Exact derivative of the trigonometric interpolant. Grad takes a scalar,
/// Div a vector, Laplacian either.
AnyField spectral_calculus(const AnyField& f, SpectralOp which);

VectorField grad(const ScalarField& f);
ScalarField div(const VectorField& U);
ScalarField laplacian(const ScalarField& f);
/// Δ⁻¹ with the k = 0 mode set to zero.
ScalarField inverse_laplacian(const ScalarField& f);

struct HelmholtzParts {
  VectorField solenoidal;
  VectorField gradient;
};

/// U = H[U] + ∇Δ⁻¹div U; the mean of U goes to the solenoidal part.
HelmholtzParts helmholtz_split(const VectorField& U);
VectorField leray_project(const VectorField& U);
/// Potential Δ⁻¹ div U of the gradient part (zero mean).
ScalarField gradient_potential(const VectorField& U);

/// 2/3-rule truncation.
ScalarField dealias(const ScalarField& f);
VectorField dealias(const VectorField& U);

/// ∫|f|² from the coefficients (Parseval).
double spectral_l2_norm_squared(const Spectrum& s);

/// Regularization of initial data by a cut-off and a mollifier.
struct Regularization {
  double eta = 0.05;
  /// Length unit of the cut-off radius; nonpositive means L/40.
  double cutoff_unit = 0.0;
};

/// Symbol of the Gaussian mollifier χ_η at |k|².
double mollifier_symbol(double k2, double eta);
/// Radial cut-off ψ_η sampled on the grid, centred in the box.
ScalarField cutoff_function(const Grid& grid, const Regularization& reg);
/// χ_η * f (spectral).
ScalarField mollify(const ScalarField& f, double eta);
/// χ_η * (ψ_η · h).
ScalarField mollify_regularize(const ScalarField& h, const Regularization& reg);
ScalarField mollify_regularize(const ScalarField& h, double eta);

}  // namespace machlimit
