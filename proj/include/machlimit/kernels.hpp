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

// Pointwise kernels with a serial reference and an OpenMP variant. Both
// variants produce bit-identical results: loops are elementwise and sums use
// fixed-size blocks combined in order, whatever the thread count.

#include <span>
#include <vector>

#include "machlimit/grid.hpp"
#include "machlimit/thermo.hpp"

namespace machlimit::kernels {

enum class InterpOrder { Cubic = 3, Quintic = 5 };

/// Departure points, `dim` coordinates per point, any real values
/// (wrapped periodically).
struct Points {
  int dim = 0;
  std::vector<double> xyz;
  std::size_t size() const { return dim == 0 ? 0 : xyz.size() / static_cast<std::size_t>(dim); }
};

struct TemperatureRecovery {
  std::vector<double> theta;
  /// First node where no root was found, or -1.
  long failed_at = -1;
};

inline constexpr std::size_t kSumBlock = 4096;

namespace serial {
/// Tensor-product Lagrange interpolation of f at the points. With `clip`
/// the value is limited to the range of the enclosing cell's corners.
void interpolate(const ScalarField& f, const Points& pts, InterpOrder order, bool clip,
                 std::span<double> out);
/// Solve e(ρ_i, θ) = e_i for θ_i, starting from `guess` when positive.
TemperatureRecovery recover_temperature(const GasModel& gas, std::span<const double> rho,
                                        std::span<const double> e,
                                        std::span<const double> guess, double theta_bar);
double blocked_sum(std::span<const double> v);
}  // namespace serial

namespace parallel {
void interpolate(const ScalarField& f, const Points& pts, InterpOrder order, bool clip,
                 std::span<double> out);
TemperatureRecovery recover_temperature(const GasModel& gas, std::span<const double> rho,
                                        std::span<const double> e,
                                        std::span<const double> guess, double theta_bar);
double blocked_sum(std::span<const double> v);
}  // namespace parallel

/// Scalar root solve used by both variants; returns a negative value on failure.
double solve_temperature(const GasModel& gas, double rho, double e, double guess,
                         double theta_bar);

}  // namespace machlimit::kernels
