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

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace machlimit {

/// Uniform periodic grid on the torus [0, L)^dim with n nodes per axis.
struct Grid {
  int dim = 2;
  int n = 64;
  double L = 1.0;

  Grid() = default;
  Grid(int dim, int n, double L);

  std::size_t size() const;
  double dx() const { return L / n; }
  double cell_volume() const;
  double box_volume() const;
  /// Row-major node index -> coordinates (unused axes are zero).
  std::array<double, 3> coord(std::size_t index) const;
  std::array<int, 3> multi_index(std::size_t index) const;

  bool operator==(const Grid& other) const = default;
};

/// Throws GridMismatch unless both grids are identical.
void require_same_grid(const Grid& a, const Grid& b, const char* context);

class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const Grid& grid, double value = 0.0);
  ScalarField(const Grid& grid, std::vector<double> samples);

  /// Sample f(x) at every node.
  static ScalarField from_function(const Grid& grid,
                                   const std::function<double(const std::array<double, 3>&)>& f);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return data_.size(); }
  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  ScalarField& operator+=(const ScalarField& other);
  ScalarField& operator-=(const ScalarField& other);
  ScalarField& operator*=(double s);

  double max_abs() const;
  double min() const;
  double max() const;
  /// Grid quadrature ∫ f dx.
  double integral() const;
  /// (∫ |f|^p dx)^{1/p}.
  double lp_norm(double p) const;
  double l2_norm() const { return lp_norm(2.0); }
  bool all_finite() const;

 private:
  Grid grid_;
  std::vector<double> data_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);

/// Linear combination a·x + b·y.
ScalarField axpby(double a, const ScalarField& x, double b, const ScalarField& y);

class VectorField {
 public:
  VectorField() = default;
  explicit VectorField(const Grid& grid, double value = 0.0);
  explicit VectorField(std::vector<ScalarField> components);

  const Grid& grid() const { return grid_; }
  int dim() const { return grid_.dim; }
  ScalarField& operator[](int i) { return comps_[i]; }
  const ScalarField& operator[](int i) const { return comps_[i]; }

  VectorField& operator+=(const VectorField& other);
  VectorField& operator-=(const VectorField& other);
  VectorField& operator*=(double s);

  /// Pointwise Euclidean norm.
  ScalarField magnitude() const;
  double max_magnitude() const;
  /// (∫ |U|² dx)^{1/2}.
  double l2_norm() const;

 private:
  Grid grid_;
  std::vector<ScalarField> comps_;
};

VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(double s, VectorField a);

/// ∫ U·V dx.
double inner_product(const VectorField& a, const VectorField& b);
double inner_product(const ScalarField& a, const ScalarField& b);

}  // namespace machlimit
