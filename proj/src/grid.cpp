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

#include "machlimit/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "machlimit/errors.hpp"

namespace machlimit {

Grid::Grid(int dim_, int n_, double L_) : dim(dim_), n(n_), L(L_) {
  if (dim < 1 || dim > 3) throw DomainError("grid dimension must be 1, 2 or 3");
  if (n < 8 || (n & (n - 1)) != 0) throw DomainError("points per axis must be a power of two >= 8");
  if (!(L > 0.0)) throw DomainError("box length must be positive");
}

std::size_t Grid::size() const {
  std::size_t total = 1;
  for (int d = 0; d < dim; ++d) total *= static_cast<std::size_t>(n);
  return total;
}

double Grid::cell_volume() const { return std::pow(dx(), dim); }
double Grid::box_volume() const { return std::pow(L, dim); }

std::array<int, 3> Grid::multi_index(std::size_t index) const {
  std::array<int, 3> idx{0, 0, 0};
  for (int d = dim - 1; d >= 0; --d) {
    idx[d] = static_cast<int>(index % static_cast<std::size_t>(n));
    index /= static_cast<std::size_t>(n);
  }
  return idx;
}

std::array<double, 3> Grid::coord(std::size_t index) const {
  const auto idx = multi_index(index);
  const double h = dx();
  return {idx[0] * h, dim > 1 ? idx[1] * h : 0.0, dim > 2 ? idx[2] * h : 0.0};
}

void require_same_grid(const Grid& a, const Grid& b, const char* context) {
  if (!(a == b)) {
    std::ostringstream os;
    os << context << ": grid mismatch (" << a.dim << "D n=" << a.n << " L=" << a.L << " vs "
       << b.dim << "D n=" << b.n << " L=" << b.L << ")";
    throw GridMismatch(os.str());
  }
}

// ---------------------------------------------------------------------------

ScalarField::ScalarField(const Grid& grid, double value) : grid_(grid), data_(grid.size(), value) {}

ScalarField::ScalarField(const Grid& grid, std::vector<double> samples)
    : grid_(grid), data_(std::move(samples)) {
  if (data_.size() != grid_.size()) throw GridMismatch("sample count does not match grid");
}

ScalarField ScalarField::from_function(
    const Grid& grid, const std::function<double(const std::array<double, 3>&)>& f) {
  ScalarField out(grid);
  for (std::size_t i = 0; i < out.size(); ++i) out.data_[i] = f(grid.coord(i));
  return out;
}

ScalarField& ScalarField::operator+=(const ScalarField& other) {
  require_same_grid(grid_, other.grid_, "ScalarField +=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
  require_same_grid(grid_, other.grid_, "ScalarField -=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

ScalarField& ScalarField::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double ScalarField::min() const { return *std::min_element(data_.begin(), data_.end()); }
double ScalarField::max() const { return *std::max_element(data_.begin(), data_.end()); }

double ScalarField::integral() const {
  double s = 0.0;
  for (double v : data_) s += v;
  return s * grid_.cell_volume();
}

double ScalarField::lp_norm(double p) const {
  double s = 0.0;
  if (p == 2.0) {
    for (double v : data_) s += v * v;
    return std::sqrt(s * grid_.cell_volume());
  }
  for (double v : data_) s += std::pow(std::abs(v), p);
  return std::pow(s * grid_.cell_volume(), 1.0 / p);
}

bool ScalarField::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

ScalarField axpby(double a, const ScalarField& x, double b, const ScalarField& y) {
  require_same_grid(x.grid(), y.grid(), "axpby");
  ScalarField out(x.grid());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a * x[i] + b * y[i];
  return out;
}

// ---------------------------------------------------------------------------

VectorField::VectorField(const Grid& grid, double value)
    : grid_(grid), comps_(static_cast<std::size_t>(grid.dim), ScalarField(grid, value)) {}

VectorField::VectorField(std::vector<ScalarField> components) : comps_(std::move(components)) {
  if (comps_.empty()) throw GridMismatch("vector field needs components");
  grid_ = comps_.front().grid();
  if (static_cast<int>(comps_.size()) != grid_.dim) {
    throw GridMismatch("vector field needs one component per dimension");
  }
  for (const auto& c : comps_) require_same_grid(grid_, c.grid(), "VectorField");
}

VectorField& VectorField::operator+=(const VectorField& other) {
  require_same_grid(grid_, other.grid_, "VectorField +=");
  for (int d = 0; d < dim(); ++d) comps_[d] += other.comps_[d];
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& other) {
  require_same_grid(grid_, other.grid_, "VectorField -=");
  for (int d = 0; d < dim(); ++d) comps_[d] -= other.comps_[d];
  return *this;
}

VectorField& VectorField::operator*=(double s) {
  for (auto& c : comps_) c *= s;
  return *this;
}

ScalarField VectorField::magnitude() const {
  ScalarField out(grid_);
  for (std::size_t i = 0; i < out.size(); ++i) {
    double s = 0.0;
    for (const auto& c : comps_) s += c[i] * c[i];
    out[i] = std::sqrt(s);
  }
  return out;
}

double VectorField::max_magnitude() const { return magnitude().max_abs(); }

double VectorField::l2_norm() const { return std::sqrt(inner_product(*this, *this)); }

VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
VectorField operator*(double s, VectorField a) { return a *= s; }

double inner_product(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid(), "inner_product");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s * a.grid().cell_volume();
}

double inner_product(const VectorField& a, const VectorField& b) {
  require_same_grid(a.grid(), b.grid(), "inner_product");
  double s = 0.0;
  for (int d = 0; d < a.dim(); ++d) s += inner_product(a[d], b[d]);
  return s;
}

}  // namespace machlimit
