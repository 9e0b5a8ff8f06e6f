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

#include <stdexcept>
#include <string>

namespace machlimit {

/// Argument outside the domain of a constitutive law or operator.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// δ = ρ̄ ∂s/∂θ is not positive at the requested reference point.
class ThermodynamicInstability : public DomainError {
 public:
  using DomainError::DomainError;
};

/// The cut-off/mollifier pair leaves nothing of the field.
class DegenerateRegularization : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Fields defined on different grids, or a rank mismatch.
class GridMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Samples fall outside the admissible (pre-wrap) time window.
class WindowError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A time step exceeds the stability/accuracy limit of a scheme.
class CflError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Solver state became unphysical (vacuum, temperature recovery failure).
class StateCorruption : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Test functions of the relative entropy lost positivity.
class TestFunctionError : public DomainError {
 public:
  using DomainError::DomainError;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace machlimit
