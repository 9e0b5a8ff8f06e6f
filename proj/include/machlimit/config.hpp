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

// Experiment configuration: a plain-text file of `section.key = value` lines.
// Blank lines and lines starting with '#' are ignored; lists are comma
// separated. Unknown keys are rejected.

#include <string>
#include <vector>

#include "machlimit/thermo.hpp"

namespace machlimit {

struct ExperimentConfig {
  struct {
    int dim = 2;
    int n = 128;
    double L = 32.0;
  } grid;

  struct {
    std::string variant = "fn_degenerate";
    double p_infty = 1.0;
    double a_rad = 0.1;
    double mu0 = 0.1;
    double kappa0 = 0.1;
  } gas;

  struct {
    double rho_bar = 1.0;
    double theta_bar = 1.0;
  } ref;

  struct {
    std::vector<double> eps{0.2, 0.1, 0.05};
    double a_exp = 1.0;
    double b_exp = 1.0;
    /// Mollifier width as a fraction of L.
    double eta = 0.05;
    /// Optional second-level table over η (fractions of L).
    std::vector<double> eta_list;
    /// Length unit of the cut-off radius; 0 means L/40.
    double cutoff_unit = 0.0;
  } scaling;

  // Gaussian bumps centred in the box; u0 is a counter-rotating vortex pair
  // (separation vortex_sep along y) plus the gradient of a bump.
  struct {
    double rho_amp = 1.0;
    double rho_width = 1.0;
    double theta_amp = 1.0;
    double theta_width = 1.5;
    double theta_shift = 0.5;
    double vortex_amp = 0.5;
    double vortex_width = 1.0;
    double vortex_sep = 1.0;
    double gradient_amp = 0.5;
    double gradient_width = 1.0;
  } data;

  struct {
    double dt = 0.01;
    double t_final = 0.5;
    double sample_interval = 0.05;
    /// Step limit as a fraction of ε·dx/√ω.
    double acoustic_cfl = 0.5;
    /// Existence time of the target flow; informational only.
    double t_max = 0.0;
  } time;

  struct {
    /// Radius of the ball K (about the box centre) for the local metrics.
    double k_radius = 3.0;
  } metrics;

  // Dispersive decay study (acoustic-decay command).
  struct {
    double width = 5.5;
    /// Support radius in units of the width.
    double support_factor = 6.07;
    /// First fitted sample, in units of ε.
    double t_start = 1.0;
    int samples = 40;
  } decay;

  struct {
    std::string dir = "out";
    bool snapshots = true;
  } output;

  GasModel gas_model() const;
  /// Checks ranges and the (a, b) constraint; throws ConfigError.
  void validate() const;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string serialize_config(const ExperimentConfig& cfg);

}  // namespace machlimit
