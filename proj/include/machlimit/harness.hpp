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
#include <vector>

#include "machlimit/acoustic.hpp"
#include "machlimit/config.hpp"
#include "machlimit/diagnostics.hpp"

namespace machlimit {

/// A solver failure inside a run, with the run context in the message.
class RunFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct InitialData {
  ScalarField rho1;
  ScalarField theta1;
  VectorField u0;
};

InitialData make_initial_data(const ExperimentConfig& cfg);

struct RunOptions {
  bool write_outputs = true;
  NsfOptions nsf;
  /// Overrides scaling.eta (fraction of L) when positive.
  double eta_fraction = 0.0;
};

struct RunSummary {
  double eps = 0.0;
  double eta = 0.0;
  double dt = 0.0;
  long steps = 0;

  std::vector<double> t;
  std::vector<double> rel_entropy;
  std::vector<double> m3;
  std::vector<double> m4;
  std::vector<double> m5;        ///< q = 1
  std::vector<double> m5_q32;
  std::vector<double> m5_naive;  ///< against the unadjusted seed δθ⁽¹⁾
  std::vector<double> r1_gap;
  std::vector<double> r1_scale;
  NamedValues bounds;

  double sup_rel_entropy = 0.0;
  double r1_gap_min = 0.0;
  /// min over samples of gap/scale.
  double r1_rel_gap_min = 0.0;
  double mass_drift = 0.0;          ///< max relative drift of ∫ρ
  double energy_drift_rate = 0.0;   ///< max relative drift of ∫E per unit time
  double momentum_drift = 0.0;      ///< max |∫m − ∫m(0)| / ∫|m(0)|
  double entropy_prod_min = 0.0;
  double v4_gap = 0.0;              ///< final LHS − RHS of the dissipation balance
  double v4_rel_gap_max = 0.0;      ///< max (LHS − RHS)/RHS
};

RunSummary run_single(const ExperimentConfig& cfg, double eps, const RunOptions& opts = {});

struct SweepRow {
  double eps = 0.0;
  double eta = 0.0;
  double sup_rel_entropy = 0.0;
  double m3_over_eps = 0.0;
  double m4 = 0.0;
  double m5 = 0.0;
  double m5_naive = 0.0;
  double r1_gap_min = 0.0;
  double r1_rel_gap_min = 0.0;
  std::string status = "ok";
};

struct SweepTable {
  std::vector<SweepRow> rows;
};

/// One run per ε (at least 3, strictly decreasing); a failing run leaves a
/// row with its status set to the failure message.
SweepTable run_sweep(const ExperimentConfig& cfg, const RunOptions& opts = {});
/// Second-level table: a sweep per η in scaling.eta_list.
SweepTable run_eta_table(const ExperimentConfig& cfg, const RunOptions& opts = {});

void write_sweep_csv(const std::string& path, const SweepTable& table);
std::string sweep_csv(const SweepTable& table);

struct RateFit {
  double order = 0.0;
  double r_squared = 0.0;
};

/// Least-squares slope of log(values) against log(eps).
RateFit fit_rate(const std::vector<double>& eps, const std::vector<double>& values);
/// Same, reading the `eps` column and `column` from a CSV table.
RateFit fit_rate_csv(const std::string& path, const std::string& column);

struct DecayResult {
  std::vector<AcousticRecord> records;
  double sigma = 0.0;
  double t_wrap = 0.0;
  double r_support = 0.0;
};

/// Sup-norm decay of a Gaussian bump of Z (Φ = 0) at ε = scaling.eps[0].
DecayResult run_acoustic_decay(const ExperimentConfig& cfg, bool write_outputs = true);

}  // namespace machlimit
