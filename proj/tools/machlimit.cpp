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

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "machlimit/config.hpp"
#include "machlimit/errors.hpp"
#include "machlimit/harness.hpp"
#include "machlimit/thermo.hpp"

using namespace machlimit;

namespace {

int check_gas(const std::string& config_path) {
  GasModel gas = GasModel::fn_degenerate();
  std::optional<ScalingExponents> scaling;
  double rho_bar = 1.0, theta_bar = 1.0;
  if (!config_path.empty()) {
    const ExperimentConfig cfg = load_config(config_path);
    gas = cfg.gas_model();
    scaling = ScalingExponents{cfg.scaling.a_exp, cfg.scaling.b_exp};
    rho_bar = cfg.ref.rho_bar;
    theta_bar = cfg.ref.theta_bar;
  }
  const HypothesisReport rep = verify_hypotheses(gas, scaling);
  for (const auto& c : rep.checks) {
    std::printf("%-48s %s  observed=%.6g  %s\n", c.name.c_str(), c.passed ? "ok  " : "FAIL",
                c.observed, c.detail.c_str());
  }
  const ReferenceState ref = linearization_coefficients(gas, rho_bar, theta_bar);
  std::printf("reference rho=%.6g theta=%.6g: alpha=%.6g beta=%.6g delta=%.6g omega=%.6g\n",
              ref.rho_bar, ref.theta_bar, ref.alpha, ref.beta, ref.delta, ref.omega);
  return rep.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"machlimit: low Mach / inviscid limit experiments"};
  app.require_subcommand(1);

  std::string gas_cfg;
  auto* cg = app.add_subcommand("check-gas", "verify the structural hypotheses of the gas");
  cg->add_option("--config", gas_cfg, "optional config file")->check(CLI::ExistingFile);

  std::string decay_cfg;
  auto* ad = app.add_subcommand("acoustic-decay", "sup-norm decay of the acoustic wave");
  ad->add_option("--config", decay_cfg, "config file")->required()->check(CLI::ExistingFile);

  std::string run_cfg;
  double run_eps = 0.0;
  auto* rn = app.add_subcommand("run", "one NSF / limit comparison at a single eps");
  rn->add_option("--config", run_cfg, "config file")->required()->check(CLI::ExistingFile);
  rn->add_option("--eps", run_eps, "Mach number")->required();

  std::string sweep_cfg;
  auto* sw = app.add_subcommand("sweep", "run every eps in the config and tabulate");
  sw->add_option("--config", sweep_cfg, "config file")->required()->check(CLI::ExistingFile);

  std::string table, column;
  auto* ft = app.add_subcommand("fit", "fit the eps-order of a sweep column");
  ft->add_option("--table", table, "sweep CSV")->required()->check(CLI::ExistingFile);
  ft->add_option("--column", column, "column name")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cg) return check_gas(gas_cfg);
    if (*ad) {
      const DecayResult r = run_acoustic_decay(load_config(decay_cfg));
      std::printf("sigma=%.6f t_wrap=%.6g r_support=%.6g samples=%zu\n", r.sigma, r.t_wrap,
                  r.r_support, r.records.size());
      return 0;
    }
    if (*rn) {
      ExperimentConfig cfg = load_config(run_cfg);
      const RunSummary s = run_single(cfg, run_eps);
      std::printf("eps=%g eta=%g dt=%g steps=%ld\n", s.eps, s.eta, s.dt, s.steps);
      std::printf("sup rel_entropy=%.6e  m3=%.6e m4=%.6e m5=%.6e (naive %.6e)\n",
                  s.sup_rel_entropy, s.m3.back(), s.m4.back(), s.m5.back(), s.m5_naive.back());
      std::printf("r1 gap min=%.6e (relative %.3e)  dissipation gap=%.3e\n", s.r1_gap_min,
                  s.r1_rel_gap_min, s.v4_gap);
      return 0;
    }
    if (*sw) {
      const ExperimentConfig cfg = load_config(sweep_cfg);
      SweepTable t = run_sweep(cfg);
      if (!cfg.scaling.eta_list.empty()) {
        const SweepTable more = run_eta_table(cfg);
        t.rows.insert(t.rows.end(), more.rows.begin(), more.rows.end());
      }
      std::filesystem::create_directories(cfg.output.dir);
      const auto path = (std::filesystem::path(cfg.output.dir) / "sweep.csv").string();
      write_sweep_csv(path, t);
      std::cout << sweep_csv(t);
      bool ok = true;
      for (const auto& r : t.rows) ok = ok && r.status == "ok";
      return ok ? 0 : 1;
    }
    if (*ft) {
      const RateFit f = fit_rate_csv(table, column);
      std::printf("%s: order=%.4f r2=%.4f\n", column.c_str(), f.order, f.r_squared);
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "machlimit: %s\n", e.what());
    return 2;
  }
  return 0;
}
