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

// Acceptance run: one PASS/FAIL line per criterion, exit status 0 only if all pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "machlimit/acoustic.hpp"
#include "machlimit/harness.hpp"
#include "machlimit/nsf.hpp"
#include "machlimit/spectral.hpp"
#include "machlimit/transport.hpp"

using namespace machlimit;
using std::numbers::pi;

namespace {

const GasModel kGas = GasModel::fn_degenerate();
const ReferenceState kRef = linearization_coefficients(kGas, 1.0, 1.0);

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ScalarField bump(const Grid& g, double w, double sx = 0.0, double sy = 0.0) {
  return ScalarField::from_function(g, [&](auto& x) {
    double r2 = 0.0;
    for (int d = 0; d < g.dim; ++d) {
      const double s = d == 0 ? sx : d == 1 ? sy : 0.0;
      r2 += std::pow(x[d] - g.L / 2 - s, 2);
    }
    return std::exp(-r2 / (2 * w * w));
  });
}

double rel_l2(const ScalarField& a, const ScalarField& b) { return (a - b).l2_norm() / b.l2_norm(); }

Outcome verifier() {
  const auto t0 = std::chrono::steady_clock::now();
  const HypothesisReport def = verify_hypotheses(kGas, ScalingExponents{1.0, 1.0});
  StructuralLaw counter{[](double Z) { return Z + std::pow(Z, 5.0 / 3.0); },
                        [](double Z) { return 1.0 + 5.0 / 3.0 * std::cbrt(Z * Z); },
                        [](double Z) { return -std::log(Z); }};
  const HypothesisReport bad = verify_hypotheses(GasModel::make_custom(counter, 1.0));
  const double secs = seconds_since(t0);
  const auto failed = bad.failed();
  const bool exact = failed.size() == 1 && failed[0] == hypothesis::kThirdLaw;
  return {def.all_passed() && exact && secs < 1.0,
          fmt("default %s, counterexample fails %zu check(s)%s, %.3f s", def.all_passed() ? "passes" : "fails",
              failed.size(), exact ? " (third law only)" : "", secs)};
}

Outcome thermodynamics() {
  double gibbs = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double rho = 0.1 * std::pow(100.0, i / 49.0);
    for (int j = 0; j < 50; ++j) {
      const double theta = 0.1 * std::pow(100.0, j / 49.0);
      const double hr = 1e-5 * rho, ht = 1e-5 * theta;
      const EosPoint c = eval_eos(kGas, rho, theta);
      const EosPoint rp = eval_eos(kGas, rho + hr, theta), rm = eval_eos(kGas, rho - hr, theta);
      const EosPoint tp = eval_eos(kGas, rho, theta + ht), tm = eval_eos(kGas, rho, theta - ht);
      const double e_t = (tp.e - tm.e) / (2 * ht), s_t = (tp.s - tm.s) / (2 * ht);
      const double e_r = (rp.e - rm.e) / (2 * hr), s_r = (rp.s - rm.s) / (2 * hr);
      // θ ds = de − p/ρ² dρ, componentwise.
      gibbs = std::max(gibbs, std::abs(theta * s_t - e_t) / std::abs(e_t));
      const double scale = std::max(std::abs(e_r), c.p / (rho * rho));
      gibbs = std::max(gibbs, std::abs(theta * s_r - (e_r - c.p / (rho * rho))) / scale);
    }
  }
  double hess = 0.0;
  for (double r : {0.5, 1.0, 3.0}) {
    for (double Th : {0.5, 1.0, 3.0}) {
      auto f = [&](double rho, double th) { return relative_entropy_integrand(kGas, rho, th, r, Th); };
      const double h = 1e-3;
      const double hr = h * r, ht = h * Th;
      const double f0 = f(r, Th);
      const double frr = (f(r + hr, Th) - 2 * f0 + f(r - hr, Th)) / (hr * hr);
      const double ftt = (f(r, Th + ht) - 2 * f0 + f(r, Th - ht)) / (ht * ht);
      const double frt = (f(r + hr, Th + ht) - f(r + hr, Th - ht) - f(r - hr, Th + ht) + f(r - hr, Th - ht)) /
                         (4 * hr * ht);
      const EosDerivatives d = eos_derivatives(kGas, r, Th);
      const double arr = d.p_rho / r, att = r * d.e_theta / Th;
      hess = std::max({hess, std::abs(frr - arr) / arr, std::abs(ftt - att) / att,
                       std::abs(frt) / std::max(arr, att)});
    }
  }
  return {gibbs < 1e-5 && hess < 1e-4, fmt("Gibbs residual %.2e, Hessian mismatch %.2e", gibbs, hess)};
}

Outcome acoustic_energy_equality() {
  const auto t0 = std::chrono::steady_clock::now();
  const Grid g(2, 32, 10.0);
  AcousticState s;
  s.Z = bump(g, 1.0);
  s.Phi = 0.3 * bump(g, 0.7, 0.5, 0.5);
  s.eps = 0.05;
  s.ref = kRef;
  const double e0 = acoustic_energy(s);
  for (int i = 0; i < 10000; ++i) s = acoustic_advance(s, 0.0137);
  const double drift = std::abs(acoustic_energy(s) - e0) / e0;
  const double secs = seconds_since(t0);
  return {drift < 1e-10 && secs < 60.0, fmt("relative drift %.2e after 1e4 steps, %.1f s", drift, secs)};
}

Outcome dispersive_decay(const std::filesystem::path& out) {
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentConfig cfg;
  cfg.grid.dim = 3;
  cfg.grid.n = 128;
  cfg.grid.L = 128.0;
  cfg.scaling.eps = {1.0};
  cfg.output.dir = (out / "decay").string();
  const DecayResult r = run_acoustic_decay(cfg);
  const double secs = seconds_since(t0);
  return {r.sigma >= 0.8 && r.sigma <= 1.2 && secs < 600.0,
          fmt("sigma %.4f over t in [1, %.2f], %.1f s", r.sigma, r.t_wrap, secs)};
}

ScalarField manufactured_phi(const Grid& g, double t) {
  const double a = 0.5 * std::sin(2.0 * t);
  return ScalarField::from_function(g, [&](auto& x) { return a * std::cos(x[0]) * std::cos(x[1]); });
}

double balance_residual(double dt) {
  const Grid g(2, 128, 2 * pi);
  TransportOptions opts;
  opts.order = kernels::InterpOrder::Quintic;
  TransportState s{ScalarField::from_function(g, [](auto& x) { return std::exp(std::cos(x[0]) + 0.5 * std::sin(x[1])); }), 0.0};
  std::vector<TransportState> hist{s};
  std::vector<ScalarField> phis{manufactured_phi(g, 0.0)};
  const int steps = static_cast<int>(std::lround(0.5 / dt));
  for (int i = 0; i < steps; ++i) {
    const ScalarField mid = manufactured_phi(g, (i + 0.5) * dt);
    s = transport_step(s, grad(mid), laplacian(mid), dt, opts);
    s.t = (i + 1) * dt;
    hist.push_back(s);
    phis.push_back(manufactured_phi(g, s.t));
  }
  return l2_balance_residual(hist, phis);
}

Outcome transport_balance() {
  const auto t0 = std::chrono::steady_clock::now();
  const double r4 = balance_residual(4e-3), r2 = balance_residual(2e-3), r1 = balance_residual(1e-3);
  const double o1 = std::log2(r4 / r2), o2 = std::log2(r2 / r1);
  const double secs = seconds_since(t0);
  return {std::min(o1, o2) >= 1.8 && secs < 120.0,
          fmt("residuals %.2e %.2e %.2e, orders %.2f %.2f, %.1f s", r4, r2, r1, o1, o2, secs)};
}

ExperimentConfig sweep_config(const std::filesystem::path& out) {
  ExperimentConfig cfg = load_config(MACHLIMIT_CONFIG_DIR "/sweep.cfg");
  cfg.output.dir = out.string();
  cfg.output.snapshots = false;
  return cfg;
}

Outcome conservation(const std::filesystem::path& out) {
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentConfig cfg = sweep_config(out / "conservation");
  cfg.time.t_final = 1.0;
  cfg.time.sample_interval = 0.1;
  const RunSummary s = run_single(cfg, 0.1);
  const double secs = seconds_since(t0);
  return {s.mass_drift < 1e-12 && s.energy_drift_rate < 1e-8 && s.entropy_prod_min >= -1e-12 && secs < 300.0,
          fmt("mass %.2e, energy %.2e per unit time, min entropy production %.2e, %.1f s", s.mass_drift,
              s.energy_drift_rate, s.entropy_prod_min, secs)};
}

Outcome linear_regime() {
  const Grid g(2, 64, 16.0);
  const double eps = 0.1, amp = 1e-6;
  const ScalarField rho1 = amp * bump(g, 0.8), theta1 = amp * bump(g, 1.0, 0.5);
  const VectorField u0 = grad(amp * bump(g, 0.9, -0.4, 0.2));
  NsfOptions inviscid;
  inviscid.viscous = inviscid.conductive = false;
  NsfState s = make_ill_prepared_data(rho1, theta1, u0, ScalingParams{eps, 1, 1, 0.1}, kRef, kGas);
  const AcousticPropagator prop(acoustic_init(rho1, theta1, u0, Regularization{1e-9, 1e3}, kRef, eps).state);
  const double period = eps * g.L / std::sqrt(kRef.omega);
  const int steps = 40;
  const double p_bar = eval_eos(kGas, 1.0, 1.0).p;
  double worst = 0.0;
  for (int i = 1; i <= steps; ++i) {
    s = nsf_step_imex(s, period / steps, inviscid);
    const AcousticState a = prop.state_at(i * period / steps);
    ScalarField Z(g);
    for (std::size_t n = 0; n < g.size(); ++n) Z[n] = (eval_eos(kGas, s.rho[n], s.theta[n]).p - p_bar) / eps;
    worst = std::max(worst, rel_l2(Z, a.Z));
    const VectorField ga = grad(a.Phi);
    worst = std::max(worst, (s.velocity() - ga).l2_norm() / ga.l2_norm());
  }
  return {worst < 1e-4, fmt("worst relative L2 mismatch %.2e over one period", worst)};
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return true;
}

std::string join(const std::vector<double>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << fmt("%.4g", v[i]);
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::string out = "acceptance_out";
  app.add_option("--out", out, "output directory");
  CLI11_PARSE(app, argc, argv);
  const std::filesystem::path dir(out);
  std::filesystem::create_directories(dir);

  int failures = 0;
  auto report = [&](int id, const char* name, const std::function<Outcome()>& f) {
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << id << "  " << name << ": " << o.detail << std::endl;
  };

  report(1, "hypothesis verifier", verifier);
  report(2, "thermodynamic consistency", thermodynamics);
  report(3, "acoustic energy equality", acoustic_energy_equality);
  report(4, "dispersive decay", [&] { return dispersive_decay(dir); });
  report(5, "transport balance", transport_balance);
  report(6, "conservation and entropy sign", [&] { return conservation(dir); });
  report(7, "linear regime", linear_regime);

  SweepTable table;
  std::string sweep_error;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    table = run_sweep(sweep_config(dir / "sweep"));
    write_sweep_csv((dir / "sweep" / "sweep.csv").string(), table);
  } catch (const std::exception& e) {
    sweep_error = e.what();
  }
  const double sweep_secs = seconds_since(t0);
  auto row_at = [&](double eps) -> const SweepRow& {
    for (const auto& r : table.rows) {
      if (std::abs(r.eps - eps) < 1e-12) return r;
    }
    throw std::runtime_error(sweep_error.empty() ? fmt("no sweep row at eps %g", eps) : sweep_error);
  };

  report(8, "low Mach sweep", [&] {
    std::vector<double> eps, sup, m4, m5, m3e;
    for (const auto& r : table.rows) {
      if (r.status != "ok") throw std::runtime_error("run at eps " + fmt("%g", r.eps) + ": " + r.status);
      eps.push_back(r.eps);
      sup.push_back(r.sup_rel_entropy);
      m4.push_back(r.m4);
      m5.push_back(r.m5);
      m3e.push_back(r.m3_over_eps);
    }
    if (eps.size() != 3) throw std::runtime_error(sweep_error.empty() ? "sweep incomplete" : sweep_error);
    const double spread = *std::max_element(m3e.begin(), m3e.end()) / *std::min_element(m3e.begin(), m3e.end());
    const double order = fit_rate(eps, m3e).order;
    const bool ok = strictly_decreasing(sup) && strictly_decreasing(m4) && strictly_decreasing(m5) &&
                    spread <= 2.0 && order >= -0.2 && sweep_secs < 1800.0;
    return Outcome{ok, fmt("sup E %s; m4 %s; m5 %s; m3/eps spread %.3f, order %.3f; %.1f s", join(sup).c_str(),
                           join(m4).c_str(), join(m5).c_str(), spread, order, sweep_secs)};
  });
  report(9, "data adjustment", [&] {
    const SweepRow& r = row_at(0.05);
    const double ratio = r.m5_naive / r.m5;
    return Outcome{ratio >= 1.2, fmt("m5 naive %.4g, adjusted %.4g, ratio %.2f at eps 0.05", r.m5_naive, r.m5, ratio)};
  });
  report(10, "relative entropy inequality", [&] {
    const SweepRow& r = row_at(0.1);
    return Outcome{r.r1_rel_gap_min >= -1e-3,
                   fmt("min gap/scale %.3e (min gap %.3e) at eps 0.1", r.r1_rel_gap_min, r.r1_gap_min)};
  });

  std::cout << (failures == 0 ? "all criteria passed" : fmt("%d criterion(s) failed", failures)) << std::endl;
  return failures == 0 ? 0 : 1;
}
