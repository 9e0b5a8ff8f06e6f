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

#include "machlimit/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "machlimit/errors.hpp"
#include "machlimit/snapshot.hpp"
#include "machlimit/spectral.hpp"

namespace machlimit {
namespace {

using json = nlohmann::json;

// exp(−|x − c|²/(2w²)), cut to zero where it drops below e^{−40}.
ScalarField gaussian(const Grid& g, std::array<double, 3> c, double w) {
  return ScalarField::from_function(g, [&](const std::array<double, 3>& x) {
    double r2 = 0.0;
    for (int d = 0; d < g.dim; ++d) r2 += (x[d] - c[d]) * (x[d] - c[d]);
    const double q = r2 / (2.0 * w * w);
    return q > 40.0 ? 0.0 : std::exp(-q);
  });
}

std::array<double, 3> centre(const Grid& g) {
  return {g.L / 2.0, g.dim > 1 ? g.L / 2.0 : 0.0, g.dim > 2 ? g.L / 2.0 : 0.0};
}

std::string eps_tag(double eps) {
  std::ostringstream os;
  os << "eps_" << eps;
  return os.str();
}

std::filesystem::path ensure_dir(const std::filesystem::path& p) {
  std::error_code ec;
  std::filesystem::create_directories(p, ec);
  if (ec || !std::filesystem::is_directory(p)) {
    throw IoError("cannot create output directory " + p.string() + ": " + ec.message());
  }
  const auto probe = p / ".write_probe";
  {
    std::ofstream out(probe);
    if (!out) throw IoError("output directory is not writable: " + p.string());
  }
  std::filesystem::remove(probe, ec);
  return p;
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << std::setw(2) << j << '\n';
}

double total(const ScalarField& f) { return f.integral(); }

}  // namespace

InitialData make_initial_data(const ExperimentConfig& cfg) {
  const Grid g(cfg.grid.dim, cfg.grid.n, cfg.grid.L);
  const auto c = centre(g);
  const auto& d = cfg.data;
  InitialData out;
  out.rho1 = gaussian(g, c, d.rho_width);
  out.rho1 *= d.rho_amp;
  auto ct = c;
  ct[0] += d.theta_shift;
  out.theta1 = gaussian(g, ct, d.theta_width);
  out.theta1 *= d.theta_amp;

  out.u0 = VectorField(g);
  if (g.dim >= 2 && d.vortex_amp != 0.0) {
    auto up = c, down = c;
    up[1] += d.vortex_sep;
    down[1] -= d.vortex_sep;
    ScalarField psi = gaussian(g, up, d.vortex_width) - gaussian(g, down, d.vortex_width);
    psi *= d.vortex_amp;
    const VectorField gp = grad(psi);
    out.u0[0] += gp[1];
    out.u0[1] -= gp[0];
  }
  if (d.gradient_amp != 0.0) {
    ScalarField phi = gaussian(g, c, d.gradient_width);
    phi *= d.gradient_amp;
    out.u0 += grad(phi);
  }
  return out;
}

RunSummary run_single(const ExperimentConfig& cfg, double eps, const RunOptions& opts) {
  cfg.validate();
  const Grid g(cfg.grid.dim, cfg.grid.n, cfg.grid.L);
  const GasModel gas = cfg.gas_model();
  const ReferenceState ref = linearization_coefficients(gas, cfg.ref.rho_bar, cfg.ref.theta_bar);
  const double eta_fraction = opts.eta_fraction > 0.0 ? opts.eta_fraction : cfg.scaling.eta;
  ScalingParams scaling{eps, cfg.scaling.a_exp, cfg.scaling.b_exp, eta_fraction * g.L};
  scaling.validate();
  const Regularization reg{scaling.eta, cfg.scaling.cutoff_unit};
  const InitialData data = make_initial_data(cfg);

  RunSummary sum;
  sum.eps = eps;
  sum.eta = scaling.eta;

  std::filesystem::path dir;
  if (opts.write_outputs) dir = ensure_dir(std::filesystem::path(cfg.output.dir) / eps_tag(eps));

  // Time grid: samples every t_final/n_samples, an integer number of steps apart.
  const double dt_acoustic = cfg.time.acoustic_cfl * eps * g.dx() / std::sqrt(ref.omega);
  const double dt_max = std::min(cfg.time.dt, dt_acoustic);
  const long n_samples = std::max(1L, std::lround(cfg.time.t_final / cfg.time.sample_interval));
  const double interval = cfg.time.t_final / static_cast<double>(n_samples);
  const long per_sample = std::max(1L, static_cast<long>(std::ceil(interval / dt_max - 1e-9)));
  const double dt = interval / static_cast<double>(per_sample);
  sum.dt = dt;
  sum.steps = n_samples * per_sample;

  const NsfOptions& nopt = opts.nsf;
  NsfState nsf = make_ill_prepared_data(data.rho1, data.theta1, data.u0, scaling, ref, gas);
  const AcousticInit ainit = acoustic_init(data.rho1, data.theta1, data.u0, reg, ref, eps);
  const AcousticPropagator prop(ainit.state);
  AcousticState ac = ainit.state;
  TransportState tr{ainit.W0, 0.0};
  const EulerOptions eopt;
  const ScalarField T0 = adjusted_initial_temperature(data.rho1, data.theta1, gas, ref);
  EulerBoussinesqState eu = euler_initial_state(data.u0, T0, eopt);
  ScalarField T_naive = data.theta1;
  T_naive *= ref.delta;
  const Subdomain K{centre(g), cfg.metrics.k_radius};

  const double mass0 = nsf.mass();
  const double energy0 = nsf.total_energy();
  std::vector<double> mom0(g.dim);
  double mom_scale = 0.0;
  for (int d = 0; d < g.dim; ++d) {
    mom0[d] = total(nsf.m[d]);
    for (std::size_t n = 0; n < g.size(); ++n) mom_scale += std::abs(nsf.m[d][n]);
  }
  mom_scale *= g.cell_volume();

  DissipationAccumulator v4(nsf, nopt);
  R1Accumulator r1(r1_sample(nsf, ac, tr.W, eu, nopt));
  sum.entropy_prod_min = entropy_production(nsf, nopt).min();
  double a3_source_prev = 0.0, a3_integral = 0.0;
  const double w0_sq = std::pow(tr.W.l2_norm(), 2);
  auto a3_source = [&]() {
    const ScalarField lap = laplacian(ac.Phi);
    double s = 0.0;
    for (std::size_t n = 0; n < g.size(); ++n) s += lap[n] * tr.W[n] * tr.W[n];
    return s * g.cell_volume();
  };
  a3_source_prev = a3_source();

  std::vector<NsfState> sampled;
  std::vector<NsfRecord> nsf_rows;
  std::vector<AcousticRecord> ac_rows;
  std::vector<TransportRecord> tr_rows;

  auto record = [&]() {
    const R1Sample now = r1_sample(nsf, ac, tr.W, eu, nopt);
    const NamedValues conv = convergence_metrics(nsf, eu, ref, scaling, K);
    EulerBoussinesqState naive = eu;
    naive.T = T_naive;
    const NamedValues conv_naive = convergence_metrics(nsf, naive, ref, scaling, K);
    sum.t.push_back(nsf.t);
    sum.rel_entropy.push_back(now.rel_entropy);
    sum.m3.push_back(conv.at("m3"));
    sum.m4.push_back(conv.at("m4"));
    sum.m5.push_back(conv.at("m5_q1"));
    sum.m5_q32.push_back(conv.at("m5_q3/2"));
    sum.m5_naive.push_back(conv_naive.at("m5_q1"));
    sum.r1_gap.push_back(r1.gap());
    sum.r1_scale.push_back(r1.scale());
    sampled.push_back(nsf);
    nsf_rows.push_back({nsf.t, nsf.mass(), nsf.total_energy(), nsf.rho.min(), nsf.theta.min(),
                        sum.entropy_prod_min, v4.gap()});
    ac_rows.push_back(acoustic_record(ac));
    const double w = tr.W.l2_norm();
    const double a3 = std::abs(w * w - w0_sq + a3_integral) / (w0_sq > 0.0 ? w0_sq : 1.0);
    tr_rows.push_back({tr.t, w, tr.W.max_abs(), a3});
    if (opts.write_outputs && cfg.output.snapshots) {
      std::ostringstream tag;
      tag << std::setw(4) << std::setfill('0') << (sum.t.size() - 1);
      write_snapshot((dir / ("rho_" + tag.str() + ".bin")).string(), nsf.rho, "rho", nsf.t);
      write_snapshot((dir / ("theta_" + tag.str() + ".bin")).string(), nsf.theta, "theta", nsf.t);
      write_snapshot((dir / ("T_limit_" + tag.str() + ".bin")).string(), eu.T, "T_limit", eu.t);
    }
  };
  record();

  long step = 0;
  try {
    for (long s = 0; s < n_samples; ++s) {
      for (long k = 0; k < per_sample; ++k, ++step) {
        const double t0 = nsf.t;
        const double t1 = static_cast<double>(step + 1) * dt;
        nsf = nsf_step_imex(nsf, t1 - t0, nopt);
        nsf.t = t1;

        const VectorField v_old = eu.v;
        eu = euler_step(eu, t1 - t0, eopt);
        eu.t = t1;
        VectorField v_mid = v_old;
        v_mid += eu.v;
        v_mid *= 0.5;

        const AcousticState ac_mid = prop.state_at(0.5 * (t0 + t1));
        VectorField U_mid = v_mid;
        U_mid += grad(ac_mid.Phi);
        tr = transport_step(tr, U_mid, laplacian(ac_mid.Phi), t1 - t0);
        tr.t = t1;
        T_naive = limit_temperature_step(T_naive, v_mid, t1 - t0, eopt.temperature);
        ac = prop.state_at(t1);

        const ScalarField sigma = entropy_production(nsf, nopt);
        sum.entropy_prod_min = std::min(sum.entropy_prod_min, sigma.min());
        v4.advance(nsf, ref.theta_bar / (eps * eps) * sigma.integral());
        r1.add(r1_sample(nsf, ac, tr.W, eu, nopt));
        const double src = a3_source();
        a3_integral += 0.5 * (t1 - t0) * (src + a3_source_prev);
        a3_source_prev = src;

        sum.mass_drift = std::max(sum.mass_drift, std::abs(nsf.mass() - mass0) / std::abs(mass0));
        sum.energy_drift_rate = std::max(
            sum.energy_drift_rate, std::abs(nsf.total_energy() - energy0) / std::abs(energy0) / t1);
        for (int d = 0; d < g.dim; ++d) {
          const double drift = std::abs(total(nsf.m[d]) - mom0[d]);
          sum.momentum_drift = std::max(sum.momentum_drift, mom_scale > 0 ? drift / mom_scale : drift);
        }
        if (v4.rhs() != 0.0) {
          sum.v4_rel_gap_max = std::max(sum.v4_rel_gap_max, v4.gap() / std::abs(v4.rhs()));
        }
      }
      record();
    }
  } catch (const std::exception& e) {
    std::ostringstream os;
    os << "run eps=" << eps << " failed at step " << step << " (t = " << nsf.t << "): " << e.what();
    throw RunFailure(os.str());
  }

  sum.v4_gap = v4.gap();
  sum.sup_rel_entropy = *std::max_element(sum.rel_entropy.begin(), sum.rel_entropy.end());
  sum.r1_gap_min = *std::min_element(sum.r1_gap.begin(), sum.r1_gap.end());
  sum.r1_rel_gap_min = 0.0;
  for (std::size_t i = 0; i < sum.r1_gap.size(); ++i) {
    if (sum.r1_scale[i] > 0.0) {
      sum.r1_rel_gap_min = std::min(sum.r1_rel_gap_min, sum.r1_gap[i] / sum.r1_scale[i]);
    }
  }
  sum.bounds = uniform_bounds_report(sampled, scaling);

  if (opts.write_outputs) {
    write_nsf_csv((dir / "nsf.csv").string(), nsf_rows);
    write_acoustic_csv((dir / "acoustic.csv").string(), ac_rows);
    write_transport_csv((dir / "transport.csv").string(), tr_rows);
    json j;
    j["eps"] = eps;
    j["eta"] = scaling.eta;
    j["dt"] = dt;
    j["steps"] = sum.steps;
    j["t"] = sum.t;
    j["rel_entropy"] = sum.rel_entropy;
    j["m3"] = sum.m3;
    j["m4"] = sum.m4;
    j["m5"] = sum.m5;
    j["m5_q3/2"] = sum.m5_q32;
    j["m5_naive"] = sum.m5_naive;
    j["r1_gap"] = sum.r1_gap;
    j["r1_scale"] = sum.r1_scale;
    j["bounds"] = sum.bounds;
    j["conservation"] = {{"mass_drift", sum.mass_drift},
                         {"energy_drift_per_time", sum.energy_drift_rate},
                         {"momentum_drift", sum.momentum_drift},
                         {"entropy_prod_min", sum.entropy_prod_min},
                         {"v4_gap", sum.v4_gap},
                         {"v4_rel_gap_max", sum.v4_rel_gap_max}};
    j["conventions"] = {
        {"mollifier", "gaussian, symbol exp(-|k|^2 eta^2 / 2)"},
        {"cutoff", "C2 radial ramp about the box centre, 1 inside l/(2 eta/L), 0 beyond l/(eta/L)"},
        {"cutoff_unit", cfg.scaling.cutoff_unit > 0.0 ? cfg.scaling.cutoff_unit : g.L / 40.0},
        {"limit_temperature_factor", limit_temperature_factor(ref)},
        {"reference", {{"rho_bar", ref.rho_bar}, {"theta_bar", ref.theta_bar}, {"alpha", ref.alpha},
                       {"beta", ref.beta}, {"delta", ref.delta}, {"omega", ref.omega}}},
        {"t_max", cfg.time.t_max}};
    write_json(dir / "diagnostics.json", j);
  }
  return sum;
}

SweepTable run_sweep(const ExperimentConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  const auto& eps = cfg.scaling.eps;
  if (eps.size() < 3) throw ConfigError("a sweep needs at least 3 eps values");
  for (std::size_t i = 1; i < eps.size(); ++i) {
    if (!(eps[i] < eps[i - 1])) throw ConfigError("sweep eps values must be strictly decreasing");
  }
  SweepTable table;
  for (double e : eps) {
    SweepRow row;
    row.eps = e;
    const double frac = opts.eta_fraction > 0.0 ? opts.eta_fraction : cfg.scaling.eta;
    row.eta = frac * cfg.grid.L;
    try {
      const RunSummary s = run_single(cfg, e, opts);
      row.sup_rel_entropy = s.sup_rel_entropy;
      row.m3_over_eps = s.m3.back() / e;
      row.m4 = s.m4.back();
      row.m5 = s.m5.back();
      row.m5_naive = s.m5_naive.back();
      row.r1_gap_min = s.r1_gap_min;
      row.r1_rel_gap_min = s.r1_rel_gap_min;
    } catch (const std::exception& ex) {
      row.status = std::string("failed: ") + ex.what();
    }
    table.rows.push_back(row);
  }
  return table;
}

SweepTable run_eta_table(const ExperimentConfig& cfg, const RunOptions& opts) {
  SweepTable all;
  for (double frac : cfg.scaling.eta_list) {
    RunOptions o = opts;
    o.eta_fraction = frac;
    ExperimentConfig c = cfg;
    std::ostringstream sub;
    sub << "eta_" << frac;
    c.output.dir = (std::filesystem::path(cfg.output.dir) / sub.str()).string();
    const SweepTable t = run_sweep(c, o);
    all.rows.insert(all.rows.end(), t.rows.begin(), t.rows.end());
  }
  return all;
}

std::string sweep_csv(const SweepTable& table) {
  std::ostringstream out;
  out << "eps,eta,sup_rel_entropy,m3_over_eps,m4,m5,m5_naive,r1_gap_min,r1_rel_gap_min,status\n";
  out << std::setprecision(12);
  for (const auto& r : table.rows) {
    std::string status = r.status;
    std::replace(status.begin(), status.end(), ',', ';');
    std::replace(status.begin(), status.end(), '\n', ' ');
    out << r.eps << ',' << r.eta << ',' << r.sup_rel_entropy << ',' << r.m3_over_eps << ','
        << r.m4 << ',' << r.m5 << ',' << r.m5_naive << ',' << r.r1_gap_min << ','
        << r.r1_rel_gap_min << ',' << status << '\n';
  }
  return out.str();
}

void write_sweep_csv(const std::string& path, const SweepTable& table) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << sweep_csv(table);
}

RateFit fit_rate(const std::vector<double>& eps, const std::vector<double>& values) {
  if (eps.size() != values.size()) throw FitError("eps and value columns differ in length");
  if (values.size() < 3) throw FitError("rate fit needs at least 3 entries");
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0) || !(eps[i] > 0.0)) throw FitError("rate fit needs positive entries");
    const double x = std::log(eps[i]), y = std::log(values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  const double n = static_cast<double>(values.size());
  const double sxx_c = sxx - sx * sx / n;
  const double sxy_c = sxy - sx * sy / n;
  const double syy_c = syy - sy * sy / n;
  if (!(sxx_c > 0.0)) throw FitError("rate fit needs distinct eps values");
  RateFit fit;
  fit.order = sxy_c / sxx_c;
  fit.r_squared = syy_c > 0.0 ? (sxy_c * sxy_c) / (sxx_c * syy_c) : 1.0;
  return fit;
}

RateFit fit_rate_csv(const std::string& path, const std::string& column) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read table " + path);
  std::string line;
  std::getline(in, line);
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  const auto find = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw FitError("table has no column " + name);
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t ie = find("eps"), ic = find(column);
  const auto st = std::find(header.begin(), header.end(), "status");
  std::vector<double> eps, values;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() < header.size()) throw FitError("short row in " + path);
    if (st != header.end() && cells[static_cast<std::size_t>(st - header.begin())] != "ok") continue;
    eps.push_back(std::stod(cells[ie]));
    values.push_back(std::stod(cells[ic]));
  }
  return fit_rate(eps, values);
}

DecayResult run_acoustic_decay(const ExperimentConfig& cfg, bool write_outputs) {
  cfg.validate();
  const Grid g(cfg.grid.dim, cfg.grid.n, cfg.grid.L);
  const GasModel gas = cfg.gas_model();
  const ReferenceState ref = linearization_coefficients(gas, cfg.ref.rho_bar, cfg.ref.theta_bar);
  const double eps = cfg.scaling.eps.front();
  DecayResult res;
  res.r_support = cfg.decay.support_factor * cfg.decay.width;
  if (res.r_support >= g.L / 2.0) throw ConfigError("decay data support does not fit in the box");
  res.t_wrap = acoustic_wrap_time(g, res.r_support, ref.omega, eps);
  const double t_first = cfg.decay.t_start * eps;
  if (!(res.t_wrap > t_first)) throw ConfigError("wrap-around time precedes the first sample");

  AcousticState init;
  init.Z = gaussian(g, centre(g), cfg.decay.width);
  init.Phi = ScalarField(g);
  init.eps = eps;
  init.ref = ref;
  const AcousticPropagator prop(init);

  std::vector<DecaySample> series;
  const int n = cfg.decay.samples;
  for (int i = 0; i < n; ++i) {
    const double t = t_first + (res.t_wrap - t_first) * static_cast<double>(i) / (n - 1);
    const AcousticState s = prop.state_at(t);
    res.records.push_back(acoustic_record(s));
    series.push_back({t, res.records.back().sup_norm_Z});
  }
  res.sigma = decay_exponent_fit(series, eps, res.t_wrap);

  if (write_outputs) {
    const auto dir = ensure_dir(std::filesystem::path(cfg.output.dir));
    write_acoustic_csv((dir / "acoustic_decay.csv").string(), res.records);
    json j;
    j["eps"] = eps;
    j["sigma"] = res.sigma;
    j["t_wrap"] = res.t_wrap;
    j["r_support"] = res.r_support;
    j["expected_sigma"] = 1.0;
    write_json(dir / "acoustic_decay.json", j);
  }
  return res;
}

}  // namespace machlimit
