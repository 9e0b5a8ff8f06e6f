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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "machlimit/errors.hpp"
#include "machlimit/harness.hpp"

using namespace machlimit;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const char* base = std::getenv("MACHLIMIT_TMP");
  fs::path p = fs::path(base ? base : fs::temp_directory_path().string()) / name;
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Coarse, short configuration.
ExperimentConfig tiny(const fs::path& dir) {
  ExperimentConfig cfg;
  cfg.grid.dim = 2;
  cfg.grid.n = 16;
  cfg.grid.L = 16.0;
  cfg.scaling.eps = {0.4, 0.2, 0.1};
  cfg.scaling.eta = 0.01;
  cfg.time.dt = 0.02;
  cfg.time.t_final = 0.1;
  cfg.time.sample_interval = 0.05;
  cfg.data.vortex_amp = 0.2;
  cfg.data.gradient_amp = 0.2;
  cfg.data.rho_amp = 0.5;
  cfg.data.theta_amp = 0.5;
  cfg.output.dir = dir.string();
  cfg.output.snapshots = false;
  return cfg;
}

}  // namespace

TEST_CASE("config text round trip") {
  ExperimentConfig cfg;
  cfg.grid.n = 64;
  cfg.scaling.eps = {0.3, 0.15, 0.075};
  cfg.scaling.eta_list = {0.01, 0.001};
  cfg.data.theta_shift = -0.25;
  cfg.output.dir = "some/where";
  cfg.output.snapshots = false;
  const std::string text = serialize_config(cfg);
  const ExperimentConfig back = parse_config(text);
  CHECK(serialize_config(back) == text);
  CHECK(back.grid.n == 64);
  CHECK(back.scaling.eps == cfg.scaling.eps);
  CHECK(back.scaling.eta_list == cfg.scaling.eta_list);
  CHECK(back.data.theta_shift == -0.25);
  CHECK(back.output.dir == "some/where");
  CHECK_FALSE(back.output.snapshots);
}

TEST_CASE("config errors") {
  CHECK_NOTHROW(parse_config("# comment\n\ngrid.n = 32\n"));
  CHECK_THROWS_AS(parse_config("grid.size = 32\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("grid.n = 32\ngrid.n = 64\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("grid.n 32\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("grid.n = 30\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("grid.L = abc\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("scaling.a_exp = 4\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("scaling.b_exp = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("scaling.eps = 0.1, 0.05, 0.1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("output.snapshots = maybe\n"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/machlimit.cfg"), IoError);
}

TEST_CASE("rate fit on synthetic tables") {
  const std::vector<double> eps{0.4, 0.2, 0.1, 0.05};
  std::vector<double> quad, flat;
  for (double e : eps) {
    quad.push_back(3.0 * e * e);
    flat.push_back(7.0);
  }
  const RateFit q = fit_rate(eps, quad);
  CHECK(std::abs(q.order - 2.0) < 1e-6);
  CHECK(q.r_squared == doctest::Approx(1.0));
  CHECK(std::abs(fit_rate(eps, flat).order) < 1e-12);
  CHECK_THROWS_AS(fit_rate({0.1, 0.05}, {1.0, 0.5}), FitError);
  CHECK_THROWS_AS(fit_rate(eps, {1.0, 0.0, 1.0, 1.0}), FitError);
  CHECK_THROWS_AS(fit_rate({0.1, 0.1, 0.1}, {1.0, 2.0, 3.0}), FitError);
}

TEST_CASE("rate fit from a sweep table skips failed rows") {
  SweepTable t;
  for (double e : {0.4, 0.2, 0.1, 0.05}) {
    SweepRow r;
    r.eps = e;
    r.m4 = 2.0 * e;
    t.rows.push_back(r);
  }
  t.rows[1].status = "failed: test";
  t.rows[1].m4 = 1e6;
  const fs::path dir = scratch("fit");
  fs::create_directories(dir);
  write_sweep_csv((dir / "sweep.csv").string(), t);
  CHECK(std::abs(fit_rate_csv((dir / "sweep.csv").string(), "m4").order - 1.0) < 1e-9);
  CHECK_THROWS_AS(fit_rate_csv((dir / "sweep.csv").string(), "nope"), FitError);
  CHECK_THROWS_AS(fit_rate_csv((dir / "missing.csv").string(), "m4"), IoError);
  CHECK(sweep_csv(t).rfind("eps,eta,sup_rel_entropy,m3_over_eps,m4,m5,m5_naive,r1_gap_min,r1_rel_gap_min,status", 0) == 0);
}

TEST_CASE("unperturbed data give vanishing metrics") {
  ExperimentConfig cfg = tiny(scratch("rest"));
  cfg.data.rho_amp = cfg.data.theta_amp = cfg.data.vortex_amp = cfg.data.gradient_amp = 0.0;
  RunOptions opts;
  opts.write_outputs = false;
  const RunSummary s = run_single(cfg, 0.1, opts);
  CHECK(s.sup_rel_entropy < 1e-12);
  for (double v : s.m4) CHECK(v < 1e-12);
  for (double v : s.m5) CHECK(v < 1e-12);
  for (double v : s.m3) CHECK(v < 1e-12);
  CHECK(s.mass_drift < 1e-14);
  CHECK(s.t.back() == doctest::Approx(cfg.time.t_final));
}

TEST_CASE("a run writes its outputs") {
  const fs::path dir = scratch("single");
  ExperimentConfig cfg = tiny(dir);
  cfg.output.snapshots = true;
  const RunSummary s = run_single(cfg, 0.2);
  const fs::path run = dir / "eps_0.2";
  for (const char* f : {"nsf.csv", "acoustic.csv", "transport.csv", "diagnostics.json", "rho_0000.bin"}) {
    CHECK_MESSAGE(fs::exists(run / f), f);
  }
  const auto j = nlohmann::json::parse(slurp(run / "diagnostics.json"));
  CHECK(j.contains("conventions"));
  CHECK(s.steps > 0);
  CHECK(s.dt * static_cast<double>(s.steps) == doctest::Approx(cfg.time.t_final));
  CHECK(s.mass_drift < 1e-12);
}

TEST_CASE("unusable output directory") {
  const fs::path base = scratch("blocked");
  fs::create_directories(base);
  std::ofstream(base / "file") << "x";
  ExperimentConfig cfg = tiny(base / "file" / "sub");
  CHECK_THROWS_AS(run_single(cfg, 0.1), IoError);
}

TEST_CASE("sweeps are deterministic") {
  const ExperimentConfig a = tiny(scratch("sweep_a"));
  ExperimentConfig b = tiny(scratch("sweep_b"));
  const SweepTable ta = run_sweep(a), tb = run_sweep(b);
  REQUIRE(ta.rows.size() == 3);
  for (const auto& r : ta.rows) CHECK(r.status == "ok");
  CHECK(sweep_csv(ta) == sweep_csv(tb));

  ExperimentConfig bad = a;
  bad.scaling.eps = {0.1, 0.2, 0.05};
  CHECK_THROWS_AS(run_sweep(bad), ConfigError);
  bad.scaling.eps = {0.2, 0.1};
  CHECK_THROWS_AS(run_sweep(bad), ConfigError);
}

TEST_CASE("eta table") {
  ExperimentConfig cfg = tiny(scratch("eta"));
  cfg.scaling.eta_list = {0.05, 0.01};
  RunOptions opts;
  opts.write_outputs = false;
  const SweepTable t = run_eta_table(cfg, opts);
  REQUIRE(t.rows.size() == 6);
  CHECK(t.rows[0].eta != t.rows[3].eta);
}

TEST_CASE("dissipation bounds stay uniform across the sweep") {
  ExperimentConfig cfg;
  cfg.grid.n = 32;
  cfg.grid.L = 16.0;
  cfg.scaling.eta = 0.01;
  cfg.time.t_final = 0.2;
  cfg.time.sample_interval = 0.05;
  RunOptions opts;
  opts.write_outputs = false;
  std::vector<NamedValues> b;
  for (double e : {0.2, 0.1, 0.05}) b.push_back(run_single(cfg, e, opts).bounds);
  for (const auto& [name, first] : b[0]) {
    for (const auto& bi : b) CHECK_MESSAGE(bi.at(name) <= 2.0 * first, name);
  }
  // The O(1) quantities neither grow nor collapse.
  for (const char* name : {"b3", "b4_rho", "b4_theta"}) {
    double lo = b[0].at(name), hi = lo;
    for (const auto& bi : b) {
      lo = std::min(lo, bi.at(name));
      hi = std::max(hi, bi.at(name));
    }
    CHECK_MESSAGE(hi < 2.0 * lo, name);
  }
}
