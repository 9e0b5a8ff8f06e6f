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

#include <cmath>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "machlimit/kernels.hpp"
#include "machlimit/thermo.hpp"

using namespace machlimit;

namespace {

ScalarField smooth_field(int n) {
  const Grid g(2, n, 2.0 * 3.141592653589793);
  return ScalarField::from_function(g, [](const std::array<double, 3>& x) {
    return std::sin(x[0]) * std::cos(2.0 * x[1]);
  });
}

kernels::Points random_points(const Grid& g, std::size_t count) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, g.L);
  kernels::Points p;
  p.dim = g.dim;
  p.xyz.resize(count * static_cast<std::size_t>(g.dim));
  for (auto& v : p.xyz) v = u(rng);
  return p;
}

template <bool Parallel>
void BM_Interpolate(benchmark::State& st) {
  const ScalarField f = smooth_field(static_cast<int>(st.range(0)));
  const auto pts = random_points(f.grid(), f.grid().size());
  std::vector<double> out(f.grid().size());
  for (auto _ : st) {
    if constexpr (Parallel) kernels::parallel::interpolate(f, pts, kernels::InterpOrder::Quintic, false, out);
    else kernels::serial::interpolate(f, pts, kernels::InterpOrder::Quintic, false, out);
    benchmark::DoNotOptimize(out.data());
  }
}

struct RecoveryInput {
  std::vector<double> rho, e, guess;
};

RecoveryInput recovery_input(std::size_t n, const GasModel& gas) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.8, 1.2);
  RecoveryInput in;
  for (std::size_t i = 0; i < n; ++i) {
    const double rho = u(rng), theta = u(rng);
    in.rho.push_back(rho);
    in.e.push_back(eval_eos(gas, rho, theta).e);
    in.guess.push_back(1.0);
  }
  return in;
}

template <bool Parallel>
void BM_RecoverTemperature(benchmark::State& st) {
  const GasModel gas = GasModel::fn_degenerate();
  const auto in = recovery_input(static_cast<std::size_t>(st.range(0)), gas);
  for (auto _ : st) {
    auto r = Parallel ? kernels::parallel::recover_temperature(gas, in.rho, in.e, in.guess, 1.0)
                      : kernels::serial::recover_temperature(gas, in.rho, in.e, in.guess, 1.0);
    benchmark::DoNotOptimize(r.theta.data());
  }
}

template <bool Parallel>
void BM_BlockedSum(benchmark::State& st) {
  std::vector<double> v(static_cast<std::size_t>(st.range(0)));
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  for (auto& x : v) x = nd(rng);
  for (auto _ : st) {
    benchmark::DoNotOptimize(Parallel ? kernels::parallel::blocked_sum(v)
                                      : kernels::serial::blocked_sum(v));
  }
}

}  // namespace

BENCHMARK(BM_Interpolate<false>)->Arg(64)->Arg(128);
BENCHMARK(BM_Interpolate<true>)->Arg(64)->Arg(128);
BENCHMARK(BM_RecoverTemperature<false>)->Arg(1 << 14)->Arg(1 << 16);
BENCHMARK(BM_RecoverTemperature<true>)->Arg(1 << 14)->Arg(1 << 16);
BENCHMARK(BM_BlockedSum<false>)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_BlockedSum<true>)->Arg(1 << 16)->Arg(1 << 20);

BENCHMARK_MAIN();
