// Copyright 2026 The cojudge Authors
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

#include <random>
#include <vector>

#include "benchmark/benchmark.h"
#include "cojudge/metrics.h"
#include "cojudge/trajectory.h"

namespace {

cojudge::ScoredSet RandomSet(std::size_t n) {
  std::mt19937_64 rng(n);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> p(n);
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = u(rng);
    y[i] = u(rng) < p[i];
  }
  y[0] = 1;
  y[1] = 0;
  return *cojudge::ScoredSet::Create(std::move(p), std::move(y));
}

void BM_RocAuc(benchmark::State& state) {
  auto s = RandomSet(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(cojudge::RocAuc(s));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_RocAuc)->RangeMultiplier(10)->Range(100, 100000)->Complexity();

void BM_PrAuc(benchmark::State& state) {
  auto s = RandomSet(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(cojudge::PrAuc(s));
}
BENCHMARK(BM_PrAuc)->RangeMultiplier(10)->Range(100, 100000);

void BM_Ece(benchmark::State& state) {
  auto s = RandomSet(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(cojudge::Ece(s));
}
BENCHMARK(BM_Ece)->Arg(100000);

void BM_SelectThreshold(benchmark::State& state) {
  auto s = RandomSet(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(cojudge::SelectThreshold(s, s));
}
BENCHMARK(BM_SelectThreshold)->Arg(50)->Arg(500);

void BM_KaplanMeier(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::vector<cojudge::TrajectoryOutcome> outcomes;
  for (int i = 0; i < state.range(0); ++i) {
    int const horizon = 1 + static_cast<int>(rng() % 30);
    cojudge::FirstSuccess fs = cojudge::Never{};
    if (rng() % 3) fs = 1 + static_cast<int>(rng() % horizon);
    outcomes.push_back(cojudge::MakeOutcome("u" + std::to_string(i), "p", fs, horizon));
  }
  for (auto _ : state) benchmark::DoNotOptimize(cojudge::KaplanMeier(outcomes));
}
BENCHMARK(BM_KaplanMeier)->Arg(184)->Arg(2000);

}  // namespace
