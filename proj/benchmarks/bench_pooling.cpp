// Copyright 2026 The pooling authors
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

#include <benchmark/benchmark.h>

#include <cmath>

#include "pooling/coc_bf.hpp"
#include "pooling/cos/assignment_rates.hpp"
#include "pooling/cos/mixture.hpp"
#include "pooling/cos/product_form.hpp"
#include "pooling/cos/typed_ctmc.hpp"
#include "pooling/desim.hpp"
#include "pooling/erlang.hpp"
#include "pooling/pareto.hpp"

using namespace pooling;

namespace {

ProviderPair pair(double u, int n) { return {ProviderParams{u * n, 1.0, n}, ProviderParams{0.8 * u * n, 1.0, n}}; }

void BM_ErlangC(benchmark::State& st) {
    const int n = static_cast<int>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(erlang_c(0.8 * n, n));
}
BENCHMARK(BM_ErlangC)->Arg(2)->Arg(50)->Arg(1000);

void BM_InvertErlangC(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(invert_erlang_c(0.1, 20));
}
BENCHMARK(BM_InvertErlangC);

void BM_CocResponse(benchmark::State& st) {
    const auto pp = pair(0.7, 10);
    for (auto _ : st) benchmark::DoNotOptimize(coc::mean_response_coc(pp, {4, 6}));
}
BENCHMARK(BM_CocResponse);

void BM_AssignmentRates(benchmark::State& st) {
    const int n = static_cast<int>(st.range(0));
    const auto pp = pair(0.7, n);
    const SharingConfig k{n / 2.0, static_cast<double>(n / 2)};
    for (auto _ : st) benchmark::DoNotOptimize(cos::solve_assignment_rates(pp, {std::floor(k.k1), k.k2}));
}
BENCHMARK(BM_AssignmentRates)->Arg(2)->Arg(6)->Arg(12);

void BM_WaitingProbabilities(benchmark::State& st) {
    const int n = static_cast<int>(st.range(0));
    const auto pp = pair(0.7, n);
    for (auto _ : st) benchmark::DoNotOptimize(cos::waiting_probabilities(pp, {1, 1}));
}
BENCHMARK(BM_WaitingProbabilities)->Arg(1)->Arg(4)->Arg(10);

void BM_TypedChain(benchmark::State& st) {
    const double u = static_cast<double>(st.range(0)) / 10.0;
    const auto pp = pair(u, 2);
    const SharingConfig k{1, 1};
    const int cap = cos::certified_buffer_cap(pp, k);
    for (auto _ : st) benchmark::DoNotOptimize(cos::typed_ctmc_oracle(pp, k, cap));
}
BENCHMARK(BM_TypedChain)->Arg(3)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_Frontier(benchmark::State& st) {
    const ProviderPair pp{ProviderParams{0.3, 1.0, 1}, ProviderParams{0.1, 1.0, 1}};
    for (auto _ : st) benchmark::DoNotOptimize(pareto::pareto_frontier(pp, Policy::cos, Metric::wait, 0.01));
}
BENCHMARK(BM_Frontier)->Unit(benchmark::kMillisecond);

void BM_Ksbs(benchmark::State& st) {
    const ProviderPair pp{ProviderParams{0.1, 1.0, 1}, ProviderParams{0.5, 1.0, 1}};
    for (auto _ : st) benchmark::DoNotOptimize(pareto::ksbs(pp, Policy::cos, Metric::wait, 0.01));
}
BENCHMARK(BM_Ksbs)->Unit(benchmark::kMillisecond);

void BM_Simulate(benchmark::State& st) {
    sim::SimScenario s;
    s.providers = pair(0.7, 2);
    s.config = {1, 1};
    s.policy = st.range(0) == 0 ? Policy::cos : Policy::coc;
    s.horizon = 110'000;
    s.warmup = 10'000;
    for (auto _ : st) benchmark::DoNotOptimize(sim::simulate(s));
    st.SetItemsProcessed(static_cast<std::int64_t>(st.iterations() * s.horizon));
}
BENCHMARK(BM_Simulate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
