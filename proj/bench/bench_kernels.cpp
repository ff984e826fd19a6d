// Copyright 2026 The eraser-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Serial reference vs OpenMP kernels on the eraser state shapes.

#include <array>
#include <numeric>
#include <random>

#include <benchmark/benchmark.h>

#include "eraser/experiment.hpp"
#include "eraser/kernels.hpp"
#include "eraser/montecarlo.hpp"

using namespace eraser;

namespace {

kernels::Exec exec_of(const benchmark::State& state) {
    return state.range(1) == 0 ? kernels::Exec::serial : kernels::Exec::parallel;
}

experiment::ExperimentState final_state(std::size_t bins) {
    return experiment::prepare(experiment::DetectorModel::uniform(bins, {2.0, 0.0}, true));
}

void BM_ReducePure(benchmark::State& state) {
    const auto bins = static_cast<std::size_t>(state.range(0));
    const auto psi = final_state(bins).full.amplitudes();
    const std::array<std::size_t, 2> dims{experiment::kPhotonIDim, bins};
    const std::array<std::uint8_t, 2> keep{0, 1};
    const auto split = kernels::split_indices(dims, keep);
    for (auto _ : state) benchmark::DoNotOptimize(kernels::reduce_pure(psi, split, exec_of(state)));
}

void BM_TraceOut(benchmark::State& state) {
    const auto bins = static_cast<std::size_t>(state.range(0));
    const auto psi = final_state(bins).full.amplitudes();
    const Eigen::MatrixXcd rho = psi * psi.adjoint();
    const std::array<std::size_t, 2> dims{experiment::kPhotonIDim, bins};
    const std::array<std::uint8_t, 2> keep{0, 1};
    const auto split = kernels::split_indices(dims, keep);
    for (auto _ : state) benchmark::DoNotOptimize(kernels::trace_out(rho, split, exec_of(state)));
}

void BM_BinProbabilities(benchmark::State& state) {
    const auto bins = static_cast<std::size_t>(state.range(0));
    const auto psi = final_state(bins).full.amplitudes();
    for (auto _ : state)
        benchmark::DoNotOptimize(kernels::bin_probabilities(psi, experiment::kPhotonIDim, bins, 1, exec_of(state)));
}

void BM_SampleCells(benchmark::State& state) {
    const auto table = experiment::coincidence_table(final_state(static_cast<std::size_t>(state.range(0))));
    std::vector<double> cdf(table.joint.size());
    std::partial_sum(table.joint.begin(), table.joint.end(), cdf.begin());
    constexpr std::size_t kPartitions = 16;
    constexpr std::uint64_t kTrials = 1000000;
    const std::vector<std::uint64_t> trials(kPartitions, kTrials / kPartitions);
    const auto seeds = mc::partition_seeds(42, kPartitions);
    for (auto _ : state) benchmark::DoNotOptimize(kernels::sample_cells(cdf, trials, seeds, exec_of(state)));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(kTrials));
}

}  // namespace

BENCHMARK(BM_ReducePure)->ArgsProduct({{64, 256, 1024}, {0, 1}})->ArgNames({"bins", "parallel"});
BENCHMARK(BM_TraceOut)->ArgsProduct({{64, 256}, {0, 1}})->ArgNames({"bins", "parallel"});
BENCHMARK(BM_BinProbabilities)->ArgsProduct({{64, 1024}, {0, 1}})->ArgNames({"bins", "parallel"});
BENCHMARK(BM_SampleCells)->ArgsProduct({{64, 1024}, {0, 1}})->ArgNames({"bins", "parallel"})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
