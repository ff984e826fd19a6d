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

#include "eraser/montecarlo.hpp"

#include <cmath>
#include <numeric>

#include "gtest/gtest.h"

#include "eraser/errors.hpp"

using namespace eraser;
using namespace eraser::experiment;
using namespace eraser::mc;

namespace {

CoincidenceTable eraser_table(std::size_t bins, double cycles = 2.0, Layout layout = Layout::eraser) {
    return coincidence_table(prepare(DetectorModel::uniform(bins, {cycles, 0.0}, true), layout));
}

}  // namespace

TEST(Splitmix, reference_values) {
    // First outputs of splitmix64 seeded with 0.
    std::uint64_t s = 0;
    EXPECT_EQ(splitmix64_next(s), 0xe220a8397b1dcdafULL);
    EXPECT_EQ(splitmix64_next(s), 0x6e789e6aa1b965f4ULL);
    EXPECT_EQ(splitmix64_next(s), 0x06c45d188009454fULL);
    const auto seeds = partition_seeds(0, 3);
    EXPECT_EQ(seeds[0], 0xe220a8397b1dcdafULL);
    EXPECT_EQ(seeds[2], 0x06c45d188009454fULL);
}

TEST(Sample, one_hot_table) {
    const auto table = make_table(2, {0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0});
    const auto run = sample(table, 1, 5);
    EXPECT_EQ(run.count(Detector::b, 0), 1u);
    EXPECT_EQ(run.total(), 1u);
}

TEST(Sample, deterministic_in_seed) {
    const auto table = eraser_table(32);
    EXPECT_EQ(sample(table, 10000, 42).counts, sample(table, 10000, 42).counts);
    EXPECT_NE(sample(table, 10000, 42).counts, sample(table, 10000, 43).counts);
}

TEST(Sample, invalid_arguments) {
    const auto table = eraser_table(8);
    EXPECT_THROW(sample(table, 0, 1), ArgumentError);
    EXPECT_THROW(sample(table, 10, 1, 0), ArgumentError);
}

TEST(Sample, conserves_trials) {
    const auto table = eraser_table(16);
    for (std::size_t parts : {1u, 3u, 7u}) {
        const auto run = sample(table, 12345, 9, parts);
        EXPECT_EQ(run.total(), 12345u);
        EXPECT_EQ(run.partitions, parts);
        std::uint64_t rows = 0;
        for (Detector r : kDetectors) rows += run.row_total(r);
        EXPECT_EQ(rows, 12345u);
    }
}

TEST(Sample, parallel_equals_serial_for_fixed_partitions) {
    const auto table = eraser_table(64);
    for (std::size_t parts : {1u, 4u, 16u})
        EXPECT_EQ(sample(table, 50000, 1234, parts, kernels::Exec::serial).counts,
                  sample(table, 50000, 1234, parts, kernels::Exec::parallel).counts);
}

TEST(Sample, branch_frequencies) {
    const auto run = sample(eraser_table(64), 100000, 2024);
    for (Detector r : kDetectors) EXPECT_NEAR(static_cast<double>(run.row_total(r)) / 1e5, 0.25, 0.01);
}

TEST(Sample, never_hits_empty_rows) {
    const auto run = sample(eraser_table(32, 2.0, Layout::removed), 20000, 3);
    EXPECT_EQ(run.row_total(Detector::b), 0u);
    EXPECT_EQ(run.row_total(Detector::c), 0u);
}

TEST(ChiSquare, exact_counts_give_zero_statistic) {
    // N = 4, one cycle: every cell is a multiple of 1/16.
    const auto table = eraser_table(4, 1.0);
    SampleRun run;
    run.trials = 16000;
    run.bins = 4;
    run.seed = 0;
    for (double p : table.joint) run.counts.push_back(static_cast<std::uint64_t>(std::llround(p * 16000)));
    const auto chi = chi_square(run, table);
    EXPECT_LT(chi.statistic, 1e-20);
    EXPECT_NEAR(chi.p_value, 1.0, 1e-12);
    EXPECT_EQ(chi.dof + 1, chi.cells);
}

TEST(ChiSquare, pooling_of_small_cells) {
    // Two zero cells (b and c); their pool stays below 5 and is folded
    // into the smallest regular cell.
    const auto table = eraser_table(4, 1.0);
    const auto chi = chi_square(sample(table, 16000, 1), table);
    EXPECT_EQ(chi.pooled, 2u);
    EXPECT_EQ(chi.cells, 14u);
    EXPECT_EQ(chi.dof, 13u);
}

TEST(ChiSquare, needs_two_cells) {
    const auto table = make_table(1, {1.0, 0.0, 0.0, 0.0});
    EXPECT_THROW(chi_square(sample(table, 100, 1), table), ArgumentError);
}

TEST(ChiSquare, detects_wrong_model) {
    const auto eraser = eraser_table(32);
    const auto removed = eraser_table(32, 2.0, Layout::removed);
    const auto chi = chi_square(sample(removed, 100000, 5), eraser);
    EXPECT_LT(chi.p_value, 1e-6);
}

TEST(ChiSquare, accepts_right_model) {
    const auto table = eraser_table(64);
    int accepted = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed)
        accepted += chi_square(sample(table, 100000, seed), table).p_value >= 0.001 ? 1 : 0;
    EXPECT_GE(accepted, 19);
}

TEST(ChiSquare, survival_closed_forms) {
    for (double s : {0.0, 0.5, 3.0, 10.0}) {
        EXPECT_NEAR(chi_square_survival(s, 2), std::exp(-s / 2), 1e-14);
        EXPECT_NEAR(chi_square_survival(s, 4), std::exp(-s / 2) * (1 + s / 2), 1e-14);
    }
    EXPECT_NEAR(chi_square_survival(3.841458820694124, 1), 0.05, 1e-12);
}

TEST(FringeHistogram, erased_rows_show_fringes) {
    const auto table = eraser_table(64);
    const auto run = sample(table, 1000000, 77);
    const auto b = fringe_histogram(run, Detector::b);
    EXPECT_EQ(b.total, run.row_total(Detector::b));
    EXPECT_GE(*b.visibility, 0.95);
    EXPECT_LE(*fringe_histogram(run, Detector::a).visibility, 0.2);
}

TEST(FringeHistogram, single_trial_and_empty_row) {
    const auto table = eraser_table(8);
    const auto run = sample(table, 1, 4);
    std::uint64_t total = 0;
    for (Detector r : kDetectors)
        if (run.row_total(r) > 0) total += fringe_histogram(run, r).total;
    EXPECT_EQ(total, 1u);
    const auto removed = sample(eraser_table(8, 2.0, Layout::removed), 100, 4);
    EXPECT_THROW(fringe_histogram(removed, Detector::b), ArgumentError);
}

TEST(Consistency, deviation_shrinks_with_trials) {
    const auto table = eraser_table(16);
    std::vector<double> dev;
    for (std::uint64_t trials : {100u, 1000u, 10000u, 100000u, 1000000u})
        dev.push_back(max_abs_deviation(sample(table, trials, 8), table));
    int shrinking = 0;
    for (std::size_t k = 1; k < dev.size(); ++k) shrinking += dev[k] <= dev[k - 1] ? 1 : 0;
    EXPECT_GE(shrinking, 3);
    EXPECT_LT(dev.back(), 0.002);
}
