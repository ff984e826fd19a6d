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

#ifndef ERASER_MONTECARLO_HPP
#define ERASER_MONTECARLO_HPP

// Photon-by-photon sampling of coincidence events (r, n).
//
// Generator: std::mt19937_64, one engine per partition. The seed of
// partition k is the (k+1)-th output of a splitmix64 stream started at the
// run seed. Draws are mapped to [0, 1) with the top 53 bits and located in
// the cumulative distribution over the flattened table (r = a, b, c, d
// outer, bin inner). Counts depend on (table, trials, seed, partitions)
// only, never on the thread count.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "eraser/experiment.hpp"
#include "eraser/kernels.hpp"

namespace eraser::mc {

using experiment::CoincidenceTable;
using experiment::Detector;

struct SampleRun {
    std::uint64_t seed = 0;
    std::uint64_t trials = 0;
    std::size_t bins = 0;
    std::size_t partitions = 1;
    std::vector<std::uint64_t> counts;  // same layout as CoincidenceTable::joint
    double elapsed_seconds = 0.0;        // informational, not part of any output

    std::uint64_t count(Detector r, std::size_t bin) const { return counts[experiment::level(r) * bins + bin]; }
    std::uint64_t row_total(Detector r) const;
    std::uint64_t total() const;
};

std::uint64_t splitmix64_next(std::uint64_t& state);
std::vector<std::uint64_t> partition_seeds(std::uint64_t seed, std::size_t partitions);

/// ArgumentError for trials == 0 or partitions == 0.
SampleRun sample(const CoincidenceTable& table, std::uint64_t trials, std::uint64_t seed, std::size_t partitions = 1,
                 kernels::Exec exec = kernels::default_exec());

struct ChiSquare {
    double statistic = 0.0;
    std::size_t dof = 0;
    double p_value = 1.0;
    std::size_t cells = 0;   // after pooling
    std::size_t pooled = 0;  // cells folded into the pool
};

/// Pearson goodness of fit. Cells with expected count below 5 are pooled
/// into one cell (folded into the smallest regular cell if the pool itself
/// stays below 5). ArgumentError when fewer than two cells remain.
ChiSquare chi_square(const SampleRun& run, const CoincidenceTable& table);

/// Q(dof/2, statistic/2), the upper tail of the chi-square distribution.
double chi_square_survival(double statistic, std::size_t dof);

struct FringeHistogram {
    Detector detector = Detector::a;
    std::vector<std::uint64_t> counts;
    std::uint64_t total = 0;
    std::optional<double> visibility;  // (max-min)/(max+min) of raw counts; biased upward at low counts
};

/// ArgumentError for an empty row.
FringeHistogram fringe_histogram(const SampleRun& run, Detector r);

/// max over cells of |count/trials - P|.
double max_abs_deviation(const SampleRun& run, const CoincidenceTable& table);

}  // namespace eraser::mc

#endif  // ERASER_MONTECARLO_HPP
