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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/special_functions/gamma.hpp>

#include "eraser/errors.hpp"

namespace eraser::mc {

namespace {

constexpr double kMinExpected = 5.0;

void require_matching(const SampleRun& run, const CoincidenceTable& table) {
    if (run.bins != table.bins || run.counts.size() != table.joint.size()) {
        throw StructuralError("sample run and coincidence table have different shapes");
    }
}

}  // namespace

std::uint64_t SampleRun::row_total(Detector r) const {
    std::uint64_t total = 0;
    for (std::size_t n = 0; n < bins; ++n) total += count(r, n);
    return total;
}

std::uint64_t SampleRun::total() const { return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}); }

std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::vector<std::uint64_t> partition_seeds(std::uint64_t seed, std::size_t partitions) {
    std::vector<std::uint64_t> seeds(partitions);
    std::uint64_t state = seed;
    for (auto& s : seeds) s = splitmix64_next(state);
    return seeds;
}

SampleRun sample(const CoincidenceTable& table, std::uint64_t trials, std::uint64_t seed, std::size_t partitions,
                 kernels::Exec exec) {
    if (trials == 0) throw ArgumentError("trials must be at least 1");
    if (partitions == 0) throw ArgumentError("partitions must be at least 1");
    const auto start = std::chrono::steady_clock::now();

    std::vector<double> cdf(table.joint.size());
    std::partial_sum(table.joint.begin(), table.joint.end(), cdf.begin());

    std::vector<std::uint64_t> per_partition(partitions, trials / partitions);
    for (std::size_t p = 0; p < trials % partitions; ++p) ++per_partition[p];
    const auto seeds = partition_seeds(seed, partitions);

    SampleRun run;
    run.seed = seed;
    run.trials = trials;
    run.bins = table.bins;
    run.partitions = partitions;
    run.counts = kernels::sample_cells(cdf, per_partition, seeds, exec);
    run.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return run;
}

double chi_square_survival(double statistic, std::size_t dof) {
    if (dof == 0) throw ArgumentError("chi-square needs dof >= 1");
    if (std::isinf(statistic)) return 0.0;
    if (statistic <= 0.0) return 1.0;
    return boost::math::gamma_q(0.5 * static_cast<double>(dof), 0.5 * statistic);
}

ChiSquare chi_square(const SampleRun& run, const CoincidenceTable& table) {
    require_matching(run, table);
    const double trials = static_cast<double>(run.trials);

    struct Cell {
        double expected;
        double observed;
    };
    std::vector<Cell> regular;
    Cell pool{0.0, 0.0};
    std::size_t pooled = 0;
    bool impossible_event = false;
    for (std::size_t i = 0; i < table.joint.size(); ++i) {
        const double e = trials * table.joint[i];
        const double o = static_cast<double>(run.counts[i]);
        if (table.joint[i] == 0.0) {
            impossible_event = impossible_event || o > 0.0;
            continue;
        }
        if (e >= kMinExpected) {
            regular.push_back({e, o});
        } else {
            pool.expected += e;
            pool.observed += o;
            ++pooled;
        }
    }
    if (pooled > 0) {
        if (pool.expected >= kMinExpected || regular.empty()) {
            regular.push_back(pool);
        } else {
            auto smallest = std::min_element(regular.begin(), regular.end(),
                                             [](const Cell& x, const Cell& y) { return x.expected < y.expected; });
            smallest->expected += pool.expected;
            smallest->observed += pool.observed;
        }
    }
    if (regular.size() < 2) throw ArgumentError("chi-square: fewer than two cells, dof would be 0");

    ChiSquare out;
    out.cells = regular.size();
    out.pooled = pooled;
    out.dof = regular.size() - 1;
    for (const auto& c : regular) out.statistic += (c.observed - c.expected) * (c.observed - c.expected) / c.expected;
    if (impossible_event) out.statistic = std::numeric_limits<double>::infinity();
    out.p_value = chi_square_survival(out.statistic, out.dof);
    return out;
}

FringeHistogram fringe_histogram(const SampleRun& run, Detector r) {
    FringeHistogram h;
    h.detector = r;
    h.counts.resize(run.bins);
    for (std::size_t n = 0; n < run.bins; ++n) h.counts[n] = run.count(r, n);
    h.total = run.row_total(r);
    if (h.total == 0) {
        throw ArgumentError(std::string("no events in row ") + experiment::detector_name(r));
    }
    if (run.bins >= 2) {
        std::vector<double> row(h.counts.begin(), h.counts.end());
        h.visibility = experiment::visibility(row);
    }
    return h;
}

double max_abs_deviation(const SampleRun& run, const CoincidenceTable& table) {
    require_matching(run, table);
    double worst = 0.0;
    for (std::size_t i = 0; i < table.joint.size(); ++i) {
        worst = std::max(worst, std::abs(static_cast<double>(run.counts[i]) / static_cast<double>(run.trials) -
                                         table.joint[i]));
    }
    return worst;
}

}  // namespace eraser::mc
