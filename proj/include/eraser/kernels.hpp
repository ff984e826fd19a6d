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

#ifndef ERASER_KERNELS_HPP
#define ERASER_KERNELS_HPP

// Data-parallel inner loops. Every kernel has a serial reference path and an
// OpenMP path; both evaluate each output element with the same sequential
// accumulation order, so their results are bitwise identical.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace eraser::kernels {

enum class Exec { serial, parallel };

/// Parallel when built with OpenMP, serial otherwise.
Exec default_exec();
bool openmp_enabled();
int max_threads();

/// Index split of a flattened composite space into (kept, traced) parts.
struct IndexSplit {
    std::vector<std::size_t> kept;    // kept multi-index of flat i
    std::vector<std::size_t> traced;  // traced multi-index of flat i
    std::size_t kept_dim = 1;
    std::size_t traced_dim = 1;
};

/// `dims` in canonical order, nonzero `keep_mask[s]` selects subsystem s.
IndexSplit split_indices(std::span<const std::size_t> dims, std::span<const std::uint8_t> keep_mask);

/// rho(k, k') = sum_t psi(k, t) conj(psi(k', t)).
Eigen::MatrixXcd reduce_pure(const Eigen::VectorXcd& amplitudes, const IndexSplit& split, Exec exec);

/// rho_keep(k, k') = sum_t rho((k, t), (k', t)).
Eigen::MatrixXcd trace_out(const Eigen::MatrixXcd& rho, const IndexSplit& split, Exec exec);

/// P(r, n) = sum_tag |psi(r, n * tags + tag)|^2 for amplitudes laid out
/// as rows x (bins * tags). Row-major result.
std::vector<double> bin_probabilities(const Eigen::VectorXcd& amplitudes, std::size_t rows,
                                      std::size_t bins, std::size_t tags, Exec exec);

/// Multinomial draws by inverse CDF, one independent engine per partition.
/// `cdf` is the running sum of the cell probabilities. Returns per-cell
/// counts summed over partitions (merge order is fixed).
std::vector<std::uint64_t> sample_cells(std::span<const double> cdf,
                                        std::span<const std::uint64_t> partition_trials,
                                        std::span<const std::uint64_t> partition_seeds, Exec exec);

/// Runs fn(i) for i in [0, n). Iterations must be independent.
template <typename Fn>
void for_each_index(std::size_t n, Exec exec, Fn&& fn) {
    const auto count = static_cast<std::int64_t>(n);
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t i = 0; i < count; ++i) fn(static_cast<std::size_t>(i));
        return;
    }
    for (std::int64_t i = 0; i < count; ++i) fn(static_cast<std::size_t>(i));
}

}  // namespace eraser::kernels

#endif  // ERASER_KERNELS_HPP
