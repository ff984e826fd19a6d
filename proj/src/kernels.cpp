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

#include "eraser/kernels.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#ifdef ERASER_HAVE_OPENMP
#include <omp.h>
#endif

namespace eraser::kernels {

Exec default_exec() { return openmp_enabled() ? Exec::parallel : Exec::serial; }

bool openmp_enabled() {
#ifdef ERASER_HAVE_OPENMP
    return true;
#else
    return false;
#endif
}

int max_threads() {
#ifdef ERASER_HAVE_OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

IndexSplit split_indices(std::span<const std::size_t> dims, std::span<const std::uint8_t> keep_mask) {
    if (dims.size() != keep_mask.size()) throw std::logic_error("split_indices: mask size mismatch");
    IndexSplit split;
    std::size_t total = 1;
    for (std::size_t s = 0; s < dims.size(); ++s) {
        total *= dims[s];
        (keep_mask[s] ? split.kept_dim : split.traced_dim) *= dims[s];
    }
    split.kept.resize(total);
    split.traced.resize(total);
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::size_t rest = flat;
        std::size_t kept = 0, kept_stride = 1, traced = 0, traced_stride = 1;
        for (std::size_t s = dims.size(); s-- > 0;) {
            const std::size_t level = rest % dims[s];
            rest /= dims[s];
            if (keep_mask[s]) {
                kept += level * kept_stride;
                kept_stride *= dims[s];
            } else {
                traced += level * traced_stride;
                traced_stride *= dims[s];
            }
        }
        split.kept[flat] = kept;
        split.traced[flat] = traced;
    }
    return split;
}

Eigen::MatrixXcd reduce_pure(const Eigen::VectorXcd& amplitudes, const IndexSplit& split, Exec exec) {
    const auto kd = static_cast<Eigen::Index>(split.kept_dim);
    const auto td = static_cast<Eigen::Index>(split.traced_dim);
    Eigen::MatrixXcd coeff = Eigen::MatrixXcd::Zero(kd, td);
    for (std::size_t i = 0; i < split.kept.size(); ++i) {
        coeff(static_cast<Eigen::Index>(split.kept[i]), static_cast<Eigen::Index>(split.traced[i])) =
            amplitudes(static_cast<Eigen::Index>(i));
    }
    Eigen::MatrixXcd rho(kd, kd);
    for_each_index(split.kept_dim, exec, [&](std::size_t ku) {
        const auto k = static_cast<Eigen::Index>(ku);
        for (Eigen::Index kp = 0; kp <= k; ++kp) {
            std::complex<double> acc{0.0, 0.0};
            for (Eigen::Index t = 0; t < td; ++t) acc += coeff(k, t) * std::conj(coeff(kp, t));
            rho(k, kp) = acc;
            rho(kp, k) = std::conj(acc);
        }
    });
    return rho;
}

Eigen::MatrixXcd trace_out(const Eigen::MatrixXcd& rho, const IndexSplit& split, Exec exec) {
    const auto kd = static_cast<Eigen::Index>(split.kept_dim);
    // flat index of each (kept, traced) pair
    std::vector<std::size_t> flat_of(split.kept_dim * split.traced_dim);
    for (std::size_t i = 0; i < split.kept.size(); ++i) {
        flat_of[split.kept[i] * split.traced_dim + split.traced[i]] = i;
    }
    Eigen::MatrixXcd out(kd, kd);
    for_each_index(split.kept_dim, exec, [&](std::size_t k) {
        for (std::size_t kp = 0; kp < split.kept_dim; ++kp) {
            std::complex<double> acc{0.0, 0.0};
            for (std::size_t t = 0; t < split.traced_dim; ++t) {
                acc += rho(static_cast<Eigen::Index>(flat_of[k * split.traced_dim + t]),
                           static_cast<Eigen::Index>(flat_of[kp * split.traced_dim + t]));
            }
            out(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(kp)) = acc;
        }
    });
    return out;
}

std::vector<double> bin_probabilities(const Eigen::VectorXcd& amplitudes, std::size_t rows,
                                      std::size_t bins, std::size_t tags, Exec exec) {
    if (static_cast<std::size_t>(amplitudes.size()) != rows * bins * tags) {
        throw std::logic_error("bin_probabilities: amplitude count mismatch");
    }
    std::vector<double> out(rows * bins, 0.0);
    for_each_index(rows * bins, exec, [&](std::size_t cell) {
        double acc = 0.0;
        for (std::size_t tag = 0; tag < tags; ++tag) {
            acc += std::norm(amplitudes(static_cast<Eigen::Index>(cell * tags + tag)));
        }
        out[cell] = acc;
    });
    return out;
}

namespace {

double uniform01(std::mt19937_64& engine) {
    return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

std::size_t last_positive_cell(std::span<const double> cdf) {
    for (std::size_t i = cdf.size(); i-- > 1;) {
        if (cdf[i] > cdf[i - 1]) return i;
    }
    return 0;
}

}  // namespace

std::vector<std::uint64_t> sample_cells(std::span<const double> cdf,
                                        std::span<const std::uint64_t> partition_trials,
                                        std::span<const std::uint64_t> partition_seeds, Exec exec) {
    if (partition_trials.size() != partition_seeds.size()) {
        throw std::logic_error("sample_cells: partition size mismatch");
    }
    if (cdf.empty()) throw std::logic_error("sample_cells: empty distribution");
    const std::size_t cells = cdf.size();
    const double total = cdf.back();
    const std::size_t fallback = last_positive_cell(cdf);
    std::vector<std::vector<std::uint64_t>> partial(partition_trials.size());

    for_each_index(partition_trials.size(), exec, [&](std::size_t p) {
        std::vector<std::uint64_t> counts(cells, 0);
        std::mt19937_64 engine(partition_seeds[p]);
        for (std::uint64_t t = 0; t < partition_trials[p]; ++t) {
            const double x = uniform01(engine) * total;
            auto idx = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), x) - cdf.begin());
            if (idx >= cells) idx = fallback;
            ++counts[idx];
        }
        partial[p] = std::move(counts);
    });

    std::vector<std::uint64_t> merged(cells, 0);
    for (const auto& counts : partial) {
        for (std::size_t i = 0; i < cells; ++i) merged[i] += counts[i];
    }
    return merged;
}

}  // namespace eraser::kernels
