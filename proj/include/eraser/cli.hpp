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

#ifndef ERASER_CLI_HPP
#define ERASER_CLI_HPP

// Command layer behind the eraser_sim executable.
//
// analytic CSV columns: detector,bin,probability,conditional_probability,visibility_of_row
// sample CSV columns:   detector,bin,count,expected
// Rows of detectors that never fire are omitted. Reals use 12 significant
// digits.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "eraser/experiment.hpp"
#include "eraser/expdsl.hpp"
#include "eraser/montecarlo.hpp"

namespace eraser::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;

inline constexpr std::uint64_t kDefaultTrials = 100000;
inline constexpr std::uint64_t kNoSignallingSeed = 0x5eed;
inline constexpr std::size_t kNoSignallingOps = 100;

struct VerifyCheck {
    enum class Status { pass, fail, not_applicable };

    std::string name;
    Status status = Status::pass;
    double deviation = 0.0;  // NaN when not applicable
    double tolerance = 0.0;
    std::string detail;
};

struct VerifyReport {
    expdsl::ExperimentConfig config;
    double dressed_overlap = 0.0;  // |<Xi_1|Xi_2>|
    std::vector<VerifyCheck> checks;

    /// AND over applicable checks.
    bool passed() const;
    const VerifyCheck& check(const std::string& name) const;
};

VerifyReport run_verify(const expdsl::ExperimentConfig& config);
nlohmann::ordered_json to_json(const VerifyReport& report);

nlohmann::ordered_json config_json(const expdsl::ExperimentConfig& config);

std::string analytic_csv(const expdsl::ExperimentConfig& config, const experiment::CoincidenceTable& table);

struct SampleOutputs {
    mc::SampleRun run;
    std::string csv;
    nlohmann::ordered_json summary;
};
SampleOutputs run_sample(const expdsl::ExperimentConfig& config, std::uint64_t trials, std::uint64_t seed);

/// Full command line: `eraser_sim analytic|sample|verify --config PATH ...`.
/// Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace eraser::cli

#endif  // ERASER_CLI_HPP
