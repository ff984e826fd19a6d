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

#ifndef ERASER_EXPDSL_HPP
#define ERASER_EXPDSL_HPP

// Line-oriented experiment description (.exp files).
//
//   file  := line*
//   line  := key SP value | comment | blank
//   key   := "layout" ("eraser" | "mirrors" | "removed")
//          | "bins" INT | "cycles" NUMBER | "phi0" NUMBER
//          | "merge_paths" ("true" | "false") | "seed" INT | "trials" INT
//
// '#' starts a comment line. Keys are case-sensitive and may appear at most
// once. Omitted keys take the defaults of ExperimentConfig.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "eraser/experiment.hpp"

namespace eraser::expdsl {

inline constexpr std::size_t kMaxBins = 1024;

struct ExperimentConfig {
    std::size_t bins = 64;
    double cycles = 2.0;
    double phi0 = 0.0;
    bool merge_paths = true;
    experiment::Layout layout = experiment::Layout::eraser;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> trials;
    std::array<std::string, 4> detector_labels{"a", "b", "c", "d"};

    experiment::DetectorModel detector_model() const;
    experiment::FringeModel fringe() const { return {cycles, phi0}; }

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

class ParseError : public std::runtime_error {
  public:
    enum class Kind { syntax, semantic, duplicate };

    ParseError(Kind kind, std::size_t line, std::size_t column, std::string key, std::string message);

    Kind kind() const { return kind_; }
    /// 1-based, pointing at the first offending token.
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }
    /// Empty for errors that are not tied to a known key.
    const std::string& key() const { return key_; }
    const std::string& message() const { return message_; }

  private:
    Kind kind_;
    std::size_t line_;
    std::size_t column_;
    std::string key_;
    std::string message_;
};

/// Throws ParseError. Never reads past `text`.
ExperimentConfig parse(std::string_view text);

/// Canonical text: every key except unset seed/trials, in grammar order.
std::string emit(const ExperimentConfig& config);

/// Reads and parses a file; std::runtime_error if it cannot be read.
ExperimentConfig load_file(const std::string& path);

}  // namespace eraser::expdsl

#endif  // ERASER_EXPDSL_HPP
