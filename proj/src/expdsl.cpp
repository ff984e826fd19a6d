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

#include "eraser/expdsl.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace eraser::expdsl {

namespace {

using Kind = ParseError::Kind;

constexpr std::array<std::string_view, 7> kKeys{"layout", "bins", "cycles", "phi0", "merge_paths", "seed", "trials"};

bool is_blank(char ch) { return ch == ' ' || ch == '\t'; }
bool is_digit(char ch) { return ch >= '0' && ch <= '9'; }
bool is_printable(char ch) { return ch >= 0x21 && ch <= 0x7e; }

struct Token {
    std::string_view text;
    std::size_t column = 0;  // 1-based
};

std::string quoted(std::string_view s) { return "'" + std::string(s) + "'"; }

/// INT := digit+
std::optional<std::uint64_t> parse_uint(std::string_view s) {
    if (s.empty()) return std::nullopt;
    for (char ch : s) {
        if (!is_digit(ch)) return std::nullopt;
    }
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return value;
}

/// NUMBER := [+-]? (digit+ ['.' digit*] | '.' digit+) [(e|E) [+-]? digit+]
bool is_number_syntax(std::string_view s) {
    std::size_t i = 0;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
    std::size_t int_digits = 0, frac_digits = 0;
    while (i < s.size() && is_digit(s[i])) ++i, ++int_digits;
    if (i < s.size() && s[i] == '.') {
        ++i;
        while (i < s.size() && is_digit(s[i])) ++i, ++frac_digits;
    }
    if (int_digits + frac_digits == 0) return false;
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        ++i;
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
        std::size_t exp_digits = 0;
        while (i < s.size() && is_digit(s[i])) ++i, ++exp_digits;
        if (exp_digits == 0) return false;
    }
    return i == s.size();
}

class LineParser {
  public:
    ExperimentConfig run(std::string_view text) {
        std::size_t line_no = 0;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            const std::size_t end = text.find('\n', pos);
            std::string_view line = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            parse_line(line, line_no);
            if (end == std::string_view::npos) break;
            pos = end + 1;
        }
        return config_;
    }

  private:
    void parse_line(std::string_view line, std::size_t line_no) {
        std::size_t i = 0;
        while (i < line.size() && is_blank(line[i])) ++i;
        if (i == line.size() || line[i] == '#') return;

        const Token key = next_token(line, i, line_no);
        if (!known_key(key.text)) {
            throw ParseError(Kind::syntax, line_no, key.column, "", "unknown key " + quoted(key.text));
        }
        const std::string key_name(key.text);
        if (seen_[key_index(key.text)]) {
            throw ParseError(Kind::duplicate, line_no, key.column, key_name, "duplicate key " + quoted(key.text));
        }
        if (i == line.size()) {
            throw ParseError(Kind::syntax, line_no, i + 1, key_name, "missing value for " + quoted(key.text));
        }
        while (i < line.size() && is_blank(line[i])) ++i;
        if (i == line.size()) {
            throw ParseError(Kind::syntax, line_no, i + 1, key_name, "missing value for " + quoted(key.text));
        }
        const Token value = next_token(line, i, line_no);
        while (i < line.size() && is_blank(line[i])) ++i;
        if (i < line.size()) {
            throw ParseError(Kind::syntax, line_no, i + 1, key_name, "unexpected text after value of " + quoted(key.text));
        }
        seen_[key_index(key.text)] = true;
        assign(key_name, value, line_no);
    }

    /// Reads one run of printable ASCII starting at `i`; stops at a blank.
    static Token next_token(std::string_view line, std::size_t& i, std::size_t line_no) {
        const std::size_t start = i;
        while (i < line.size() && !is_blank(line[i])) {
            if (!is_printable(line[i])) {
                throw ParseError(Kind::syntax, line_no, i + 1, "", "unexpected byte " + hex(line[i]));
            }
            ++i;
        }
        return {line.substr(start, i - start), start + 1};
    }

    static std::string hex(char ch) {
        static constexpr char digits[] = "0123456789abcdef";
        const auto byte = static_cast<unsigned char>(ch);
        return std::string("0x") + digits[byte >> 4] + digits[byte & 0xf];
    }

    static bool known_key(std::string_view k) {
        for (auto candidate : kKeys) {
            if (candidate == k) return true;
        }
        return false;
    }

    static std::size_t key_index(std::string_view k) {
        for (std::size_t i = 0; i < kKeys.size(); ++i) {
            if (kKeys[i] == k) return i;
        }
        return kKeys.size();
    }

    [[noreturn]] static void semantic(const std::string& key, const Token& value, std::size_t line_no,
                                      const std::string& message) {
        throw ParseError(Kind::semantic, line_no, value.column, key, key + ": " + message);
    }

    std::uint64_t uint_value(const std::string& key, const Token& value, std::size_t line_no) {
        if (value.text.empty() || !std::all_of(value.text.begin(), value.text.end(), is_digit)) {
            throw ParseError(Kind::syntax, line_no, value.column, key,
                             key + ": expected a non-negative integer, got " + quoted(value.text));
        }
        const auto parsed = parse_uint(value.text);
        if (!parsed) semantic(key, value, line_no, "integer " + quoted(value.text) + " is out of range");
        return *parsed;
    }

    double number_value(const std::string& key, const Token& value, std::size_t line_no) {
        if (!is_number_syntax(value.text)) {
            throw ParseError(Kind::syntax, line_no, value.column, key,
                             key + ": expected a number, got " + quoted(value.text));
        }
        std::string_view digits = value.text;
        if (digits.front() == '+') digits.remove_prefix(1);
        double parsed = 0.0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), parsed);
        if (ec != std::errc() || ptr != digits.data() + digits.size() || !std::isfinite(parsed)) {
            semantic(key, value, line_no, "value " + quoted(value.text) + " is not a finite number");
        }
        return parsed;
    }

    void assign(const std::string& key, const Token& value, std::size_t line_no) {
        if (key == "layout") {
            const auto layout = experiment::layout_from_name(value.text);
            if (!layout) {
                throw ParseError(Kind::syntax, line_no, value.column, key,
                                 "layout: expected eraser, mirrors or removed, got " + quoted(value.text));
            }
            config_.layout = *layout;
        } else if (key == "bins") {
            const auto bins = uint_value(key, value, line_no);
            if (bins == 0) semantic(key, value, line_no, "must be at least 1");
            if (bins > kMaxBins) semantic(key, value, line_no, "must be at most " + std::to_string(kMaxBins));
            config_.bins = static_cast<std::size_t>(bins);
        } else if (key == "cycles") {
            const double cycles = number_value(key, value, line_no);
            if (cycles < 0.0) semantic(key, value, line_no, "must be >= 0");
            config_.cycles = cycles;
        } else if (key == "phi0") {
            config_.phi0 = number_value(key, value, line_no);
        } else if (key == "merge_paths") {
            if (value.text == "true") {
                config_.merge_paths = true;
            } else if (value.text == "false") {
                config_.merge_paths = false;
            } else {
                throw ParseError(Kind::syntax, line_no, value.column, key,
                                 "merge_paths: expected true or false, got " + quoted(value.text));
            }
        } else if (key == "seed") {
            config_.seed = uint_value(key, value, line_no);
        } else if (key == "trials") {
            const auto trials = uint_value(key, value, line_no);
            if (trials == 0) semantic(key, value, line_no, "must be at least 1");
            config_.trials = trials;
        }
    }

    ExperimentConfig config_;
    std::array<bool, kKeys.size()> seen_{};
};

std::string format_number(double value) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), ptr);
}

}  // namespace

ParseError::ParseError(Kind kind, std::size_t line, std::size_t column, std::string key, std::string message)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      kind_(kind),
      line_(line),
      column_(column),
      key_(std::move(key)),
      message_(std::move(message)) {}

experiment::DetectorModel ExperimentConfig::detector_model() const {
    return experiment::DetectorModel::uniform(bins, fringe(), merge_paths);
}

ExperimentConfig parse(std::string_view text) { return LineParser().run(text); }

std::string emit(const ExperimentConfig& config) {
    std::string out;
    out += "layout " + std::string(experiment::layout_name(config.layout)) + "\n";
    out += "bins " + std::to_string(config.bins) + "\n";
    out += "cycles " + format_number(config.cycles) + "\n";
    out += "phi0 " + format_number(config.phi0) + "\n";
    out += std::string("merge_paths ") + (config.merge_paths ? "true" : "false") + "\n";
    if (config.seed) out += "seed " + std::to_string(*config.seed) + "\n";
    if (config.trials) out += "trials " + std::to_string(*config.trials) + "\n";
    return out;
}

ExperimentConfig load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

}  // namespace eraser::expdsl
