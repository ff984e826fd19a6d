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

#include <cmath>
#include <limits>
#include <random>

#include "gtest/gtest.h"

using namespace eraser;
using namespace eraser::expdsl;
using Kind = ParseError::Kind;

namespace {

ParseError expect_error(std::string_view text) {
    try {
        parse(text);
    } catch (const ParseError& e) {
        return e;
    }
    ADD_FAILURE() << "accepted: " << text;
    return ParseError(Kind::syntax, 0, 0, "", "");
}

ExperimentConfig random_config(std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> bins(1, kMaxBins);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> coin(0, 1), layout(0, 2), scale(-8, 8);
    ExperimentConfig c;
    c.bins = bins(rng);
    c.cycles = unit(rng) * std::pow(10.0, scale(rng));
    c.phi0 = (unit(rng) - 0.5) * std::pow(10.0, scale(rng));
    c.merge_paths = coin(rng) == 1;
    c.layout = static_cast<experiment::Layout>(layout(rng));
    if (coin(rng)) c.seed = rng();
    if (coin(rng)) c.trials = 1 + rng() % 10000000;
    return c;
}

}  // namespace

TEST(Parse, empty_text_gives_defaults) {
    const auto c = parse("");
    EXPECT_EQ(c, ExperimentConfig{});
    EXPECT_EQ(c.bins, 64u);
    EXPECT_TRUE(c.merge_paths);
    EXPECT_FALSE(c.seed.has_value());
}

TEST(Parse, all_keys) {
    const auto c = parse("layout mirrors\nbins 16\ncycles 1.5\nphi0 -0.25\nmerge_paths false\nseed 7\ntrials 500\n");
    EXPECT_EQ(c.layout, experiment::Layout::mirrors);
    EXPECT_EQ(c.bins, 16u);
    EXPECT_EQ(c.cycles, 1.5);
    EXPECT_EQ(c.phi0, -0.25);
    EXPECT_FALSE(c.merge_paths);
    EXPECT_EQ(c.seed, 7u);
    EXPECT_EQ(c.trials, 500u);
}

TEST(Parse, comments_blank_lines_and_whitespace) {
    const auto c = parse("# header\n\n   bins\t8   \r\n\t# indented comment\r\ncycles  2e0\n");
    EXPECT_EQ(c.bins, 8u);
    EXPECT_EQ(c.cycles, 2.0);
}

TEST(Parse, number_forms) {
    for (const auto& [text, value] : std::vector<std::pair<std::string, double>>{
             {"1", 1.0}, {"+1.", 1.0}, {".5", 0.5}, {"-2.5e-1", -0.25}, {"3E2", 300.0}}) {
        EXPECT_EQ(parse("phi0 " + text).phi0, value) << text;
    }
}

TEST(Errors, zero_bins_is_semantic) {
    const auto e = expect_error("bins 0");
    EXPECT_EQ(e.kind(), Kind::semantic);
    EXPECT_EQ(e.key(), "bins");
    EXPECT_EQ(e.line(), 1u);
    EXPECT_EQ(e.column(), 6u);
    EXPECT_NE(std::string(e.what()).find("bins"), std::string::npos);
    EXPECT_EQ(std::string(e.what()).rfind("line 1, column 6: ", 0), 0u);
}

TEST(Errors, semantic_ranges) {
    EXPECT_EQ(expect_error("bins 1025").kind(), Kind::semantic);
    EXPECT_EQ(expect_error("cycles -1").kind(), Kind::semantic);
    EXPECT_EQ(expect_error("trials 0").kind(), Kind::semantic);
    EXPECT_EQ(expect_error("seed 18446744073709551616").kind(), Kind::semantic);
    EXPECT_EQ(parse("seed 18446744073709551615").seed, std::numeric_limits<std::uint64_t>::max());
}

TEST(Errors, non_finite_numbers) {
    EXPECT_EQ(expect_error("cycles nan").kind(), Kind::syntax);
    EXPECT_EQ(expect_error("cycles inf").kind(), Kind::syntax);
    const auto e = expect_error("phi0 1e999");
    EXPECT_EQ(e.kind(), Kind::semantic);
    EXPECT_EQ(e.key(), "phi0");
}

TEST(Errors, unknown_and_duplicate_keys) {
    const auto unknown = expect_error("bins 4\n  colour red\n");
    EXPECT_EQ(unknown.kind(), Kind::syntax);
    EXPECT_EQ(unknown.line(), 2u);
    EXPECT_EQ(unknown.column(), 3u);
    EXPECT_EQ(expect_error("Bins 4").kind(), Kind::syntax);
    const auto dup = expect_error("bins 4\n# x\nbins 5\n");
    EXPECT_EQ(dup.kind(), Kind::duplicate);
    EXPECT_EQ(dup.line(), 3u);
    EXPECT_EQ(dup.key(), "bins");
}

TEST(Errors, syntax_positions) {
    const auto missing = expect_error("bins");
    EXPECT_EQ(missing.kind(), Kind::syntax);
    EXPECT_EQ(missing.column(), 5u);
    const auto extra = expect_error("bins 4 5");
    EXPECT_EQ(extra.column(), 8u);
    const auto bad_int = expect_error("layout eraser\nbins -4");
    EXPECT_EQ(bad_int.line(), 2u);
    EXPECT_EQ(bad_int.column(), 6u);
    EXPECT_EQ(expect_error("bins 4.0").kind(), Kind::syntax);
    EXPECT_EQ(expect_error("merge_paths yes").kind(), Kind::syntax);
    EXPECT_EQ(expect_error("layout sideways").kind(), Kind::syntax);
    EXPECT_EQ(expect_error("cycles 1..2").kind(), Kind::syntax);
    EXPECT_EQ(expect_error(std::string("bins 4\x01", 7)).kind(), Kind::syntax);
}

TEST(Emit, canonical_form) {
    EXPECT_EQ(emit(ExperimentConfig{}), "layout eraser\nbins 64\ncycles 2\nphi0 0\nmerge_paths true\n");
    ExperimentConfig c;
    c.seed = 3;
    c.trials = 10;
    c.phi0 = 0.1;
    EXPECT_EQ(emit(c), "layout eraser\nbins 64\ncycles 2\nphi0 0.1\nmerge_paths true\nseed 3\ntrials 10\n");
}

TEST(Emit, round_trip_property) {
    std::mt19937_64 rng(404);
    for (int k = 0; k < 500; ++k) {
        const auto c = random_config(rng);
        const auto text = emit(c);
        const auto back = parse(text);
        EXPECT_EQ(back, c) << text;
        EXPECT_EQ(emit(back), text);
    }
}

TEST(Emit, accepts_reformatted_input) {
    const auto c = parse("# comment\r\n  merge_paths   false\t\r\n\ncycles +0.50\nbins 0010\n");
    EXPECT_EQ(parse(emit(c)), c);
    EXPECT_EQ(emit(c), "layout eraser\nbins 10\ncycles 0.5\nphi0 0\nmerge_paths false\n");
}

TEST(Fuzz, only_parse_errors) {
    std::mt19937_64 rng(505);
    const std::string seedtext = emit(random_config(rng));
    std::uniform_int_distribution<int> byte(0, 255), op(0, 3);
    for (int k = 0; k < 10000; ++k) {
        std::string text;
        if (k % 2 == 0) {
            const std::size_t len = rng() % 64;
            for (std::size_t i = 0; i < len; ++i) text.push_back(static_cast<char>(byte(rng)));
        } else {
            text = seedtext;
            for (int edits = 1 + static_cast<int>(rng() % 4); edits > 0; --edits) {
                const std::size_t pos = text.empty() ? 0 : rng() % text.size();
                switch (op(rng)) {
                    case 0: if (!text.empty()) text.erase(pos, 1); break;
                    case 1: text.insert(pos, 1, static_cast<char>(byte(rng))); break;
                    case 2: if (!text.empty()) text[pos] = static_cast<char>(byte(rng)); break;
                    default: text.insert(pos, text.substr(0, pos)); break;
                }
            }
        }
        try {
            parse(text);
        } catch (const ParseError&) {
        } catch (const std::exception& e) {
            FAIL() << "unexpected exception " << e.what();
        }
    }
}

TEST(LoadFile, missing_path) {
    EXPECT_THROW(load_file("/nonexistent/dir/none.exp"), std::runtime_error);
}
