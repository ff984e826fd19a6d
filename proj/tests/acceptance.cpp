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

// Acceptance gate. One line per criterion, nonzero exit if any fails.
// Tolerances are fixed here and are not configurable.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "eraser/errors.hpp"
#include "eraser/expdsl.hpp"
#include "eraser/experiment.hpp"
#include "eraser/montecarlo.hpp"
#include "eraser/qcore.hpp"

using namespace eraser;
using namespace eraser::experiment;

namespace {

namespace fs = std::filesystem;

constexpr std::size_t kBins = 64;

int failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail) {
    std::printf("[%s] %2d %-28s %s\n", ok ? "PASS" : "FAIL", id, name, detail.c_str());
    if (!ok) ++failures;
}

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, format, a, b, c);
    return buf;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

const DetectorModel& detector() {
    static const DetectorModel d = DetectorModel::uniform(kBins, {2.0, 0.0}, true);
    return d;
}

const ExperimentState& state() {
    static const ExperimentState s = prepare(detector());
    return s;
}

void branch_probabilities() {
    double dev = 0.0;
    for (Detector r : kDetectors) dev = std::max(dev, std::abs(branch_probability(state(), r) - 0.25));
    report(1, "branch_probabilities", dev <= 1e-12, fmt("max |P(r) - 1/4| = %.3g (tol 1e-12)", dev));
}

void composed_state() {
    const double dev = qcore::phase_aligned_deviation(state().full, transcribed_state(detector(), Layout::eraser));
    report(2, "composed_equals_closed_form", dev <= 1e-12, fmt("max amplitude deviation = %.3g (tol 1e-12)", dev));
}

void marginal_decoherence() {
    const auto rho = reduced_pointer(state().full);
    const auto xi1 = detector().dressed(1).amplitudes();
    const auto xi2 = detector().dressed(2).amplitudes();
    const double cross = std::abs((xi1.adjoint() * rho.matrix() * xi2)(0, 0));
    const double ref = rho.max_abs_diff(incoherent_pointer_reference(detector()));
    const auto marginal = coincidence_table(state()).marginal();
    double flat = 0.0;
    for (double p : marginal) flat = std::max(flat, std::abs(p - 1.0 / kBins));
    const double dev = std::max({cross, ref, flat});
    report(3, "marginal_decoherence", dev <= 1e-12,
           fmt("|<Xi1|rho|Xi2>| = %.3g, |rho - mix| = %.3g, flatness = %.3g (tol 1e-12)", cross, ref, flat));
}

void erasure_fringes() {
    const auto table = coincidence_table(state());
    const double vb = *table.visibility[level(Detector::b)], vc = *table.visibility[level(Detector::c)];
    const double va = *table.visibility[level(Detector::a)], vd = *table.visibility[level(Detector::d)];
    double lo = 1.0, hi = 0.0;
    for (std::size_t n = 0; n < kBins; ++n) {
        const double s = table.p(Detector::b, n) + table.p(Detector::c, n);
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
    const bool ok = vb >= 1.0 - 1e-9 && vc >= 1.0 - 1e-9 && va <= 1e-12 && vd <= 1e-12 && hi - lo <= 1e-12;
    report(4, "erasure_fringes", ok,
           fmt("V(b) = %.12f, V(c) = %.12f, ", vb, vc) + fmt("V(a) = %.3g, V(d) = %.3g, ", va, vd) +
               fmt("spread P(b)+P(c) = %.3g", hi - lo));
}

void no_signalling() {
    const double dev = no_signalling_check(state(), random_local_unitaries(100, 0x5eed));
    report(5, "no_signalling", dev <= 1e-12, fmt("100 local unitaries, max deviation = %.3g (tol 1e-12)", dev));
}

void schmidt_second_basis() {
    const auto r = verify_second_simple_basis(state());
    const bool ok = r.coefficients.size() == 2 && r.coefficient_error <= 1e-10 && r.min_overlap() >= 1.0 - 1e-9;
    report(6, "schmidt_second_basis", ok,
           fmt("coefficient error = %.3g (tol 1e-10), min overlap = %.12f", r.coefficient_error, r.min_overlap()));
}

void mixture_identity() {
    const auto rho = reduced_pointer(state().full);
    const std::array<double, 2> halves{0.5, 0.5};
    const std::array<DensityOperator, 2> parts{reduced_pointer(which_coherence_part(state()).state),
                                               reduced_pointer(which_path_part(state()).state)};
    const double dev = qcore::mixture(halves, parts).max_abs_diff(rho);
    report(7, "mixture_identity", dev <= 1e-12, fmt("max |mix - rho_II| = %.3g (tol 1e-12)", dev));
}

void monte_carlo() {
    const auto table = coincidence_table(state());
    int accepted = 0;
    double worst = 0.0, min_p = 1.0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const auto run = mc::sample(table, 100000, seed);
        const auto chi = mc::chi_square(run, table);
        min_p = std::min(min_p, chi.p_value);
        if (chi.p_value >= 0.001) ++accepted;
        for (Detector r : kDetectors)
            worst = std::max(worst, std::abs(static_cast<double>(run.row_total(r)) / 1e5 - 0.25));
    }
    report(8, "monte_carlo_consistency", accepted >= 99 && worst <= 0.0068,
           fmt("%.0f/100 seeds with p >= 0.001 (min p %.3g), max |freq - 1/4| = %.4f (tol 0.0068)", accepted, min_p,
               worst));
}

void parser() {
    std::size_t files = 0, round_trips = 0;
    for (const auto& entry : fs::directory_iterator(ERASER_CORPUS_DIR)) {
        if (entry.path().extension() != ".exp") continue;
        ++files;
        try {
            const auto config = expdsl::load_file(entry.path().string());
            const auto text = expdsl::emit(config);
            if (expdsl::parse(text) == config && expdsl::emit(expdsl::parse(text)) == text) ++round_trips;
        } catch (const std::exception& e) {
            std::printf("       %s: %s\n", entry.path().filename().c_str(), e.what());
        }
    }

    std::mt19937_64 rng(0xf022);
    std::uniform_int_distribution<int> byte(0, 255);
    const std::string valid = "layout mirrors\nbins 16\ncycles 1.5\nphi0 -0.5\nmerge_paths false\nseed 3\n";
    std::size_t structured = 0, crashes = 0;
    constexpr std::size_t kCases = 10000;
    for (std::size_t k = 0; k < kCases; ++k) {
        std::string text;
        if (k % 2 == 0) {
            for (std::size_t len = rng() % 80; len > 0; --len) text.push_back(static_cast<char>(byte(rng)));
        } else {
            text = valid;
            for (int edits = 1 + static_cast<int>(rng() % 3); edits > 0; --edits)
                text[rng() % text.size()] = static_cast<char>(byte(rng));
        }
        try {
            expdsl::parse(text);
            ++structured;
        } catch (const expdsl::ParseError&) {
            ++structured;
        } catch (...) {
            ++crashes;
        }
    }
    const bool ok = files >= 20 && round_trips == files && structured == kCases && crashes == 0;
    report(9, "parser_round_trip_and_fuzz", ok,
           fmt("%.0f/%.0f corpus files round-trip, ", static_cast<double>(round_trips), static_cast<double>(files)) +
               fmt("%.0f fuzz cases, %.0f unstructured failures", kCases, static_cast<double>(crashes)));
}

void determinism() {
    const fs::path dir = fs::temp_directory_path() / "eraser_acceptance";
    fs::create_directories(dir);
    const fs::path config = dir / "run.exp";
    std::ofstream(config) << "bins 64\nseed 2024\n";
    bool ran = true;
    for (const char* name : {"first", "second"}) {
        const std::string cmd = std::string(ERASER_SIM_BIN) + " sample --config " + config.string() +
                                " --trials 100000 --out " + (dir / (std::string(name) + ".csv")).string() + " > " +
                                (dir / (std::string(name) + ".json")).string();
        ran = ran && std::system(cmd.c_str()) == 0;
    }
    const std::string csv = slurp(dir / "first.csv");
    const bool same = ran && !csv.empty() && csv == slurp(dir / "second.csv") &&
                      slurp(dir / "first.json") == slurp(dir / "second.json");
    report(10, "sample_determinism", same,
           ran ? fmt("two invocations, %.0f CSV bytes, byte-identical: ", static_cast<double>(csv.size())) +
                     (same ? "yes" : "no")
               : std::string("eraser_sim invocation failed"));
    fs::remove_all(dir);
}

}  // namespace

int main() {
    const std::vector<void (*)()> criteria{branch_probabilities, composed_state, marginal_decoherence,
                                           erasure_fringes,      no_signalling,  schmidt_second_basis,
                                           mixture_identity,     monte_carlo,    parser,
                                           determinism};
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        try {
            criteria[k]();
        } catch (const std::exception& e) {
            report(static_cast<int>(k + 1), "exception", false, e.what());
        }
    }
    std::printf("%s: %d of %zu criteria failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
