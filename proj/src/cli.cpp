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

#include "eraser/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "eraser/errors.hpp"
#include "eraser/tolerances.hpp"

namespace eraser::cli {

using experiment::Detector;
using experiment::Layout;
using Status = VerifyCheck::Status;

namespace {

const double kNaN = std::numeric_limits<double>::quiet_NaN();
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

std::string fmt12(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

std::string fmt3(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", value);
    return buf;
}

class ReportBuilder {
  public:
    explicit ReportBuilder(VerifyReport& report) : report_(report) {}

    void measure(std::string name, double deviation, double tolerance, std::string detail = {}) {
        const Status status = deviation <= tolerance ? Status::pass : Status::fail;
        report_.checks.push_back({std::move(name), status, deviation, tolerance, std::move(detail)});
    }

    void skip(std::string name, std::string reason) {
        report_.checks.push_back({std::move(name), Status::not_applicable, kNaN, 0.0, std::move(reason)});
    }

  private:
    VerifyReport& report_;
};

/// P(r, n) implied by the fringe model with a uniform envelope.
double analytic_cell(const expdsl::ExperimentConfig& config, Detector r, std::size_t n) {
    const double flat = 1.0 / static_cast<double>(config.bins);
    const double s = config.merge_paths ? std::sin(config.fringe().delta_phi(n, config.bins)) : 0.0;
    switch (config.layout) {
        case Layout::eraser:
            if (r == Detector::b) return 0.25 * flat * (1.0 - s);
            if (r == Detector::c) return 0.25 * flat * (1.0 + s);
            return 0.25 * flat;
        case Layout::mirrors:
            if (r == Detector::b) return 0.5 * flat * (1.0 - s);
            if (r == Detector::c) return 0.5 * flat * (1.0 + s);
            return 0.0;
        case Layout::removed:
            return (r == Detector::a || r == Detector::d) ? 0.5 * flat : 0.0;
    }
    return 0.0;
}

std::array<double, 4> expected_branches(Layout layout) {
    switch (layout) {
        case Layout::eraser: return {0.25, 0.25, 0.25, 0.25};
        case Layout::mirrors: return {0.0, 0.5, 0.5, 0.0};
        case Layout::removed: return {0.5, 0.0, 0.0, 0.5};
    }
    return {};
}

double coefficient_error(const std::vector<double>& have) {
    double worst = 0.0;
    for (std::size_t k = 0; k < std::max<std::size_t>(2, have.size()); ++k) {
        const double h = k < have.size() ? have[k] : 0.0;
        const double w = k < 2 ? kInvSqrt2 : 0.0;
        worst = std::max(worst, std::abs(h - w));
    }
    return worst;
}

std::string status_name(Status s) {
    switch (s) {
        case Status::pass: return "pass";
        case Status::fail: return "fail";
        case Status::not_applicable: return "not_applicable";
    }
    return "fail";
}

nlohmann::ordered_json number_or_null(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

}  // namespace

// ------------------------------------------------------------------ verify

bool VerifyReport::passed() const {
    for (const auto& c : checks) {
        if (c.status == Status::fail) return false;
    }
    return true;
}

const VerifyCheck& VerifyReport::check(const std::string& name) const {
    for (const auto& c : checks) {
        if (c.name == name) return c;
    }
    throw ArgumentError("no verification check named '" + name + "'");
}

VerifyReport run_verify(const expdsl::ExperimentConfig& config) {
    VerifyReport report;
    report.config = config;
    ReportBuilder out(report);

    const auto detector = config.detector_model();
    const auto state = experiment::prepare(detector, config.layout, expdsl::emit(config));
    const auto table = experiment::coincidence_table(state);
    const auto rho = experiment::reduced_pointer(state.full);
    report.dressed_overlap = std::abs(experiment::dressed_overlap(detector));

    const bool orthogonal = report.dressed_overlap <= tol::kExact;
    const bool has_coherence = config.layout != Layout::removed;
    const bool has_which_path = config.layout != Layout::mirrors;
    const std::string overlap_note = "|<Xi1|Xi2>| = " + fmt3(report.dressed_overlap);

    out.measure("normalization", std::abs(state.full.norm() - 1.0), tol::kExact);
    out.measure("composed_equals_transcription",
                qcore::phase_aligned_deviation(state.full, experiment::transcribed_state(detector, config.layout)),
                tol::kExact, "optics composition vs closed-form four-branch state");

    if (orthogonal || config.layout == Layout::removed) {
        const auto expected = expected_branches(config.layout);
        double dev = 0.0;
        for (Detector r : experiment::kDetectors) {
            dev = std::max(dev, std::abs(experiment::branch_probability(state, r) - expected[experiment::level(r)]));
        }
        out.measure("branch_probabilities", dev, tol::kExact);
    } else {
        out.skip("branch_probabilities", "dressed states not orthogonal, " + overlap_note);
    }

    out.measure("reduced_state_incoherent", rho.max_abs_diff(experiment::incoherent_pointer_reference(detector)),
                tol::kExact, "no Xi1-Xi2 coherence in the photon-II/D_II state");
    {
        const double eig_defect = std::max(0.0, -rho.eigenvalues().front());
        const double dev = std::max({rho.hermiticity_error(), std::abs(rho.trace() - 1.0), eig_defect});
        out.measure("reduced_state_physical", dev, tol::kDecomposition, "Hermitian, unit trace, positive");
    }
    {
        const auto marginal = table.marginal();
        double dev = 0.0;
        for (std::size_t n = 0; n < table.bins; ++n) {
            const double g = detector.envelope()[n];
            dev = std::max(dev, std::abs(marginal[n] - g * g));
        }
        out.measure("marginal_flat", dev, tol::kExact, "unconditioned D_II distribution equals g(n)^2");
    }
    if (has_coherence) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (std::size_t n = 0; n < table.bins; ++n) {
            const double s = table.p(Detector::b, n) + table.p(Detector::c, n);
            lo = std::min(lo, s);
            hi = std::max(hi, s);
        }
        out.measure("fringe_complementarity", hi - lo, tol::kExact, "P(b,n) + P(c,n) independent of n");
    } else {
        out.skip("fringe_complementarity", "layout has no coherence arm");
    }
    {
        double dev = 0.0;
        for (Detector r : experiment::kDetectors) {
            for (std::size_t n = 0; n < table.bins; ++n) {
                dev = std::max(dev, std::abs(table.p(r, n) - analytic_cell(config, r, n)));
            }
        }
        out.measure("coincidence_rows_match_fringe_model", dev, tol::kExact);
    }
    for (Detector r : experiment::kDetectors) {
        const std::string name = std::string("visibility_") + experiment::detector_name(r);
        if (!table.visibility[experiment::level(r)]) {
            out.skip(name, table.row_present(r) ? "single bin" : "detector never fires in this layout");
            continue;
        }
        std::vector<double> expected_row(table.bins);
        for (std::size_t n = 0; n < table.bins; ++n) expected_row[n] = analytic_cell(config, r, n);
        const double expected = experiment::visibility(expected_row);
        const double measured = *table.visibility[experiment::level(r)];
        const double tolerance = expected == 0.0 ? tol::kExact : tol::kOverlap;
        out.measure(name, std::abs(measured - expected), tolerance,
                    "measured " + fmt12(measured) + ", fringe model " + fmt12(expected));
    }
    {
        auto ops = experiment::splitter_variants();
        const auto haar = experiment::random_local_unitaries(kNoSignallingOps, kNoSignallingSeed);
        ops.insert(ops.end(), haar.begin(), haar.end());
        out.measure("no_signalling", experiment::no_signalling_check(state, ops), tol::kExact,
                    std::to_string(ops.size()) + " photon-I-local unitaries");
    }
    if (config.layout == Layout::eraser) {
        const auto coherence = experiment::which_coherence_part(state);
        const auto which_path = experiment::which_path_part(state);
        const std::array<qcore::DensityOperator, 2> parts{experiment::reduced_pointer(coherence.state),
                                                          experiment::reduced_pointer(which_path.state)};
        const std::array<double, 2> halves{0.5, 0.5};
        const double dev = std::max({qcore::mixture(halves, parts).max_abs_diff(rho),
                                     std::abs(coherence.probability - 0.5), std::abs(which_path.probability - 0.5)});
        out.measure("mixture_identity", dev, tol::kExact, "rho_II = 1/2 rho_II(b,c part) + 1/2 rho_II(a,d part)");
    } else {
        out.skip("mixture_identity", "layout has only one of the two parts");
    }
    if (has_coherence && orthogonal) {
        const std::array<qcore::DensityOperator, 2> parts{
            qcore::pure_density(experiment::conditioned_state(state, Detector::b)),
            qcore::pure_density(experiment::conditioned_state(state, Detector::c))};
        const std::array<double, 2> halves{0.5, 0.5};
        out.measure("opposite_interferences", qcore::mixture(halves, parts).max_abs_diff(rho), tol::kExact,
                    "conditioned b and c states average to rho_II");

        const auto second = experiment::verify_second_simple_basis(state);
        out.measure("second_basis_schmidt",
                    std::max({second.coefficient_error, second.orthonormality_error, second.reconstruction_error}),
                    tol::kDecomposition, "Schmidt coefficients {1/sqrt2, 1/sqrt2}");
        out.measure("second_basis_vectors", 1.0 - second.min_overlap(), tol::kOverlap,
                    "Schmidt vectors span U_I|+i>, U_I|-i>");
        out.measure("second_basis_partners", std::max(second.partner_error, second.expansion_error),
                    tol::kDecomposition, "partners (Xi1 -+ i Xi2)/sqrt2");
    } else {
        const std::string why = has_coherence ? "dressed states not orthogonal, " + overlap_note
                                              : std::string("layout has no coherence arm");
        out.skip("opposite_interferences", why);
        out.skip("second_basis_schmidt", why);
        out.skip("second_basis_vectors", why);
        out.skip("second_basis_partners", why);
    }
    if (has_which_path) {
        const auto part = experiment::which_path_part(state).state;
        const qcore::Matrix amps = [&] {
            qcore::Matrix m(4, static_cast<Eigen::Index>(detector.pointer_dim()));
            for (Eigen::Index r = 0; r < 4; ++r) m.row(r) = part.amplitudes().segment(r * m.cols(), m.cols()).transpose();
            return m;
        }();
        const double dev =
            std::max((amps.row(0).transpose() - kInvSqrt2 * detector.dressed(1).amplitudes()).cwiseAbs().maxCoeff(),
                     (amps.row(3).transpose() - kInvSqrt2 * detector.dressed(2).amplitudes()).cwiseAbs().maxCoeff());
        out.measure("which_path_partners", dev, tol::kExact, "a pairs with Xi1, d with Xi2");
        if (orthogonal) {
            out.measure("which_path_schmidt", coefficient_error(qcore::schmidt(part, {experiment::kPhotonI}).coefficients),
                        tol::kDecomposition);
        } else {
            out.skip("which_path_schmidt", "dressed states not orthogonal, " + overlap_note);
        }
    } else {
        out.skip("which_path_partners", "layout has no which-path arm");
        out.skip("which_path_schmidt", "layout has no which-path arm");
    }
    return report;
}

nlohmann::ordered_json config_json(const expdsl::ExperimentConfig& config) {
    nlohmann::ordered_json j;
    j["layout"] = std::string(experiment::layout_name(config.layout));
    j["bins"] = config.bins;
    j["cycles"] = config.cycles;
    j["phi0"] = config.phi0;
    j["merge_paths"] = config.merge_paths;
    j["seed"] = config.seed ? nlohmann::ordered_json(*config.seed) : nlohmann::ordered_json(nullptr);
    j["trials"] = config.trials ? nlohmann::ordered_json(*config.trials) : nlohmann::ordered_json(nullptr);
    return j;
}

nlohmann::ordered_json to_json(const VerifyReport& report) {
    nlohmann::ordered_json j;
    j["config"] = config_json(report.config);
    j["pointer"] = report.config.merge_paths ? "path-blind bins" : "path-tagged bins";
    j["ordering"] = "time-ordering agnostic: one final state serves detection before or after the choice";
    j["dressed_overlap"] = report.dressed_overlap;
    j["passed"] = report.passed();
    auto& checks = j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : report.checks) {
        nlohmann::ordered_json entry;
        entry["name"] = c.name;
        entry["status"] = status_name(c.status);
        entry["deviation"] = number_or_null(c.deviation);
        entry["tolerance"] = c.tolerance;
        entry["detail"] = c.detail;
        checks.push_back(std::move(entry));
    }
    return j;
}

// ---------------------------------------------------------- CSV / sampling

std::string analytic_csv(const expdsl::ExperimentConfig& config, const experiment::CoincidenceTable& table) {
    std::ostringstream csv;
    csv << "detector,bin,probability,conditional_probability,visibility_of_row\n";
    for (Detector r : experiment::kDetectors) {
        if (!table.row_present(r)) continue;
        const auto cond = table.conditional(r);
        const auto& vis = table.visibility[experiment::level(r)];
        const std::string vis_text = vis ? fmt12(*vis) : std::string();
        for (std::size_t n = 0; n < table.bins; ++n) {
            csv << config.detector_labels[experiment::level(r)] << ',' << n << ',' << fmt12(table.p(r, n)) << ','
                << fmt12(cond[n]) << ',' << vis_text << '\n';
        }
    }
    return csv.str();
}

SampleOutputs run_sample(const expdsl::ExperimentConfig& config, std::uint64_t trials, std::uint64_t seed) {
    const auto state = experiment::prepare(config.detector_model(), config.layout);
    const auto table = experiment::coincidence_table(state);
    SampleOutputs out{mc::sample(table, trials, seed), {}, {}};

    std::ostringstream csv;
    csv << "detector,bin,count,expected\n";
    for (Detector r : experiment::kDetectors) {
        if (!table.row_present(r)) continue;
        for (std::size_t n = 0; n < table.bins; ++n) {
            csv << config.detector_labels[experiment::level(r)] << ',' << n << ',' << out.run.count(r, n) << ','
                << fmt12(static_cast<double>(trials) * table.p(r, n)) << '\n';
        }
    }
    out.csv = csv.str();

    auto& j = out.summary;
    j["config"] = config_json(config);
    j["seed"] = seed;
    j["trials"] = trials;
    j["partitions"] = out.run.partitions;
    j["generator"] = "mt19937_64, partition seeds from splitmix64";
    try {
        const auto chi = mc::chi_square(out.run, table);
        j["chi_square"] = {{"statistic", number_or_null(chi.statistic)},
                           {"dof", chi.dof},
                           {"p_value", chi.p_value},
                           {"cells", chi.cells},
                           {"pooled_cells", chi.pooled}};
    } catch (const ArgumentError&) {
        j["chi_square"] = nullptr;
    }
    j["max_abs_deviation"] = mc::max_abs_deviation(out.run, table);
    auto& rows = j["rows"] = nlohmann::ordered_json::object();
    for (Detector r : experiment::kDetectors) {
        nlohmann::ordered_json row;
        row["events"] = out.run.row_total(r);
        row["frequency"] = static_cast<double>(out.run.row_total(r)) / static_cast<double>(trials);
        row["estimated_visibility"] = nullptr;
        if (out.run.row_total(r) > 0) {
            const auto hist = mc::fringe_histogram(out.run, r);
            if (hist.visibility) row["estimated_visibility"] = *hist.visibility;
        }
        rows[config.detector_labels[experiment::level(r)]] = std::move(row);
    }
    return out;
}

// --------------------------------------------------------------- dispatch

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

bool write_text(const std::string& path, const std::string& text, std::ostream& err) {
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        err << "error: cannot write " << path << '\n';
        return false;
    }
    file << text;
    return static_cast<bool>(file);
}

std::uint64_t env_seed() {
    const char* value = std::getenv("ERASER_SIM_SEED");
    if (value == nullptr || *value == '\0') return 0;
    std::uint64_t seed = 0;
    const std::string_view text(value);
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), seed);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw UsageError("ERASER_SIM_SEED must be a non-negative integer");
    }
    return seed;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Delayed-choice quantum eraser simulator", "eraser_sim"};
    app.require_subcommand(1);

    std::string config_path, out_path;
    std::optional<std::uint64_t> trials, seed;

    auto* analytic = app.add_subcommand("analytic", "Analytic coincidence table as CSV");
    auto* sample = app.add_subcommand("sample", "Monte Carlo coincidence counts (CSV) with a JSON summary");
    auto* verify = app.add_subcommand("verify", "Run the exact model checks, JSON report");
    for (auto* sub : {analytic, sample, verify}) {
        sub->add_option("--config", config_path, "experiment file (.exp)")->required();
        sub->add_option("--out", out_path, "output file (default: standard output)");
    }
    sample->add_option("--trials", trials, "number of photon pairs");
    sample->add_option("--seed", seed, "RNG seed (fallback: config, then ERASER_SIM_SEED)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n' << app.help();
        return kExitUsage;
    }

    try {
        const auto config = expdsl::load_file(config_path);

        if (analytic->parsed()) {
            const auto state = experiment::prepare(config.detector_model(), config.layout);
            const std::string csv = analytic_csv(config, experiment::coincidence_table(state));
            if (out_path.empty()) {
                out << csv;
            } else if (!write_text(out_path, csv, err)) {
                return kExitUsage;
            }
            return kExitOk;
        }

        if (sample->parsed()) {
            const std::uint64_t n = trials ? *trials : config.trials.value_or(kDefaultTrials);
            if (n == 0) throw UsageError("--trials must be at least 1");
            const std::uint64_t s = seed ? *seed : config.seed ? *config.seed : env_seed();
            const auto result = run_sample(config, n, s);
            const std::string summary = result.summary.dump(2) + "\n";
            if (out_path.empty()) {
                out << result.csv;
                err << summary;
            } else {
                if (!write_text(out_path, result.csv, err)) return kExitUsage;
                out << summary;
            }
            return kExitOk;
        }

        const auto report = run_verify(config);
        const std::string json = to_json(report).dump(2) + "\n";
        if (out_path.empty()) {
            out << json;
        } else if (!write_text(out_path, json, err)) {
            return kExitUsage;
        }
        return report.passed() ? kExitOk : kExitVerifyFailed;
    } catch (const expdsl::ParseError& e) {
        err << config_path << ": " << e.what() << '\n';
        return kExitUsage;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}

}  // namespace eraser::cli
