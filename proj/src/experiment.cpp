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

#include "eraser/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "eraser/errors.hpp"
#include "eraser/tolerances.hpp"

namespace eraser::experiment {

using qcore::kI;
using qcore::Matrix;
using qcore::Registry;
using qcore::Vector;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

StateVector photon_basis(std::size_t lvl) { return StateVector::basis(kPhotonI, kPhotonIDim, lvl); }

StateVector photon_state(std::size_t lvl, Complex coeff) { return photon_basis(lvl).scaled(coeff); }

/// Amplitudes of a (I, II) state as a 4 x pointer_dim matrix view.
Matrix as_matrix(const StateVector& full) {
    const auto rows = static_cast<Eigen::Index>(full.registry().dim(kPhotonI));
    const auto cols = static_cast<Eigen::Index>(full.registry().dim(kPointer));
    Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) m.row(r) = full.amplitudes().segment(r * cols, cols).transpose();
    return m;
}

void require_experiment_registry(const StateVector& full) {
    const auto& reg = full.registry();
    if (reg.size() != 2 || reg.subsystems()[0].id != kPhotonI || reg.subsystems()[1].id != kPointer ||
        reg.subsystems()[0].dim != kPhotonIDim) {
        throw StructuralError("expected a state on (I[4], II) subsystems");
    }
}

}  // namespace

char detector_name(Detector r) { return "abcd"[level(r)]; }

std::optional<Detector> detector_from_name(std::string_view name) {
    if (name.size() != 1) return std::nullopt;
    switch (name[0]) {
        case 'a': return Detector::a;
        case 'b': return Detector::b;
        case 'c': return Detector::c;
        case 'd': return Detector::d;
        default: return std::nullopt;
    }
}

std::string_view layout_name(Layout layout) {
    switch (layout) {
        case Layout::eraser: return "eraser";
        case Layout::mirrors: return "mirrors";
        case Layout::removed: return "removed";
    }
    return "eraser";
}

std::optional<Layout> layout_from_name(std::string_view name) {
    if (name == "eraser") return Layout::eraser;
    if (name == "mirrors") return Layout::mirrors;
    if (name == "removed") return Layout::removed;
    return std::nullopt;
}

double FringeModel::delta_phi(std::size_t bin, std::size_t bins) const {
    return 2.0 * std::numbers::pi * cycles * static_cast<double>(bin) / static_cast<double>(bins) + phi0;
}

// ------------------------------------------------------------ DetectorModel

DetectorModel::DetectorModel(std::vector<double> envelope, std::vector<double> phase1, std::vector<double> phase2,
                             bool merge_paths, std::optional<FringeModel> fringe)
    : envelope_(std::move(envelope)),
      phase1_(std::move(phase1)),
      phase2_(std::move(phase2)),
      merge_paths_(merge_paths),
      fringe_(fringe) {
    if (envelope_.empty()) throw ArgumentError("detector model needs at least one bin");
    if (phase1_.size() != envelope_.size() || phase2_.size() != envelope_.size()) {
        throw ArgumentError("detector model: phase profiles and envelope differ in length");
    }
    double weight = 0.0;
    for (std::size_t n = 0; n < envelope_.size(); ++n) {
        if (!(envelope_[n] >= 0.0) || !std::isfinite(envelope_[n])) {
            throw ArgumentError("detector model: envelope must be finite and nonnegative");
        }
        if (!std::isfinite(phase1_[n]) || !std::isfinite(phase2_[n])) {
            throw ArgumentError("detector model: phases must be finite");
        }
        weight += envelope_[n] * envelope_[n];
    }
    if (std::abs(weight - 1.0) > tol::kExact) throw ArgumentError("detector model: sum of g(n)^2 must be 1");
}

DetectorModel DetectorModel::uniform(std::size_t bins, FringeModel fringe, bool merge_paths) {
    if (bins == 0) throw ArgumentError("detector model needs at least one bin");
    if (!std::isfinite(fringe.cycles) || fringe.cycles < 0.0 || !std::isfinite(fringe.phi0)) {
        throw ArgumentError("fringe model: cycles must be finite and >= 0, phi0 finite");
    }
    std::vector<double> g(bins, 1.0 / std::sqrt(static_cast<double>(bins)));
    std::vector<double> p1(bins), p2(bins);
    for (std::size_t n = 0; n < bins; ++n) {
        const double dphi = fringe.delta_phi(n, bins);
        p1[n] = 0.5 * dphi;
        p2[n] = -0.5 * dphi;
    }
    return DetectorModel(std::move(g), std::move(p1), std::move(p2), merge_paths, fringe);
}

DetectorModel DetectorModel::custom(std::vector<double> envelope, std::vector<double> phase1,
                                    std::vector<double> phase2, bool merge_paths) {
    return DetectorModel(std::move(envelope), std::move(phase1), std::move(phase2), merge_paths, std::nullopt);
}

const std::vector<double>& DetectorModel::phase(int path) const {
    if (path == 1) return phase1_;
    if (path == 2) return phase2_;
    throw ArgumentError("emission path must be 1 or 2");
}

std::size_t DetectorModel::pointer_index(std::size_t bin, int path) const {
    if (bin >= bins()) throw StructuralError("bin out of range");
    if (path != 1 && path != 2) throw ArgumentError("emission path must be 1 or 2");
    return merge_paths_ ? bin : bin * 2 + static_cast<std::size_t>(path - 1);
}

StateVector DetectorModel::dressed(int path) const {
    const auto& phi = phase(path);
    Vector amps = Vector::Zero(static_cast<Eigen::Index>(pointer_dim()));
    for (std::size_t n = 0; n < bins(); ++n) {
        amps(static_cast<Eigen::Index>(pointer_index(n, path))) = std::polar(envelope_[n], phi[n]);
    }
    return StateVector(Registry({{kPointer, pointer_dim()}}), std::move(amps));
}

// ---------------------------------------------------------------- evolution

StateVector build_initial_state(const DetectorModel& detector) {
    const StateVector from_atom1 = qcore::tensor(photon_basis(kArm1), detector.dressed(1));
    const StateVector from_atom2 = qcore::tensor(photon_basis(kArm2), detector.dressed(2));
    return (from_atom1 + from_atom2).scaled(kInvSqrt2);
}

std::vector<OpticalElement> photon_layout(Layout layout) {
    const std::size_t a = level(Detector::a), b = level(Detector::b), c = level(Detector::c),
                      d = level(Detector::d);
    std::vector<OpticalElement> elements;
    switch (layout) {
        case Layout::eraser:
            elements.push_back(optics::beam_splitter_5050(kArm1, kArm1, a, "BS1"));
            elements.push_back(optics::beam_splitter_5050(kArm2, kArm2, d, "BS2"));
            break;
        case Layout::mirrors:
            elements.push_back(optics::mirror(kArm1, kArm1, "M1"));
            elements.push_back(optics::mirror(kArm2, kArm2, "M2"));
            break;
        case Layout::removed:
            elements.push_back(optics::free_path(kArm1, a, "free1"));
            elements.push_back(optics::free_path(kArm2, d, "free2"));
            break;
    }
    // Arm 1 reflects into b, arm 2 into c.
    elements.push_back(optics::beam_splitter_5050(kArm1, b, c, "BS"));
    return elements;
}

ExperimentState evolve(const StateVector& initial, const DetectorModel& detector, Layout layout,
                       std::string provenance) {
    require_experiment_registry(initial);
    StateVector psi = initial;
    for (const auto& element : photon_layout(layout)) psi = optics::apply(element, psi, kPhotonI);
    return ExperimentState{std::move(psi), detector, layout, std::move(provenance)};
}

ExperimentState prepare(const DetectorModel& detector, Layout layout, std::string provenance) {
    return evolve(build_initial_state(detector), detector, layout, std::move(provenance));
}

StateVector transcribed_state(const DetectorModel& detector, Layout layout) {
    const StateVector xi1 = detector.dressed(1);
    const StateVector xi2 = detector.dressed(2);
    auto term = [](std::size_t lvl, const StateVector& pointer) { return qcore::tensor(photon_basis(lvl), pointer); };
    // photon-II factors of the b and c ports
    const StateVector b_part = (xi1.scaled(-1.0) + xi2.scaled(kI)).scaled(kInvSqrt2);
    const StateVector c_part = (xi1.scaled(kI) - xi2).scaled(kInvSqrt2);
    switch (layout) {
        case Layout::eraser:
            return (term(level(Detector::a), xi1) + term(level(Detector::b), b_part) +
                    term(level(Detector::c), c_part) + term(level(Detector::d), xi2))
                .scaled(0.5);
        case Layout::mirrors:
            return (term(level(Detector::b), b_part) + term(level(Detector::c), c_part)).scaled(kInvSqrt2);
        case Layout::removed:
            return (term(level(Detector::a), xi1) + term(level(Detector::d), xi2)).scaled(kInvSqrt2);
    }
    throw ArgumentError("unknown layout");
}

double branch_probability(const ExperimentState& state, Detector r) {
    const Matrix m = as_matrix(state.full);
    return m.row(static_cast<Eigen::Index>(level(r))).squaredNorm();
}

StateVector conditioned_state(const ExperimentState& state, Detector r) {
    const Matrix m = as_matrix(state.full);
    const Vector row = m.row(static_cast<Eigen::Index>(level(r))).transpose();
    const double n = row.norm();
    if (n < tol::kNullNorm) {
        throw ZeroProbabilityError(std::string("detector ") + detector_name(r) + " never fires in this layout");
    }
    return StateVector(Registry({{kPointer, state.detector.pointer_dim()}}), row / n);
}

qcore::Projection which_coherence_part(const ExperimentState& state) {
    const std::array<StateVector, 2> span{photon_basis(level(Detector::b)), photon_basis(level(Detector::c))};
    return qcore::project_renormalize(state.full, span);
}

qcore::Projection which_path_part(const ExperimentState& state) {
    const std::array<StateVector, 2> span{photon_basis(level(Detector::a)), photon_basis(level(Detector::d))};
    return qcore::project_renormalize(state.full, span);
}

DensityOperator reduced_pointer(const StateVector& full, kernels::Exec exec) {
    return qcore::partial_trace(full, {kPointer}, exec);
}

DensityOperator incoherent_pointer_reference(const DetectorModel& detector) {
    const std::array<DensityOperator, 2> parts{qcore::pure_density(detector.dressed(1)),
                                               qcore::pure_density(detector.dressed(2))};
    const std::array<double, 2> weights{0.5, 0.5};
    return qcore::mixture(weights, parts);
}

Complex dressed_overlap(const DetectorModel& detector) {
    return qcore::inner(detector.dressed(1), detector.dressed(2));
}

// ------------------------------------------------------------- coincidences

double CoincidenceTable::row_total(Detector r) const {
    double total = 0.0;
    for (double p : row(r)) total += p;
    return total;
}

bool CoincidenceTable::row_present(Detector r) const { return row_total(r) > tol::kNullNorm * tol::kNullNorm; }

std::span<const double> CoincidenceTable::row(Detector r) const {
    return std::span<const double>(joint).subspan(level(r) * bins, bins);
}

std::vector<double> CoincidenceTable::conditional(Detector r) const {
    if (!row_present(r)) throw ArgumentError(std::string("row ") + detector_name(r) + " is empty");
    const double total = row_total(r);
    std::vector<double> out(row(r).begin(), row(r).end());
    for (double& p : out) p /= total;
    return out;
}

std::vector<double> CoincidenceTable::marginal() const {
    std::vector<double> out(bins, 0.0);
    for (Detector r : kDetectors) {
        for (std::size_t n = 0; n < bins; ++n) out[n] += p(r, n);
    }
    return out;
}

CoincidenceTable make_table(std::size_t bins, std::vector<double> joint) {
    if (bins == 0) throw ArgumentError("coincidence table needs at least one bin");
    if (joint.size() != kDetectors.size() * bins) throw StructuralError("coincidence table size mismatch");
    double total = 0.0;
    for (double p : joint) {
        if (!(p >= 0.0) || !std::isfinite(p)) throw ArgumentError("coincidence table has a negative entry");
        total += p;
    }
    if (std::abs(total - 1.0) > tol::kExact) throw ArgumentError("coincidence table does not sum to 1");
    CoincidenceTable table{bins, std::move(joint), {}};
    for (Detector r : kDetectors) {
        if (bins >= 2 && table.row_present(r)) table.visibility[level(r)] = visibility(table.conditional(r));
    }
    return table;
}

CoincidenceTable coincidence_table(const ExperimentState& state, kernels::Exec exec) {
    require_experiment_registry(state.full);
    const auto& det = state.detector;
    return make_table(det.bins(),
                      kernels::bin_probabilities(state.full.amplitudes(), kPhotonIDim, det.bins(), det.tags(), exec));
}

double visibility(std::span<const double> row) {
    if (row.size() < 2) throw ArgumentError("visibility needs at least 2 bins");
    double lo = row[0], hi = row[0];
    for (double p : row) {
        if (!(p >= 0.0)) throw ArgumentError("visibility: negative or NaN entry");
        lo = std::min(lo, p);
        hi = std::max(hi, p);
    }
    if (hi <= 0.0) throw ArgumentError("visibility: all-zero row");
    return (hi - lo) / (hi + lo);
}

// ------------------------------------------------------------ no-signalling

double no_signalling_check(const ExperimentState& state, std::span<const OpticalElement> local_ops,
                           kernels::Exec exec) {
    for (const auto& op : local_ops) {
        if (!op.is_unitary()) throw ArgumentError(op.name + ": local op is not unitary");
        op.embed(kPhotonIDim);  // range check before entering the parallel loop
    }
    const DensityOperator before = reduced_pointer(state.full, kernels::Exec::serial);
    std::vector<double> deviation(local_ops.size(), 0.0);
    kernels::for_each_index(local_ops.size(), exec, [&](std::size_t i) {
        const StateVector after = optics::apply(local_ops[i], state.full, kPhotonI);
        deviation[i] = reduced_pointer(after, kernels::Exec::serial).max_abs_diff(before);
    });
    double worst = 0.0;
    for (double d : deviation) worst = std::max(worst, d);
    return worst;
}

std::vector<OpticalElement> random_local_unitaries(std::size_t count, std::uint64_t seed) {
    std::mt19937_64 engine(seed);
    std::vector<OpticalElement> ops;
    ops.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        ops.push_back(optics::haar_random("haar" + std::to_string(i), {0, 1, 2, 3}, engine));
    }
    return ops;
}

std::vector<OpticalElement> splitter_variants() {
    const std::size_t a = level(Detector::a), b = level(Detector::b), c = level(Detector::c),
                      d = level(Detector::d);
    std::vector<OpticalElement> ops;
    ops.push_back(optics::beam_splitter_5050(b, b, c, "BS"));
    ops.push_back(optics::inverse(ops.back()));
    ops.push_back(optics::beam_splitter_5050(a, a, d, "BS(a,d)"));
    ops.push_back(optics::beam_splitter_5050(b, b, a, "BS1"));
    ops.push_back(optics::mirror(c, c, "M"));
    for (std::size_t m = 0; m < kPhotonIDim; ++m) ops.push_back(optics::phase_shift(m, 0.7 + m, "phase"));
    return ops;
}

// ----------------------------------------------------- second simple basis

std::array<StateVector, 2> evolved_coherence_basis() {
    const auto transfer = optics::central_bs_transfer();
    auto evolved_arm = [&](Eigen::Index q) {
        return photon_state(level(Detector::b), transfer.forward(0, q)) +
               photon_state(level(Detector::c), transfer.forward(1, q));
    };
    const StateVector u1 = evolved_arm(0);
    const StateVector u2 = evolved_arm(1);
    return {(u1 + u2.scaled(kI)).scaled(kInvSqrt2), (u1 - u2.scaled(kI)).scaled(kInvSqrt2)};
}

SecondBasisReport verify_second_simple_basis(const ExperimentState& state) {
    const StateVector psi = which_coherence_part(state).state;
    const auto sd = qcore::schmidt(psi, {kPhotonI});

    SecondBasisReport report;
    report.coefficients = sd.coefficients;
    const std::array<double, 2> expected{kInvSqrt2, kInvSqrt2};
    for (std::size_t k = 0; k < std::max<std::size_t>(2, sd.coefficients.size()); ++k) {
        const double have = k < sd.coefficients.size() ? sd.coefficients[k] : 0.0;
        const double want = k < expected.size() ? expected[k] : 0.0;
        report.coefficient_error = std::max(report.coefficient_error, std::abs(have - want));
    }
    report.orthonormality_error = sd.orthonormality_error();
    report.reconstruction_error = qcore::phase_aligned_deviation(sd.reconstruct(), psi);

    // Coefficients that agree to 1e-8 form one degenerate cluster: only the
    // cluster's span is basis-independent.
    std::vector<std::vector<std::size_t>> clusters;
    for (std::size_t k = 0; k < sd.coefficients.size(); ++k) {
        if (!clusters.empty() && std::abs(sd.coefficients[clusters.back().front()] - sd.coefficients[k]) < 1e-8) {
            clusters.back().push_back(k);
        } else {
            clusters.push_back({k});
        }
    }

    const auto basis = evolved_coherence_basis();
    const Matrix amps = as_matrix(psi);
    const std::array<StateVector, 2> expected_partners{
        (state.detector.dressed(1) - state.detector.dressed(2).scaled(kI)).scaled(0.5),
        (state.detector.dressed(1) + state.detector.dressed(2).scaled(kI)).scaled(0.5)};
    Vector expansion = Vector::Zero(psi.amplitudes().size());
    for (std::size_t s = 0; s < 2; ++s) {
        const StateVector& left = basis[s];
        double best = 0.0;
        for (const auto& cluster : clusters) {
            double weight = 0.0;
            for (std::size_t k : cluster) weight += std::norm(qcore::inner(sd.left[k], left));
            best = std::max(best, std::sqrt(weight));
        }
        report.basis_overlap[s] = best;

        const Vector partner = (left.amplitudes().adjoint() * amps).transpose();
        report.partner_error = std::max(report.partner_error,
                                        (partner - expected_partners[s].amplitudes()).cwiseAbs().maxCoeff());
        expansion += qcore::tensor(left, StateVector(expected_partners[s].registry(), partner)).amplitudes();
    }
    report.expansion_error = (expansion - psi.amplitudes()).cwiseAbs().maxCoeff();
    return report;
}

}  // namespace eraser::experiment
