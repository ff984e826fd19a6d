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

#ifndef ERASER_EXPERIMENT_HPP
#define ERASER_EXPERIMENT_HPP

// Two-photon model of the delayed-choice quantum eraser.
//
// Photon I lives on a 4-level path subsystem whose levels are the detector
// ports a, b, c, d. The arm states |1>_I, |2>_I running from BS1/BS2 to the
// central splitter share levels b and c (the central splitter's input
// ports), and each atom's emission mode starts on its own arm level; BS1/BS2
// transmit into the otherwise empty levels a and d.
//
// Photon II together with the screen detector D_II is one "pointer"
// subsystem. The detector interaction maps |q>_II|0>_D to a dressed state
//   Xi_q = sum_n g(n) exp(i phi_q(n)) |n>          (path-blind bins), or
//   Xi_q = sum_n g(n) exp(i phi_q(n)) |n, q>       (path-tagged bins).
// Path-blind bins are the default: they record position only, so the b/c
// coincidence rows interfere. Path-tagged bins keep a which-path record in
// the detector and every bin distribution is flat.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eraser/kernels.hpp"
#include "eraser/optics.hpp"
#include "eraser/qcore.hpp"

namespace eraser::experiment {

using optics::OpticalElement;
using qcore::Complex;
using qcore::DensityOperator;
using qcore::StateVector;

inline const qcore::SubsystemId kPhotonI = "I";
inline const qcore::SubsystemId kPointer = "II";
inline constexpr std::size_t kPhotonIDim = 4;

enum class Detector : std::size_t { a = 0, b = 1, c = 2, d = 3 };
inline constexpr std::array<Detector, 4> kDetectors{Detector::a, Detector::b, Detector::c, Detector::d};

inline constexpr std::size_t level(Detector r) { return static_cast<std::size_t>(r); }
char detector_name(Detector r);
std::optional<Detector> detector_from_name(std::string_view name);

/// Arm levels feeding the central splitter.
inline constexpr std::size_t kArm1 = level(Detector::b);
inline constexpr std::size_t kArm2 = level(Detector::c);

enum class Layout {
    eraser,   // BS1, BS2 balanced splitters: random which-path / erasure
    mirrors,  // BS1, BS2 replaced by mirrors: always to the central splitter
    removed,  // BS1, BS2 absent: always straight to D_I^a / D_I^d
};
std::string_view layout_name(Layout layout);
std::optional<Layout> layout_from_name(std::string_view name);

/// Delta phi(n) = 2 pi cycles n / N + phi0.
struct FringeModel {
    double cycles = 2.0;
    double phi0 = 0.0;

    double delta_phi(std::size_t bin, std::size_t bins) const;
    friend bool operator==(const FringeModel&, const FringeModel&) = default;
};

class DetectorModel {
  public:
    /// Uniform envelope g(n) = 1/sqrt(N); phi_1 = +Delta phi/2, phi_2 = -Delta phi/2.
    static DetectorModel uniform(std::size_t bins, FringeModel fringe, bool merge_paths);
    /// Arbitrary profiles. ArgumentError unless sizes agree, N >= 1,
    /// g >= 0 and sum g^2 = 1 within 1e-12.
    static DetectorModel custom(std::vector<double> envelope, std::vector<double> phase1,
                                std::vector<double> phase2, bool merge_paths);

    std::size_t bins() const { return envelope_.size(); }
    bool merge_paths() const { return merge_paths_; }
    std::size_t tags() const { return merge_paths_ ? 1 : 2; }
    std::size_t pointer_dim() const { return bins() * tags(); }
    const std::vector<double>& envelope() const { return envelope_; }
    /// path is 1 or 2.
    const std::vector<double>& phase(int path) const;
    const std::optional<FringeModel>& fringe() const { return fringe_; }

    std::size_t pointer_index(std::size_t bin, int path) const;
    /// Xi_q on the pointer subsystem.
    StateVector dressed(int path) const;

  private:
    DetectorModel(std::vector<double> envelope, std::vector<double> phase1, std::vector<double> phase2,
                  bool merge_paths, std::optional<FringeModel> fringe);

    std::vector<double> envelope_;
    std::vector<double> phase1_;
    std::vector<double> phase2_;
    bool merge_paths_ = true;
    std::optional<FringeModel> fringe_;
};

struct ExperimentState {
    StateVector full;  // registry (I, II)
    DetectorModel detector;
    Layout layout = Layout::eraser;
    std::string provenance;
};

/// (|1>_I Xi_1 + |2>_I Xi_2)/sqrt(2).
StateVector build_initial_state(const DetectorModel& detector);

/// The photon-I elements of a layout, in the order photon I meets them.
std::vector<OpticalElement> photon_layout(Layout layout);

/// Runs the initial state through photon_layout(layout).
ExperimentState evolve(const StateVector& initial, const DetectorModel& detector, Layout layout = Layout::eraser,
                       std::string provenance = {});
ExperimentState prepare(const DetectorModel& detector, Layout layout = Layout::eraser, std::string provenance = {});

/// Closed-form final state written out per detector port, independent of
/// the optics code; the eraser layout is the rearranged four-branch state.
StateVector transcribed_state(const DetectorModel& detector, Layout layout);

double branch_probability(const ExperimentState& state, Detector r);

/// Normalized pointer state given a click in D_I^r. ZeroProbabilityError
/// for an empty branch.
StateVector conditioned_state(const ExperimentState& state, Detector r);

/// Full state projected onto span{|b>, |c>} (which-coherence part) or
/// span{|a>, |d>} (which-path part), renormalized.
qcore::Projection which_coherence_part(const ExperimentState& state);
qcore::Projection which_path_part(const ExperimentState& state);

DensityOperator reduced_pointer(const StateVector& full, kernels::Exec exec = kernels::default_exec());
/// (1/2) Xi_1 Xi_1^H + (1/2) Xi_2 Xi_2^H.
DensityOperator incoherent_pointer_reference(const DetectorModel& detector);
Complex dressed_overlap(const DetectorModel& detector);

struct CoincidenceTable {
    std::size_t bins = 0;
    std::vector<double> joint;  // P(r, n), r-major in a, b, c, d order
    std::array<std::optional<double>, 4> visibility;

    double p(Detector r, std::size_t bin) const { return joint[level(r) * bins + bin]; }
    double row_total(Detector r) const;
    bool row_present(Detector r) const;
    std::span<const double> row(Detector r) const;
    /// P(n | r); ArgumentError for an empty row.
    std::vector<double> conditional(Detector r) const;
    /// P(n) summed over detectors.
    std::vector<double> marginal() const;
};

/// Validates total 1 within 1e-12 and nonnegative entries, fills visibility.
CoincidenceTable make_table(std::size_t bins, std::vector<double> joint);
CoincidenceTable coincidence_table(const ExperimentState& state, kernels::Exec exec = kernels::default_exec());

/// (max - min)/(max + min). ArgumentError for fewer than 2 bins, negative
/// entries or an all-zero row.
double visibility(std::span<const double> row);

/// Max elementwise change of the pointer's reduced operator under each
/// photon-I-local op. ArgumentError for a non-unitary op.
double no_signalling_check(const ExperimentState& state, std::span<const OpticalElement> local_ops,
                           kernels::Exec exec = kernels::default_exec());
/// Seeded Haar-random unitaries on all four photon-I levels.
std::vector<OpticalElement> random_local_unitaries(std::size_t count, std::uint64_t seed);
/// Central-splitter-like local ops: the splitter itself, its inverse, a
/// relabeled splitter on (a, d), and a phase on each port.
std::vector<OpticalElement> splitter_variants();

/// Schmidt analysis of the which-coherence part in the |+-i> basis.
struct SecondBasisReport {
    std::vector<double> coefficients;
    double coefficient_error = 0.0;        // vs {1/sqrt2, 1/sqrt2}
    double orthonormality_error = 0.0;     // SVD vectors
    double reconstruction_error = 0.0;     // SVD reconstruction vs state
    std::array<double, 2> basis_overlap{};  // |projection of U_I|+-i> onto its Schmidt cluster|
    double partner_error = 0.0;            // <U_I(+-i)|psi> vs (Xi_1 -+ i Xi_2)/2
    double expansion_error = 0.0;          // sum_+- U_I|+-i> (x) partner vs state

    double min_overlap() const { return std::min(basis_overlap[0], basis_overlap[1]); }
};
SecondBasisReport verify_second_simple_basis(const ExperimentState& state);

/// U_I|+i> and U_I|-i> on photon I (|+-i> = (|1> +- i|2>)/sqrt2).
std::array<StateVector, 2> evolved_coherence_basis();

}  // namespace eraser::experiment

#endif  // ERASER_EXPERIMENT_HPP
