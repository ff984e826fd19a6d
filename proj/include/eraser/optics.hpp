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

#ifndef ERASER_OPTICS_HPP
#define ERASER_OPTICS_HPP

// Linear-optics elements acting on the path modes of one photon.
//
// Phase convention: a reflected amplitude is multiplied by i, a transmitted
// one is unchanged, both scaled by 1/sqrt(2) at a balanced splitter.

#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "eraser/qcore.hpp"

namespace eraser::optics {

using qcore::Matrix;
using qcore::StateVector;
using qcore::SubsystemId;

/// Isometric transfer from `inputs` to `outputs` (transfer is
/// outputs x inputs). Modes that appear only among the outputs are vacuum
/// ports: apply() requires them to be empty.
struct OpticalElement {
    std::string name;
    std::vector<std::size_t> inputs;
    std::vector<std::size_t> outputs;
    Matrix transfer;

    /// Square with inputs and outputs covering the same modes.
    bool is_unitary() const;
    /// The element as a dim x dim operator (identity on untouched modes).
    /// Vacuum-port columns are left zero.
    Matrix embed(std::size_t dim) const;
};

/// Validating constructor: distinct modes on each side, matching shape,
/// transfer^H transfer = I within 1e-12.
OpticalElement make_element(std::string name, std::vector<std::size_t> inputs, std::vector<std::size_t> outputs,
                            Matrix transfer);

/// |in> -> (i|reflect> + |transmit>)/sqrt(2). When `in` is one of the two
/// output modes the element is the full 2x2 splitter on {reflect, transmit};
/// the second port maps to (|reflect> + i|transmit>)/sqrt(2).
OpticalElement beam_splitter_5050(std::size_t in, std::size_t reflect, std::size_t transmit,
                                  std::string name = "BS");

/// Reflection without splitting: |in> -> i|out>.
OpticalElement mirror(std::size_t in, std::size_t out, std::string name = "M");

/// Free propagation / relabeling: |in> -> |out>.
OpticalElement free_path(std::size_t in, std::size_t out, std::string name = "free");

OpticalElement identity(std::vector<std::size_t> modes);
OpticalElement phase_shift(std::size_t mode, double radians, std::string name = "phase");
OpticalElement from_unitary(std::string name, std::vector<std::size_t> modes, Matrix unitary);

/// Inverse of a unitary element; ArgumentError for non-unitary elements.
OpticalElement inverse(const OpticalElement& element);

/// Haar-random unitary on `modes` (QR of a complex Gaussian matrix with the
/// R-diagonal phases divided out).
OpticalElement haar_random(std::string name, std::vector<std::size_t> modes, std::mt19937_64& engine);

/// Applies `element` to subsystem `id`. StructuralError if a mode is out
/// of range or a vacuum port is occupied.
StateVector apply(const OpticalElement& element, const StateVector& psi, const SubsystemId& id);

/// Photon-I evolution from the arm states (|1>, |2>) to the central-splitter
/// outputs (|b>, |c>), including the reflection phase picked up at BS1/BS2.
struct CentralTransfer {
    Matrix forward;  // columns: U|1>, U|2> in the (b, c) basis
    Matrix inverse;  // columns: |b>, |c> in the (U|1>, U|2>) basis
};
CentralTransfer central_bs_transfer();

}  // namespace eraser::optics

#endif  // ERASER_OPTICS_HPP
