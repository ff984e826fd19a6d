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

#include "eraser/optics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "eraser/errors.hpp"
#include "eraser/tolerances.hpp"

namespace eraser::optics {

using qcore::Complex;
using qcore::kI;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

void require_distinct(const std::vector<std::size_t>& modes, const std::string& name, const char* side) {
    std::set<std::size_t> seen(modes.begin(), modes.end());
    if (seen.size() != modes.size()) throw StructuralError(name + ": duplicate " + side + " modes");
}

}  // namespace

bool OpticalElement::is_unitary() const {
    if (inputs.size() != outputs.size()) return false;
    return std::set<std::size_t>(inputs.begin(), inputs.end()) == std::set<std::size_t>(outputs.begin(), outputs.end());
}

Matrix OpticalElement::embed(std::size_t dim) const {
    const auto d = static_cast<Eigen::Index>(dim);
    Matrix op = Matrix::Identity(d, d);
    for (std::size_t m : inputs) {
        if (m >= dim) throw StructuralError(name + ": input mode " + std::to_string(m) + " out of range");
        op.col(static_cast<Eigen::Index>(m)).setZero();
    }
    for (std::size_t m : outputs) {
        if (m >= dim) throw StructuralError(name + ": output mode " + std::to_string(m) + " out of range");
        op.col(static_cast<Eigen::Index>(m)).setZero();
    }
    for (std::size_t j = 0; j < inputs.size(); ++j) {
        for (std::size_t i = 0; i < outputs.size(); ++i) {
            op(static_cast<Eigen::Index>(outputs[i]), static_cast<Eigen::Index>(inputs[j])) =
                transfer(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
    }
    return op;
}

OpticalElement make_element(std::string name, std::vector<std::size_t> inputs, std::vector<std::size_t> outputs,
                            Matrix transfer) {
    require_distinct(inputs, name, "input");
    require_distinct(outputs, name, "output");
    if (static_cast<std::size_t>(transfer.rows()) != outputs.size() ||
        static_cast<std::size_t>(transfer.cols()) != inputs.size()) {
        throw StructuralError(name + ": transfer matrix shape does not match modes");
    }
    if (qcore::isometry_error(transfer) > tol::kExact) throw ArgumentError(name + ": transfer is not an isometry");
    return OpticalElement{std::move(name), std::move(inputs), std::move(outputs), std::move(transfer)};
}

OpticalElement beam_splitter_5050(std::size_t in, std::size_t reflect, std::size_t transmit, std::string name) {
    if (reflect == transmit) throw StructuralError(name + ": reflect and transmit modes coincide");
    if (in == reflect || in == transmit) {
        const std::size_t other = in == reflect ? transmit : reflect;
        Matrix t(2, 2);
        t << kI * kInvSqrt2, kInvSqrt2,  // column `in`:    (i|r> + |t>)/sqrt2
            kInvSqrt2, kI * kInvSqrt2;   // column `other`: (|r> + i|t>)/sqrt2
        return make_element(std::move(name), {in, other}, {reflect, transmit}, std::move(t));
    }
    Matrix t(2, 1);
    t << kI * kInvSqrt2, kInvSqrt2;
    return make_element(std::move(name), {in}, {reflect, transmit}, std::move(t));
}

OpticalElement mirror(std::size_t in, std::size_t out, std::string name) {
    Matrix t(1, 1);
    t << kI;
    return make_element(std::move(name), {in}, {out}, std::move(t));
}

OpticalElement free_path(std::size_t in, std::size_t out, std::string name) {
    return make_element(std::move(name), {in}, {out}, Matrix::Identity(1, 1));
}

OpticalElement identity(std::vector<std::size_t> modes) {
    const auto n = static_cast<Eigen::Index>(modes.size());
    return make_element("identity", modes, modes, Matrix::Identity(n, n));
}

OpticalElement phase_shift(std::size_t mode, double radians, std::string name) {
    Matrix t(1, 1);
    t << std::polar(1.0, radians);
    return make_element(std::move(name), {mode}, {mode}, std::move(t));
}

OpticalElement from_unitary(std::string name, std::vector<std::size_t> modes, Matrix unitary) {
    auto element = make_element(std::move(name), modes, modes, std::move(unitary));
    if (qcore::isometry_error(element.transfer.adjoint()) > tol::kExact) {
        throw ArgumentError(element.name + ": matrix is not unitary");
    }
    return element;
}

OpticalElement inverse(const OpticalElement& element) {
    if (!element.is_unitary()) throw ArgumentError(element.name + ": only unitary elements have an inverse");
    return make_element(element.name + "^-1", element.outputs, element.inputs, element.transfer.adjoint());
}

OpticalElement haar_random(std::string name, std::vector<std::size_t> modes, std::mt19937_64& engine) {
    const auto n = static_cast<Eigen::Index>(modes.size());
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix z(n, n);
    for (Eigen::Index c = 0; c < n; ++c) {
        for (Eigen::Index r = 0; r < n; ++r) {
            const double re = gauss(engine);
            const double im = gauss(engine);
            z(r, c) = Complex(re, im);
        }
    }
    Eigen::HouseholderQR<Matrix> qr(z);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index k = 0; k < n; ++k) {
        const Complex d = r(k, k);
        q.col(k) *= std::abs(d) > 0.0 ? d / std::abs(d) : Complex(1.0);
    }
    return from_unitary(std::move(name), std::move(modes), std::move(q));
}

StateVector apply(const OpticalElement& element, const StateVector& psi, const SubsystemId& id) {
    const std::size_t dim = psi.registry().dim(id);
    const Matrix op = element.embed(dim);
    // Output-only modes must be empty, otherwise the embedded map would
    // discard amplitude.
    for (std::size_t m : element.outputs) {
        if (std::find(element.inputs.begin(), element.inputs.end(), m) != element.inputs.end()) continue;
        const StateVector selector = qcore::StateVector::basis(id, dim, m);
        const Matrix proj = selector.amplitudes() * selector.amplitudes().adjoint();
        if (qcore::apply_local(psi, id, proj).norm() > tol::kNullNorm) {
            throw StructuralError(element.name + ": vacuum port " + std::to_string(m) + " is occupied");
        }
    }
    return qcore::apply_local(psi, id, op);
}

CentralTransfer central_bs_transfer() {
    // Arm |q> carries the factor i from its reflection at BSq, then meets
    // the central splitter: arm 1 reflects into b, arm 2 reflects into c.
    const OpticalElement bs = beam_splitter_5050(0, 0, 1, "BS");
    const Matrix central = bs.embed(2);
    const Matrix forward = central * (kI * Matrix::Identity(2, 2));
    const Matrix inverse = forward.fullPivLu().inverse();
    return {forward, inverse};
}

}  // namespace eraser::optics
