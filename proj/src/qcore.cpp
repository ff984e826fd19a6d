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

#include "eraser/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "eraser/errors.hpp"
#include "eraser/tolerances.hpp"

namespace eraser::qcore {

namespace {

std::vector<std::size_t> dims_of(const Registry& registry) {
    std::vector<std::size_t> dims;
    for (const auto& s : registry.subsystems()) dims.push_back(s.dim);
    return dims;
}

void require_proper_subset(const Registry& registry, const SubsystemSet& keep, const char* what) {
    if (keep.empty()) throw ArgumentError(std::string(what) + ": subsystem set is empty");
    for (const auto& id : keep) {
        if (!registry.contains(id)) throw StructuralError(std::string(what) + ": unknown subsystem '" + id + "'");
    }
    if (keep.size() == registry.size()) {
        throw ArgumentError(std::string(what) + ": subsystem set covers every subsystem");
    }
}

kernels::IndexSplit split_for(const Registry& registry, const SubsystemSet& keep) {
    const auto dims = dims_of(registry);
    std::vector<std::uint8_t> mask;
    for (const auto& s : registry.subsystems()) mask.push_back(keep.contains(s.id) ? 1 : 0);
    return kernels::split_indices(dims, mask);
}

SubsystemSet complement(const Registry& registry, const SubsystemSet& keep) {
    SubsystemSet out;
    for (const auto& s : registry.subsystems()) {
        if (!keep.contains(s.id)) out.insert(s.id);
    }
    return out;
}

void require_same_registry(const Registry& a, const Registry& b, const char* what) {
    if (!(a == b)) throw StructuralError(std::string(what) + ": subsystem registries differ");
}

}  // namespace

// ---------------------------------------------------------------- Registry

Registry::Registry(std::vector<Subsystem> subsystems) : subsystems_(std::move(subsystems)) {
    for (std::size_t i = 0; i < subsystems_.size(); ++i) {
        if (subsystems_[i].dim == 0) {
            throw StructuralError("subsystem '" + subsystems_[i].id + "' has dimension 0");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (subsystems_[i].id == subsystems_[j].id) {
                throw StructuralError("duplicate subsystem id '" + subsystems_[i].id + "'");
            }
        }
    }
}

std::size_t Registry::total_dim() const {
    std::size_t total = 1;
    for (const auto& s : subsystems_) total *= s.dim;
    return total;
}

bool Registry::contains(const SubsystemId& id) const {
    return std::any_of(subsystems_.begin(), subsystems_.end(), [&](const Subsystem& s) { return s.id == id; });
}

std::size_t Registry::position(const SubsystemId& id) const {
    for (std::size_t i = 0; i < subsystems_.size(); ++i) {
        if (subsystems_[i].id == id) return i;
    }
    throw StructuralError("unknown subsystem '" + id + "'");
}

std::size_t Registry::dim(const SubsystemId& id) const { return subsystems_[position(id)].dim; }

Registry Registry::concat(const Registry& other) const {
    std::vector<Subsystem> joined = subsystems_;
    for (const auto& s : other.subsystems_) {
        if (contains(s.id)) throw StructuralError("tensor: subsystem '" + s.id + "' appears on both sides");
        joined.push_back(s);
    }
    return Registry(std::move(joined));
}

Registry Registry::subset(const SubsystemSet& keep) const {
    std::vector<Subsystem> kept;
    for (const auto& s : subsystems_) {
        if (keep.contains(s.id)) kept.push_back(s);
    }
    if (kept.size() != keep.size()) throw StructuralError("subset: unknown subsystem in keep set");
    return Registry(std::move(kept));
}

std::size_t Registry::flat_index(const BasisLabel& label) const {
    if (label.factors.size() != subsystems_.size()) {
        throw StructuralError("basis label has " + std::to_string(label.factors.size()) + " factors, registry has " +
                              std::to_string(subsystems_.size()));
    }
    std::size_t flat = 0;
    for (std::size_t s = 0; s < subsystems_.size(); ++s) {
        const auto& [id, level] = label.factors[s];
        if (id != subsystems_[s].id) {
            throw StructuralError("basis label factor '" + id + "' out of canonical order (expected '" +
                                  subsystems_[s].id + "')");
        }
        if (level >= subsystems_[s].dim) {
            throw StructuralError("level " + std::to_string(level) + " out of range for subsystem '" + id + "'");
        }
        flat = flat * subsystems_[s].dim + level;
    }
    return flat;
}

BasisLabel Registry::label(std::size_t flat) const {
    if (flat >= total_dim()) throw StructuralError("flat index out of range");
    BasisLabel label;
    label.factors.resize(subsystems_.size());
    for (std::size_t s = subsystems_.size(); s-- > 0;) {
        label.factors[s] = {subsystems_[s].id, flat % subsystems_[s].dim};
        flat /= subsystems_[s].dim;
    }
    return label;
}

// ------------------------------------------------------------- StateVector

StateVector::StateVector(Registry registry, Vector amplitudes)
    : registry_(std::move(registry)), amplitudes_(std::move(amplitudes)) {
    if (static_cast<std::size_t>(amplitudes_.size()) != registry_.total_dim()) {
        throw StructuralError("state has " + std::to_string(amplitudes_.size()) + " amplitudes, registry needs " +
                              std::to_string(registry_.total_dim()));
    }
}

StateVector StateVector::basis(const Registry& registry, const BasisLabel& label) {
    Vector amps = Vector::Zero(static_cast<Eigen::Index>(registry.total_dim()));
    amps(static_cast<Eigen::Index>(registry.flat_index(label))) = 1.0;
    return StateVector(registry, std::move(amps));
}

StateVector StateVector::basis(const SubsystemId& id, std::size_t dim, std::size_t level) {
    Registry registry({{id, dim}});
    return basis(registry, BasisLabel{{{id, level}}});
}

StateVector StateVector::from_amplitudes(const SubsystemId& id, std::span<const Complex> amplitudes) {
    Vector amps(static_cast<Eigen::Index>(amplitudes.size()));
    for (std::size_t i = 0; i < amplitudes.size(); ++i) amps(static_cast<Eigen::Index>(i)) = amplitudes[i];
    return StateVector(Registry({{id, amplitudes.size()}}), std::move(amps));
}

Complex StateVector::amplitude(const BasisLabel& label) const {
    return amplitudes_(static_cast<Eigen::Index>(registry_.flat_index(label)));
}

bool StateVector::is_normalized(double tol) const { return std::abs(norm() - 1.0) <= tol; }

StateVector StateVector::normalized() const {
    const double n = norm();
    if (n < tol::kNullNorm) throw NormalizationError("cannot normalize a null vector");
    return StateVector(registry_, amplitudes_ / n);
}

StateVector StateVector::scaled(Complex factor) const { return StateVector(registry_, amplitudes_ * factor); }

StateVector operator+(const StateVector& a, const StateVector& b) {
    require_same_registry(a.registry_, b.registry_, "operator+");
    return StateVector(a.registry_, a.amplitudes_ + b.amplitudes_);
}

StateVector operator-(const StateVector& a, const StateVector& b) {
    require_same_registry(a.registry_, b.registry_, "operator-");
    return StateVector(a.registry_, a.amplitudes_ - b.amplitudes_);
}

// --------------------------------------------------------- DensityOperator

DensityOperator DensityOperator::from_matrix(Registry registry, Matrix matrix) {
    const auto d = static_cast<Eigen::Index>(registry.total_dim());
    if (matrix.rows() != d || matrix.cols() != d) throw StructuralError("density matrix shape mismatch");
    DensityOperator rho(std::move(registry), std::move(matrix));
    if (rho.hermiticity_error() > tol::kExact) throw ArgumentError("density matrix is not Hermitian");
    if (std::abs(rho.trace() - Complex(1.0)) > tol::kExact) throw ArgumentError("density matrix trace is not 1");
    if (rho.eigenvalues().front() < tol::kEigenFloor) throw ArgumentError("density matrix is not positive");
    return rho;
}

double DensityOperator::hermiticity_error() const { return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff(); }

std::vector<double> DensityOperator::eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(matrix_, Eigen::EigenvaluesOnly);
    const auto& ev = solver.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

double DensityOperator::max_abs_diff(const DensityOperator& other) const {
    require_same_registry(registry_, other.registry_, "max_abs_diff");
    return (matrix_ - other.matrix_).cwiseAbs().maxCoeff();
}

// -------------------------------------------------------------- operations

StateVector tensor(const StateVector& a, const StateVector& b) {
    Registry joined = a.registry().concat(b.registry());
    const auto& x = a.amplitudes();
    const auto& y = b.amplitudes();
    Vector amps(x.size() * y.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) amps.segment(i * y.size(), y.size()) = x(i) * y;
    return StateVector(std::move(joined), std::move(amps));
}

Complex inner(const StateVector& a, const StateVector& b) {
    require_same_registry(a.registry(), b.registry(), "inner");
    return a.amplitudes().dot(b.amplitudes());  // Eigen conjugates the left operand
}

DensityOperator pure_density(const StateVector& psi) {
    if (!psi.is_normalized(tol::kExact)) {
        throw NormalizationError("pure_density: state norm " + std::to_string(psi.norm()) + " is not 1");
    }
    return DensityOperator(psi.registry(), psi.amplitudes() * psi.amplitudes().adjoint());
}

DensityOperator partial_trace(const StateVector& psi, const SubsystemSet& keep, kernels::Exec exec) {
    require_proper_subset(psi.registry(), keep, "partial_trace");
    const auto split = split_for(psi.registry(), keep);
    return DensityOperator(psi.registry().subset(keep), kernels::reduce_pure(psi.amplitudes(), split, exec));
}

DensityOperator partial_trace(const DensityOperator& rho, const SubsystemSet& keep, kernels::Exec exec) {
    require_proper_subset(rho.registry(), keep, "partial_trace");
    const auto split = split_for(rho.registry(), keep);
    return DensityOperator(rho.registry().subset(keep), kernels::trace_out(rho.matrix(), split, exec));
}

DensityOperator mixture(std::span<const double> weights, std::span<const DensityOperator> operators) {
    if (weights.size() != operators.size() || weights.empty()) {
        throw ArgumentError("mixture: need one weight per operator");
    }
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw ArgumentError("mixture: negative weight");
        total += w;
    }
    if (std::abs(total - 1.0) > tol::kExact) throw ArgumentError("mixture: weights do not sum to 1");
    Matrix acc = Matrix::Zero(operators[0].matrix_.rows(), operators[0].matrix_.cols());
    for (std::size_t i = 0; i < operators.size(); ++i) {
        require_same_registry(operators[0].registry_, operators[i].registry_, "mixture");
        acc += weights[i] * operators[i].matrix_;
    }
    return DensityOperator(operators[0].registry_, std::move(acc));
}

SchmidtDecomposition schmidt(const StateVector& psi, const SubsystemSet& left) {
    require_proper_subset(psi.registry(), left, "schmidt");
    if (!psi.is_normalized(tol::kDecomposition)) throw NormalizationError("schmidt: state is not normalized");
    const auto split = split_for(psi.registry(), left);
    Matrix coeff = Matrix::Zero(static_cast<Eigen::Index>(split.kept_dim), static_cast<Eigen::Index>(split.traced_dim));
    for (std::size_t i = 0; i < split.kept.size(); ++i) {
        coeff(static_cast<Eigen::Index>(split.kept[i]), static_cast<Eigen::Index>(split.traced[i])) =
            psi.amplitudes()(static_cast<Eigen::Index>(i));
    }
    Eigen::JacobiSVD<Matrix> svd(coeff, Eigen::ComputeThinU | Eigen::ComputeThinV);

    SchmidtDecomposition out;
    out.parent = psi.registry();
    const Registry left_reg = psi.registry().subset(left);
    const Registry right_reg = psi.registry().subset(complement(psi.registry(), left));
    const auto& sv = svd.singularValues();
    for (Eigen::Index k = 0; k < sv.size(); ++k) {
        if (sv(k) <= tol::kSchmidtCutoff) break;  // sorted descending
        out.coefficients.push_back(sv(k));
        out.left.emplace_back(left_reg, svd.matrixU().col(k));
        // coeff = U S V^H, so the right factor of term k is conj(V_k).
        out.right.emplace_back(right_reg, svd.matrixV().col(k).conjugate());
    }
    return out;
}

StateVector SchmidtDecomposition::reconstruct() const {
    if (left.empty()) throw StructuralError("empty Schmidt decomposition");
    Vector acc = Vector::Zero(static_cast<Eigen::Index>(parent.total_dim()));
    for (std::size_t k = 0; k < coefficients.size(); ++k) {
        acc += coefficients[k] * reorder(tensor(left[k], right[k]), parent).amplitudes();
    }
    return StateVector(parent, std::move(acc));
}

double SchmidtDecomposition::orthonormality_error() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < left.size(); ++i) {
        for (std::size_t j = 0; j < left.size(); ++j) {
            const double expected = i == j ? 1.0 : 0.0;
            worst = std::max(worst, std::abs(inner(left[i], left[j]) - expected));
            worst = std::max(worst, std::abs(inner(right[i], right[j]) - expected));
        }
    }
    return worst;
}

StateVector apply_local(const StateVector& psi, const SubsystemId& id, const Matrix& op) {
    const auto& reg = psi.registry();
    const std::size_t pos = reg.position(id);
    const std::size_t d = reg.subsystems()[pos].dim;
    if (static_cast<std::size_t>(op.rows()) != d || static_cast<std::size_t>(op.cols()) != d) {
        throw StructuralError("apply_local: operator is " + std::to_string(op.rows()) + "x" +
                              std::to_string(op.cols()) + ", subsystem '" + id + "' has dimension " +
                              std::to_string(d));
    }
    std::size_t inner_stride = 1;
    for (std::size_t s = pos + 1; s < reg.size(); ++s) inner_stride *= reg.subsystems()[s].dim;
    const std::size_t outer = reg.total_dim() / (d * inner_stride);

    Vector out(psi.amplitudes().size());
    const auto& in = psi.amplitudes();
    Vector fiber(static_cast<Eigen::Index>(d));
    for (std::size_t o = 0; o < outer; ++o) {
        for (std::size_t t = 0; t < inner_stride; ++t) {
            const std::size_t base = o * d * inner_stride + t;
            for (std::size_t l = 0; l < d; ++l) fiber(static_cast<Eigen::Index>(l)) = in(static_cast<Eigen::Index>(base + l * inner_stride));
            const Vector mapped = op * fiber;
            for (std::size_t l = 0; l < d; ++l) out(static_cast<Eigen::Index>(base + l * inner_stride)) = mapped(static_cast<Eigen::Index>(l));
        }
    }
    return StateVector(reg, std::move(out));
}

StateVector reorder(const StateVector& psi, const Registry& target) {
    const auto& src = psi.registry();
    if (src == target) return psi;
    if (src.size() != target.size()) throw StructuralError("reorder: subsystem sets differ");
    for (const auto& s : target.subsystems()) {
        if (!src.contains(s.id) || src.dim(s.id) != s.dim) throw StructuralError("reorder: subsystem sets differ");
    }
    Vector out(psi.amplitudes().size());
    for (std::size_t flat = 0; flat < src.total_dim(); ++flat) {
        const BasisLabel label = src.label(flat);
        BasisLabel permuted;
        for (const auto& s : target.subsystems()) permuted.factors.push_back(label.factors[src.position(s.id)]);
        out(static_cast<Eigen::Index>(target.flat_index(permuted))) = psi.amplitudes()(static_cast<Eigen::Index>(flat));
    }
    return StateVector(target, std::move(out));
}

Projection project_renormalize(const StateVector& psi, std::span<const StateVector> subspace) {
    if (subspace.empty()) throw ArgumentError("project_renormalize: empty subspace");
    const Registry& sub_reg = subspace.front().registry();
    if (sub_reg.size() != 1) throw StructuralError("project_renormalize: subspace vectors must live on one subsystem");
    const SubsystemId& id = sub_reg.subsystems().front().id;
    if (psi.registry().dim(id) != sub_reg.total_dim()) {
        throw StructuralError("project_renormalize: subspace dimension mismatch on '" + id + "'");
    }
    for (std::size_t i = 0; i < subspace.size(); ++i) {
        require_same_registry(sub_reg, subspace[i].registry(), "project_renormalize");
        for (std::size_t j = 0; j <= i; ++j) {
            const double expected = i == j ? 1.0 : 0.0;
            if (std::abs(inner(subspace[i], subspace[j]) - expected) > tol::kDecomposition) {
                throw ArgumentError("project_renormalize: subspace vectors are not orthonormal");
            }
        }
    }
    Matrix projector = Matrix::Zero(static_cast<Eigen::Index>(sub_reg.total_dim()),
                                    static_cast<Eigen::Index>(sub_reg.total_dim()));
    for (const auto& v : subspace) projector += v.amplitudes() * v.amplitudes().adjoint();

    const StateVector projected = apply_local(psi, id, projector);
    const double n = projected.norm();
    if (n < tol::kNullNorm) throw ZeroProbabilityError("project_renormalize: projection has zero probability");
    return {projected.scaled(1.0 / n), n * n};
}

double phase_aligned_deviation(const StateVector& a, const StateVector& b) {
    const Complex overlap = inner(a, b);
    const Complex phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex(1.0);
    return (a.amplitudes() * phase - b.amplitudes()).cwiseAbs().maxCoeff();
}

double isometry_error(const Matrix& transfer) {
    const Matrix gram = transfer.adjoint() * transfer;
    return (gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

}  // namespace eraser::qcore
