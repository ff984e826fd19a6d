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

#ifndef ERASER_QCORE_HPP
#define ERASER_QCORE_HPP

// Dense labeled tensor-product states and density operators.
//
// A Registry is an ordered list of subsystems; that order is the canonical
// order of the factors in every BasisLabel and of the row-major flattening
// (first subsystem most significant). All values are immutable after
// construction.

#include <complex>
#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "eraser/kernels.hpp"

namespace eraser::qcore {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using SubsystemId = std::string;
using SubsystemSet = std::set<SubsystemId>;

inline constexpr Complex kI{0.0, 1.0};

struct Subsystem {
    SubsystemId id;
    std::size_t dim = 1;

    friend bool operator==(const Subsystem&, const Subsystem&) = default;
};

/// One basis ket of a composite space: (subsystem, level) per factor.
struct BasisLabel {
    std::vector<std::pair<SubsystemId, std::size_t>> factors;

    friend bool operator==(const BasisLabel&, const BasisLabel&) = default;
};

class Registry {
  public:
    Registry() = default;
    explicit Registry(std::vector<Subsystem> subsystems);

    std::span<const Subsystem> subsystems() const { return subsystems_; }
    std::size_t size() const { return subsystems_.size(); }
    std::size_t total_dim() const;

    bool contains(const SubsystemId& id) const;
    /// Position of `id` in canonical order; StructuralError if absent.
    std::size_t position(const SubsystemId& id) const;
    std::size_t dim(const SubsystemId& id) const;

    /// Subsystems of `*this` followed by those of `other`. Overlap is a
    /// StructuralError.
    Registry concat(const Registry& other) const;
    /// The subsystems named in `keep`, in canonical order.
    Registry subset(const SubsystemSet& keep) const;

    std::size_t flat_index(const BasisLabel& label) const;
    BasisLabel label(std::size_t flat) const;

    friend bool operator==(const Registry&, const Registry&) = default;

  private:
    std::vector<Subsystem> subsystems_;
};

class StateVector {
  public:
    StateVector(Registry registry, Vector amplitudes);

    static StateVector basis(const Registry& registry, const BasisLabel& label);
    /// |level> on a single subsystem of dimension `dim`.
    static StateVector basis(const SubsystemId& id, std::size_t dim, std::size_t level);
    static StateVector from_amplitudes(const SubsystemId& id, std::span<const Complex> amplitudes);

    const Registry& registry() const { return registry_; }
    const Vector& amplitudes() const { return amplitudes_; }
    std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }
    Complex amplitude(const BasisLabel& label) const;

    double squared_norm() const { return amplitudes_.squaredNorm(); }
    double norm() const { return amplitudes_.norm(); }
    bool is_normalized(double tol = 1e-12) const;

    /// NormalizationError on a null vector.
    StateVector normalized() const;
    StateVector scaled(Complex factor) const;

    friend StateVector operator+(const StateVector& a, const StateVector& b);
    friend StateVector operator-(const StateVector& a, const StateVector& b);

  private:
    Registry registry_;
    Vector amplitudes_;
};

class DensityOperator {
  public:
    /// Checked construction: Hermitian and unit trace within 1e-12, smallest
    /// eigenvalue >= -1e-10.
    static DensityOperator from_matrix(Registry registry, Matrix matrix);

    const Registry& registry() const { return registry_; }
    const Matrix& matrix() const { return matrix_; }
    std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }

    Complex trace() const { return matrix_.trace(); }
    /// max |rho - rho^H| over entries.
    double hermiticity_error() const;
    /// Ascending.
    std::vector<double> eigenvalues() const;

    /// Max elementwise |this - other|; StructuralError on registry mismatch.
    double max_abs_diff(const DensityOperator& other) const;

  private:
    friend DensityOperator pure_density(const StateVector& psi);
    friend DensityOperator partial_trace(const StateVector& psi, const SubsystemSet& keep,
                                         kernels::Exec exec);
    friend DensityOperator partial_trace(const DensityOperator& rho, const SubsystemSet& keep,
                                         kernels::Exec exec);
    friend DensityOperator mixture(std::span<const double> weights,
                                   std::span<const DensityOperator> operators);

    DensityOperator(Registry registry, Matrix matrix)
        : registry_(std::move(registry)), matrix_(std::move(matrix)) {}

    Registry registry_;
    Matrix matrix_;
};

struct SchmidtDecomposition {
    /// Nonincreasing, strictly positive (cut at tol::kSchmidtCutoff).
    std::vector<double> coefficients;
    std::vector<StateVector> left;
    std::vector<StateVector> right;
    /// Registry of the decomposed state, used to restore factor order.
    Registry parent;

    StateVector reconstruct() const;
    /// Largest deviation of the left/right Gram matrices from identity.
    double orthonormality_error() const;
};

struct Projection {
    StateVector state;
    double probability = 0.0;
};

StateVector tensor(const StateVector& a, const StateVector& b);

/// <a|b>, conjugate-linear in `a`.
Complex inner(const StateVector& a, const StateVector& b);

/// NormalizationError unless `psi` has unit norm within 1e-12.
DensityOperator pure_density(const StateVector& psi);

/// Reduced operator on `keep`; ArgumentError if `keep` is empty or covers
/// every subsystem, StructuralError if it names an unknown subsystem.
DensityOperator partial_trace(const StateVector& psi, const SubsystemSet& keep,
                              kernels::Exec exec = kernels::default_exec());
DensityOperator partial_trace(const DensityOperator& rho, const SubsystemSet& keep,
                              kernels::Exec exec = kernels::default_exec());

/// Convex combination; weights must be nonnegative and sum to 1.
DensityOperator mixture(std::span<const double> weights, std::span<const DensityOperator> operators);

/// Schmidt decomposition across the (`left`, complement) split, computed as
/// the SVD of the reshaped coefficient matrix.
SchmidtDecomposition schmidt(const StateVector& psi, const SubsystemSet& left);

/// Projects onto span(subspace) on one subsystem and renormalizes. The
/// subspace vectors must be orthonormal within 1e-10 and share a single
/// subsystem of `psi`. ZeroProbabilityError if the projection norm is
/// below 1e-14.
Projection project_renormalize(const StateVector& psi, std::span<const StateVector> subspace);

/// Applies `op` (dim x dim) to subsystem `id` of `psi`, identity elsewhere.
StateVector apply_local(const StateVector& psi, const SubsystemId& id, const Matrix& op);

/// Same state with its subsystems reordered to `target` (same subsystem set).
StateVector reorder(const StateVector& psi, const Registry& target);

/// Max elementwise |e^{i theta} a - b| with theta chosen to align a with b.
double phase_aligned_deviation(const StateVector& a, const StateVector& b);

/// Isometry defect max |U^H U - I|.
double isometry_error(const Matrix& transfer);

}  // namespace eraser::qcore

#endif  // ERASER_QCORE_HPP
