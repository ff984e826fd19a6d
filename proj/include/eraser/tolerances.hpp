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

#ifndef ERASER_TOLERANCES_HPP
#define ERASER_TOLERANCES_HPP

namespace eraser::tol {

// Repo-wide tolerance table.

/// Exact algebraic identities (unitarity, traces, closed-form state equality).
inline constexpr double kExact = 1e-12;
/// Anything that goes through a decomposition (SVD, eigen-solver).
inline constexpr double kDecomposition = 1e-10;
/// Lowest eigenvalue accepted for a density operator.
inline constexpr double kEigenFloor = -1e-10;
/// A projection whose norm falls below this is treated as null.
inline constexpr double kNullNorm = 1e-14;
/// Overlap / visibility criteria.
inline constexpr double kOverlap = 1e-9;
/// Schmidt coefficients below this are dropped.
inline constexpr double kSchmidtCutoff = 1e-12;

}  // namespace eraser::tol

#endif  // ERASER_TOLERANCES_HPP
