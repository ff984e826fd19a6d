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

#ifndef ERASER_ERRORS_HPP
#define ERASER_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace eraser {

/// Shape or labeling mismatch: overlapping subsystems, bad mode indices,
/// registries that do not line up.
class StructuralError : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

/// A value outside an operation's domain (empty keep set, N = 0, ...).
class ArgumentError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class NormalizationError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Raised instead of renormalizing a (numerically) null projection.
class ZeroProbabilityError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

}  // namespace eraser

#endif  // ERASER_ERRORS_HPP
