// Copyright 2026 the spdkit authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SPDKIT_ERROR_HPP_
#define SPDKIT_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace spdkit {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Mismatched or invalid shapes (matrix dimensions, image sizes, grids).
struct DimensionError : Error {
  using Error::Error;
};

// Eigensolver non-convergence, overflow, and similar floating-point failures.
struct NumericalError : Error {
  using Error::Error;
};

// A matrix claimed to be positive definite failed certification.
struct NotPositiveDefiniteError : NumericalError {
  using NumericalError::NumericalError;
};

// Training data that no model can be fit to (zero Gram, single class, ...).
struct DegeneracyError : Error {
  using Error::Error;
};

// File-format and filesystem problems.
struct IoError : Error {
  using Error::Error;
};

}  // namespace spdkit

#endif  // SPDKIT_ERROR_HPP_
