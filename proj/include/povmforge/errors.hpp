// Copyright 2026 The povmforge Authors
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

#ifndef POVMFORGE_ERRORS_HPP
#define POVMFORGE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace povmforge {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Input was expected to be Hermitian, unitary, orthonormal or PSD and is not.
class StructureError : public Error {
 public:
  using Error::Error;
};

/// 1/alpha^2 + 1/beta^2 + 1/gamma^2 + 1/delta^2 != 1.
class NormalizationError : public Error {
 public:
  using Error::Error;
};

/// 4 q^2 exceeds min(alpha^2, ..., delta^2); P5 would be indefinite.
class PositivityError : public Error {
 public:
  using Error::Error;
};

/// 1/q^2 outside [1, 4], or a non-finite/zero parameter.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Ancilla measurement landed on 101, 110 or 111.
class UnreachableOutcome : public Error {
 public:
  using Error::Error;
};

}  // namespace povmforge

#endif  // POVMFORGE_ERRORS_HPP
