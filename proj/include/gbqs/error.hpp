/**
 * Copyright 2026 The gbqs Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace gbqs {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Division or inversion by the zero element of the field.
class DivisionByZero : public Error {
  public:
    DivisionByZero() : Error("division by zero in prime field") {}
};

/// A structural precondition was violated (bad threshold, unknown party, ...).
class InvalidArgument : public Error {
  public:
    using Error::Error;
};

/// An exhaustive routine was asked to run on a universe larger than its bound.
class TooLarge : public Error {
  public:
    using Error::Error;
};

/// Strict LUP factorization hit a column without a usable pivot.
class Unfactorable : public Error {
  public:
    using Error::Error;
};

} // namespace gbqs
