// Copyright 2026 The luderscope Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace luderscope {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operator shapes or subsystem factorizations that do not fit together.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An argument outside the mathematical domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

class NotHermitianError : public Error {
 public:
  using Error::Error;
};

class NotPsdError : public Error {
 public:
  using Error::Error;
};

/// Eigensolver failure or a decomposition whose residual is out of tolerance.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Requested the post-measurement state of an outcome with vanishing probability.
class UndefinedPostStateError : public Error {
 public:
  using Error::Error;
};

/// Advantage ratio requested for a pair with zero measurement distance.
class UndefinedAdvantageError : public Error {
 public:
  using Error::Error;
};

/// Malformed or invalid user input (ensemble files, POVMs, priors).
class InputError : public Error {
 public:
  using Error::Error;
};

/// The conic solver did not reach the requested accuracy.
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace luderscope
