// Copyright 2026 The readout-sim Authors
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

#ifndef READOUT_ERRORS_HPP
#define READOUT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace readout {

// All library failures derive from Error so callers can map them to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent configuration (unknown mode, bad key, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Argument outside the domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Parametric network at or beyond its oscillation threshold.
class InstabilityError : public Error {
 public:
  using Error::Error;
};

// Fit did not converge or found no feature to fit.
class FitError : public Error {
 public:
  using Error::Error;
};

// More than one resonant feature where exactly one was expected.
class AmbiguityError : public FitError {
 public:
  using FitError::FitError;
};

// Extracted quantities contradict each other beyond statistical tolerance.
class InconsistencyError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace readout

#endif  // READOUT_ERRORS_HPP
