// Copyright 2026 The dlvn Authors
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

namespace dlvn {

/// Base of every error raised by the library. `category()` is the short
/// machine-readable tag the CLI prints after "ERROR".
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* category() const noexcept { return "error"; }
};

/// An argument outside the mathematical domain of an operation (T < 0, γ ≤ 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
  const char* category() const noexcept override { return "domain"; }
};

/// Invalid model construction: shape mismatches, non-Hermitian input, bad lead parameters.
class ModelError : public Error {
 public:
  using Error::Error;
  const char* category() const noexcept override { return "model"; }
};

/// A method was called on a model that violates its precondition.
class UsageError : public Error {
 public:
  using Error::Error;
  const char* category() const noexcept override { return "usage"; }
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}
  const char* category() const noexcept override { return "parse"; }
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Linear-algebra failure (singular resolvent, failed Sylvester solve).
class ComputationError : public Error {
 public:
  ComputationError(const std::string& message, double indicator = 0.0)
      : Error(message), indicator_(indicator) {}
  const char* category() const noexcept override { return "computation"; }
  /// Condition estimate or residual, depending on the failing operation.
  double indicator() const noexcept { return indicator_; }

 private:
  double indicator_;
};

class StepSizeError : public ComputationError {
 public:
  using ComputationError::ComputationError;
  const char* category() const noexcept override { return "step-size"; }
};

/// The requested accuracy was not reached. Carries the best available value.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& message, double best_estimate, double achieved_error)
      : Error(message), best_estimate_(best_estimate), achieved_error_(achieved_error) {}
  const char* category() const noexcept override { return "accuracy"; }
  double best_estimate() const noexcept { return best_estimate_; }
  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double best_estimate_;
  double achieved_error_;
};

/// Two estimators of the same quantity disagree; indicates a solver bug.
class ConsistencyError : public Error {
 public:
  using Error::Error;
  const char* category() const noexcept override { return "consistency"; }
};

}  // namespace dlvn
