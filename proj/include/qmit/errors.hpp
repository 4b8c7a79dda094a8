// Copyright 2026 The qmit authors
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

#ifndef QMIT_ERRORS_HPP
#define QMIT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qmit {

// Base class for all errors raised by the library. `kind()` is a stable
// machine-readable tag used by the CLI's structured error output, and
// `exit_code()` is what the CLI process should return for this failure.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string &message, int exit_code)
      : std::runtime_error(message), kind_(std::move(kind)), exit_code_(exit_code) {}
  const std::string &kind() const { return kind_; }
  int exit_code() const { return exit_code_; }

 private:
  std::string kind_;
  int exit_code_;
};

// A caller handed us input that violates a documented precondition
// (malformed records, out-of-range probabilities, mismatched sizes, ...).
class ContractViolation : public Error {
 public:
  explicit ContractViolation(const std::string &message)
      : Error("contract_violation", message, 1) {}
};

// Calibration data that cannot support mitigation, e.g. a confusion matrix
// column that is entirely one-sided or a response row with no mass.
class DegenerateCalibration : public Error {
 public:
  explicit DegenerateCalibration(const std::string &message)
      : Error("degenerate_calibration", message, 1) {}
};

// A per-qubit confusion matrix is numerically singular and cannot be
// inverted for matrix-inversion mitigation.
class SingularMatrix : public Error {
 public:
  explicit SingularMatrix(const std::string &message)
      : Error("singular_matrix", message, 1) {}
};

// An internal invariant failed. This always indicates a bug in qmit itself,
// never bad user input; it is kept as an exception so long batch runs fail
// loudly instead of emitting silently wrong populations.
class InternalConsistencyError : public Error {
 public:
  explicit InternalConsistencyError(const std::string &message)
      : Error("internal_consistency", message, 1) {}
};

// The requested problem exceeds the configured memory budget. The message
// names the sizes involved so the caller can shrink the instance or raise
// the budget deliberately.
class ResourceError : public Error {
 public:
  explicit ResourceError(const std::string &message)
      : Error("resource_exhausted", message, 2) {}
};

}  // namespace qmit

#endif  // QMIT_ERRORS_HPP
