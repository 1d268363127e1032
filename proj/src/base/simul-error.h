// base/simul-error.h

// Copyright 2026  The simulmt Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef SIMUL_BASE_SIMUL_ERROR_H_
#define SIMUL_BASE_SIMUL_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace simul {

/// Root of every error thrown by this library.  The CLI maps any SimulError
/// to a one-line "error: <kind>: <message>" report and a nonzero exit code.
class SimulError : public std::runtime_error {
 public:
  SimulError(const std::string &kind, const std::string &what)
      : std::runtime_error(what), kind_(kind) {}
  const std::string &kind() const { return kind_; }

 private:
  std::string kind_;
};

/// An action was offered in a state where the transition function is
/// undefined (reading past the end of the source, anything after eos, a
/// token that is not in the vocabulary).
class InapplicableActionError : public SimulError {
 public:
  InapplicableActionError(const std::string &what, std::ptrdiff_t index = -1)
      : SimulError("inapplicable_action", what), index_(index) {}
  /// Position in the replayed sequence, or -1 for a single application.
  std::ptrdiff_t index() const { return index_; }

 private:
  std::ptrdiff_t index_;
};

/// The oracle was queried outside of its domain of in-progress prefix pairs.
class OracleDomainError : public SimulError {
 public:
  explicit OracleDomainError(const std::string &what)
      : SimulError("oracle_domain", what) {}
};

/// Invalid configuration; carries every violated field at once.
class ConfigError : public SimulError {
 public:
  explicit ConfigError(std::vector<std::string> violations);
  const std::vector<std::string> &violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

/// A loss or score became NaN/inf.
class NumericError : public SimulError {
 public:
  explicit NumericError(const std::string &what)
      : SimulError("numeric", what) {}
};

/// Malformed input files, checkpoints, or unreadable paths.
class FormatError : public SimulError {
 public:
  explicit FormatError(const std::string &what) : SimulError("format", what) {}
};

/// Collects config violations and throws them together.
class ConfigChecker {
 public:
  void Require(bool ok, const std::string &violation) {
    if (!ok) violations_.push_back(violation);
  }
  void Throw() const {
    if (!violations_.empty()) throw ConfigError(violations_);
  }

 private:
  std::vector<std::string> violations_;
};

inline ConfigError::ConfigError(std::vector<std::string> violations)
    : SimulError("config",
                 [&] {
                   std::string msg;
                   for (size_t i = 0; i < violations.size(); ++i) {
                     if (i) msg += "; ";
                     msg += violations[i];
                   }
                   return msg;
                 }()),
      violations_(std::move(violations)) {}

}  // namespace simul

#endif  // SIMUL_BASE_SIMUL_ERROR_H_
