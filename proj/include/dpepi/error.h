//
// Copyright 2026 The dpepi Authors
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
//

#ifndef DPEPI_ERROR_H_
#define DPEPI_ERROR_H_

#include <stdexcept>
#include <string>

namespace dpepi {

// Base for every error raised by the library. Subclasses mark the failure
// class so callers (and the CLI exit-code mapping) can dispatch on type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An argument violates a documented precondition.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Matrix/vector shapes disagree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A required CSV column is absent. `column()` names it.
class SchemaError : public Error {
 public:
  explicit SchemaError(std::string column)
      : Error("missing required column: " + column),
        column_(std::move(column)) {}
  const std::string& column() const { return column_; }

 private:
  std::string column_;
};

// A data row could not be parsed. `line()` is 1-based, header included.
class RowError : public Error {
 public:
  RowError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

// Input is well-formed but carries no usable mass (e.g. all-zero counts).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

class GenerationError : public Error {
 public:
  using Error::Error;
};

class TrainingError : public Error {
 public:
  using Error::Error;
};

// Correlation requested on a series with zero variance.
class UndefinedCorrelationError : public Error {
 public:
  using Error::Error;
};

class BudgetExceededError : public Error {
 public:
  BudgetExceededError(const std::string& label, double requested,
                      double remaining)
      : Error("privacy budget exceeded by charge '" + label + "' (requested " +
              std::to_string(requested) + ", remaining " +
              std::to_string(remaining) + ")"),
        requested_(requested),
        remaining_(remaining) {}
  double requested() const { return requested_; }
  double remaining() const { return remaining_; }

 private:
  double requested_;
  double remaining_;
};

}  // namespace dpepi

#endif  // DPEPI_ERROR_H_
