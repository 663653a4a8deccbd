// Copyright 2026 The OI Lab Authors.
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

#ifndef OILAB_ERROR_H_
#define OILAB_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace oilab {

// Base class of every error raised by the library. The CLI maps the
// subclasses onto exit codes (see tools/oilab_main.cc).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Individual does not belong to the universe (dimension mismatch).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration: bad parameters, unsupported mode, missing budget.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// An oracle-access rule asked for more predictor evaluations than declared.
class QueryBudgetExceeded : public Error {
 public:
  using Error::Error;
};

class NonTermination : public Error {
 public:
  using Error::Error;
};

class EmptySubpopulation : public Error {
 public:
  using Error::Error;
};

class NotDeterministic : public Error {
 public:
  using Error::Error;
};

// A precondition stated about the inputs of a check does not hold.
class HypothesisViolated : public Error {
 public:
  using Error::Error;
};

class PropertyNotSatisfied : public Error {
 public:
  using Error::Error;
};

// A reduction received oracle answers that cannot come from a correct oracle.
class OracleInconsistent : public Error {
 public:
  using Error::Error;
};

// Reading or writing a file failed; carries the OS message.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace oilab

#endif  // OILAB_ERROR_H_
