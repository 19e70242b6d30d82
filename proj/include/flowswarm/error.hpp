// Copyright 2026 The flowswarm Authors
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

#ifndef FLOWSWARM_ERROR_HPP
#define FLOWSWARM_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace flowswarm {

// Base of every error raised by the library. Callers that only care about
// "did it work" catch this; the subclasses carry the specific kind.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error { using Error::Error; };

// model
class DuplicateAgent : public Error { using Error::Error; };
class MasterConflict : public Error { using Error::Error; };
class InvalidTransition : public Error { using Error::Error; };
class UnknownAgent : public Error { using Error::Error; };

// Where in a definition document a problem was found. `line`/`column` are
// 1-based and zero when unknown; `field` is a JSON-pointer-like path.
struct Diagnostic {
  std::size_t line = 0;
  std::size_t column = 0;
  std::string field;
  std::string message;

  std::string to_string() const;
};

class DefinitionError : public Error {
 public:
  explicit DefinitionError(Diagnostic diag)
      : Error(diag.to_string()), diagnostic_(std::move(diag)) {}
  const Diagnostic& diagnostic() const { return diagnostic_; }

 private:
  Diagnostic diagnostic_;
};

// definitions
class SyntaxError : public DefinitionError { using DefinitionError::DefinitionError; };
class SchemaError : public DefinitionError { using DefinitionError::DefinitionError; };
class UnresolvedService : public DefinitionError { using DefinitionError::DefinitionError; };
class WeightError : public DefinitionError { using DefinitionError::DefinitionError; };

// costing / metrics
class DomainError : public Error { using Error::Error; };
class PoolTooSmall : public Error { using Error::Error; };

// mcmf
class MalformedNetwork : public Error { using Error::Error; };

// allocator
class EmptyProblem : public Error { using Error::Error; };
class TooManyComponents : public Error { using Error::Error; };

// swarmsim
class KeyAbsent : public Error { using Error::Error; };

// metrics
class EmptyHistory : public Error { using Error::Error; };

}  // namespace flowswarm

#endif  // FLOWSWARM_ERROR_HPP
