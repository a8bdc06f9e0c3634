// Copyright 2026 The Trajformer Authors.
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

#ifndef TRAJFORMER_COMMON_ERROR_HPP_
#define TRAJFORMER_COMMON_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace trajformer {

enum class ErrorKind {
  kInvalidArgument,
  kShapeMismatch,
  kNonFinite,
  kNonDeterministic,
  kMissingFile,
  kMalformedConfig,
  kMalformedFile,
  kEmptyDataset,
  kDivergence,
  kIo,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Raised by tensor ops when operand shapes do not conform. Carries the op
// name and both offending shapes in printable form.
class ShapeError : public Error {
 public:
  ShapeError(std::string op, std::string lhs, std::string rhs,
             const std::string& detail = {});

  const std::string& op() const noexcept { return op_; }
  const std::string& lhs() const noexcept { return lhs_; }
  const std::string& rhs() const noexcept { return rhs_; }

 private:
  std::string op_;
  std::string lhs_;
  std::string rhs_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) fail(kind, message);
}

}  // namespace trajformer

#endif  // TRAJFORMER_COMMON_ERROR_HPP_
