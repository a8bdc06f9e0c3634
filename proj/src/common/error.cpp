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

#include "trajformer/common/error.hpp"

namespace trajformer {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "invalid_argument";
    case ErrorKind::kShapeMismatch: return "shape_mismatch";
    case ErrorKind::kNonFinite: return "non_finite";
    case ErrorKind::kNonDeterministic: return "non_deterministic";
    case ErrorKind::kMissingFile: return "missing_file";
    case ErrorKind::kMalformedConfig: return "malformed_config";
    case ErrorKind::kMalformedFile: return "malformed_file";
    case ErrorKind::kEmptyDataset: return "empty_dataset";
    case ErrorKind::kDivergence: return "divergence";
    case ErrorKind::kIo: return "io";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(message), kind_(kind) {}

ShapeError::ShapeError(std::string op, std::string lhs, std::string rhs,
                       const std::string& detail)
    : Error(ErrorKind::kShapeMismatch,
            op + ": shape mismatch " + lhs + " vs " + rhs +
                (detail.empty() ? std::string() : " (" + detail + ")")),
      op_(std::move(op)),
      lhs_(std::move(lhs)),
      rhs_(std::move(rhs)) {}

void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace trajformer
