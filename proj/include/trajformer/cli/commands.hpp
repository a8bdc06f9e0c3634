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

#ifndef TRAJFORMER_CLI_COMMANDS_HPP_
#define TRAJFORMER_CLI_COMMANDS_HPP_

#include <iosfwd>

#include "trajformer/common/error.hpp"

namespace trajformer::cli {

// 2 missing file, 3 malformed config/file or empty dataset, 4 shape
// mismatch, 1 anything else.
int exit_code(ErrorKind kind);

// `trajformer {dataset|train|eval|predict|plot} ...`. Failures are reported
// as a single line on `err`:
//   error: code=<n> kind=<kind> msg="<text>"
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace trajformer::cli

#endif  // TRAJFORMER_CLI_COMMANDS_HPP_
