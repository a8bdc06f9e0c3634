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

#ifndef TRAJFORMER_COMMON_HASH_HPP_
#define TRAJFORMER_COMMON_HASH_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace trajformer {

std::uint64_t fnv1a64(std::span<const std::byte> bytes,
                      std::uint64_t state = 0xcbf29ce484222325ULL);
std::uint64_t fnv1a64(std::string_view text,
                      std::uint64_t state = 0xcbf29ce484222325ULL);

std::uint64_t splitmix64(std::uint64_t x);

// Stable sub-seed for (seed, purpose, index). Every random stream in the
// project is derived through this so one user seed controls everything.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view purpose,
                          std::uint64_t index = 0);

std::string to_hex(std::uint64_t value);

// FNV-1a 64 of a whole file, hex encoded. Throws kMissingFile.
std::string hash_file(const std::string& path);

}  // namespace trajformer

#endif  // TRAJFORMER_COMMON_HASH_HPP_
