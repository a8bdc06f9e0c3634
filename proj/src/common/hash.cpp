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

#include "trajformer/common/hash.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <vector>

#include "trajformer/common/error.hpp"

namespace trajformer {

namespace {
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;
}  // namespace

std::uint64_t fnv1a64(std::span<const std::byte> bytes, std::uint64_t state) {
  for (std::byte b : bytes) {
    state ^= static_cast<std::uint64_t>(b);
    state *= kFnvPrime;
  }
  return state;
}

std::uint64_t fnv1a64(std::string_view text, std::uint64_t state) {
  return fnv1a64(std::as_bytes(std::span(text.data(), text.size())), state);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view purpose,
                          std::uint64_t index) {
  std::array<std::byte, 16> buf{};
  for (int i = 0; i < 8; ++i) {
    buf[i] = static_cast<std::byte>((seed >> (8 * i)) & 0xff);
    buf[8 + i] = static_cast<std::byte>((index >> (8 * i)) & 0xff);
  }
  std::uint64_t h = fnv1a64(std::span<const std::byte>(buf));
  h = fnv1a64(purpose, h);
  return splitmix64(h);
}

std::string to_hex(std::uint64_t value) {
  char out[17];
  std::snprintf(out, sizeof(out), "%016llx",
                static_cast<unsigned long long>(value));
  return out;
}

std::string hash_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kMissingFile, "cannot open " + path);
  std::uint64_t state = 0xcbf29ce484222325ULL;
  std::vector<char> chunk(1 << 16);
  while (in) {
    in.read(chunk.data(), static_cast<std::streamsize>(chunk.size()));
    const auto n = static_cast<std::size_t>(in.gcount());
    state = fnv1a64(std::as_bytes(std::span(chunk.data(), n)), state);
  }
  return to_hex(state);
}

}  // namespace trajformer
