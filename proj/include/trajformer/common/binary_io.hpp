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

#ifndef TRAJFORMER_COMMON_BINARY_IO_HPP_
#define TRAJFORMER_COMMON_BINARY_IO_HPP_

#include <array>
#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>

#include "trajformer/common/error.hpp"

// Little-endian primitives shared by the checkpoint and dataset formats.
namespace trajformer::binary {

template <typename UInt>
void write_le(std::ostream& out, UInt value) {
  std::array<char, sizeof(UInt)> buf{};
  for (std::size_t i = 0; i < sizeof(UInt); ++i) {
    buf[i] = static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xff);
  }
  out.write(buf.data(), buf.size());
}

inline void write_u8(std::ostream& out, std::uint8_t v) { write_le(out, v); }
inline void write_u32(std::ostream& out, std::uint32_t v) { write_le(out, v); }
inline void write_u64(std::ostream& out, std::uint64_t v) { write_le(out, v); }
inline void write_f32(std::ostream& out, float v) {
  write_le(out, std::bit_cast<std::uint32_t>(v));
}

inline void write_string(std::ostream& out, const std::string& s) {
  write_u32(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

template <typename UInt>
UInt read_le(std::istream& in, const char* what) {
  std::array<unsigned char, sizeof(UInt)> buf{};
  in.read(reinterpret_cast<char*>(buf.data()), buf.size());
  if (!in) fail(ErrorKind::kMalformedFile, std::string("truncated file while reading ") + what);
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(UInt); ++i) v |= std::uint64_t{buf[i]} << (8 * i);
  return static_cast<UInt>(v);
}

inline std::uint8_t read_u8(std::istream& in, const char* what) {
  return read_le<std::uint8_t>(in, what);
}
inline std::uint32_t read_u32(std::istream& in, const char* what) {
  return read_le<std::uint32_t>(in, what);
}
inline std::uint64_t read_u64(std::istream& in, const char* what) {
  return read_le<std::uint64_t>(in, what);
}
inline float read_f32(std::istream& in, const char* what) {
  return std::bit_cast<float>(read_le<std::uint32_t>(in, what));
}

inline std::string read_string(std::istream& in, std::uint32_t max_len, const char* what) {
  const auto n = read_u32(in, what);
  if (n > max_len) fail(ErrorKind::kMalformedFile, std::string("oversized string in ") + what);
  std::string s(n, '\0');
  in.read(s.data(), n);
  if (!in) fail(ErrorKind::kMalformedFile, std::string("truncated file while reading ") + what);
  return s;
}

}  // namespace trajformer::binary

#endif  // TRAJFORMER_COMMON_BINARY_IO_HPP_
