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

#ifndef TRAJFORMER_TESTS_TEST_UTIL_HPP_
#define TRAJFORMER_TESTS_TEST_UTIL_HPP_

#include <filesystem>
#include <string>
#include <unistd.h>

#include "trajformer/common/rng.hpp"
#include "trajformer/diffgraph/tensor.hpp"

namespace trajformer::testing {

inline dg::Tensor random_tensor(dg::Shape shape, Rng& rng, double std = 1.0) {
  dg::Tensor t(std::move(shape));
  for (float& v : t.data()) v = static_cast<float>(rng.normal() * std);
  return t;
}

inline dg::Shape random_shape(Rng& rng, int min_rank, int max_rank, int max_dim = 5) {
  const int rank = min_rank + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_rank - min_rank + 1)));
  dg::Shape s(static_cast<std::size_t>(rank));
  for (auto& d : s) d = 1 + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(max_dim)));
  return s;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("trajformer_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace trajformer::testing

#endif  // TRAJFORMER_TESTS_TEST_UTIL_HPP_
