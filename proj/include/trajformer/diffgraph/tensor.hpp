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

#ifndef TRAJFORMER_DIFFGRAPH_TENSOR_HPP_
#define TRAJFORMER_DIFFGRAPH_TENSOR_HPP_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace trajformer::dg {

using Shape = std::vector<std::int64_t>;

std::size_t shape_numel(const Shape& shape);
std::string shape_to_string(const Shape& shape);

// Dense row-major f32 tensor. Scalars are represented with shape {1}.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape, float fill = 0.0f);
  Tensor(Shape shape, std::vector<float> data);

  static Tensor scalar(float value) { return Tensor({1}, {value}); }
  static Tensor from(std::initializer_list<float> values);

  const Shape& shape() const noexcept { return shape_; }
  int rank() const noexcept { return static_cast<int>(shape_.size()); }
  // Negative axes count from the back.
  std::int64_t dim(int axis) const;
  std::size_t numel() const noexcept { return data_.size(); }
  bool is_scalar() const noexcept { return data_.size() == 1; }

  std::span<float> data() noexcept { return data_; }
  std::span<const float> data() const noexcept { return data_; }
  float* raw() noexcept { return data_.data(); }
  const float* raw() const noexcept { return data_.data(); }
  float& operator[](std::size_t i) { return data_[i]; }
  float operator[](std::size_t i) const { return data_[i]; }
  float item() const;

  bool requires_grad() const noexcept { return requires_grad_; }
  Tensor& set_requires_grad(bool value) noexcept {
    requires_grad_ = value;
    return *this;
  }

  // Same data, new shape; numel must agree.
  Tensor reshaped(Shape shape) const;
  void fill(float value);
  bool all_finite() const noexcept;
  bool bitwise_equal(const Tensor& other) const noexcept;

  std::string shape_string() const { return shape_to_string(shape_); }

 private:
  Shape shape_;
  std::vector<float> data_;
  bool requires_grad_ = false;
};

// Resolves a possibly negative axis against a rank; throws on out-of-range.
int normalize_axis(int axis, int rank, const char* op);

// Splits a shape around `axis` into (outer, length, inner) extents so that
// element (o, i, n) sits at o * length * inner + i * inner + n.
struct AxisExtent {
  std::size_t outer = 1;
  std::size_t length = 1;
  std::size_t inner = 1;
};
AxisExtent axis_extent(const Shape& shape, int axis);

}  // namespace trajformer::dg

#endif  // TRAJFORMER_DIFFGRAPH_TENSOR_HPP_
