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

#include "trajformer/diffgraph/tensor.hpp"

#include <cmath>
#include <cstring>
#include <sstream>

#include "trajformer/common/error.hpp"

namespace trajformer::dg {

std::size_t shape_numel(const Shape& shape) {
  std::size_t n = 1;
  for (auto d : shape) {
    if (d <= 0) {
      fail(ErrorKind::kInvalidArgument, "non-positive dimension in shape " + shape_to_string(shape));
    }
    n *= static_cast<std::size_t>(d);
  }
  return n;
}

std::string shape_to_string(const Shape& shape) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) out << ',';
    out << shape[i];
  }
  out << ']';
  return out.str();
}

Tensor::Tensor(Shape shape, float fill)
    : shape_(std::move(shape)), data_(shape_numel(shape_), fill) {}

Tensor::Tensor(Shape shape, std::vector<float> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (shape_numel(shape_) != data_.size()) {
    fail(ErrorKind::kInvalidArgument,
         "tensor data length " + std::to_string(data_.size()) +
             " does not match shape " + shape_to_string(shape_));
  }
}

Tensor Tensor::from(std::initializer_list<float> values) {
  return Tensor({static_cast<std::int64_t>(values.size())}, std::vector<float>(values));
}

std::int64_t Tensor::dim(int axis) const {
  return shape_[static_cast<std::size_t>(normalize_axis(axis, rank(), "dim"))];
}

float Tensor::item() const {
  if (!is_scalar()) {
    fail(ErrorKind::kInvalidArgument, "item() on non-scalar tensor " + shape_string());
  }
  return data_[0];
}

Tensor Tensor::reshaped(Shape shape) const {
  if (shape_numel(shape) != numel()) {
    throw ShapeError("reshape", shape_string(), shape_to_string(shape));
  }
  Tensor out = *this;
  out.shape_ = std::move(shape);
  return out;
}

void Tensor::fill(float value) {
  std::fill(data_.begin(), data_.end(), value);
}

bool Tensor::all_finite() const noexcept {
  for (float v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

bool Tensor::bitwise_equal(const Tensor& other) const noexcept {
  return shape_ == other.shape_ &&
         std::memcmp(data_.data(), other.data_.data(), data_.size() * sizeof(float)) == 0;
}

int normalize_axis(int axis, int rank, const char* op) {
  const int resolved = axis < 0 ? axis + rank : axis;
  if (resolved < 0 || resolved >= rank) {
    fail(ErrorKind::kInvalidArgument, std::string(op) + ": axis " + std::to_string(axis) +
                                          " out of range for rank " + std::to_string(rank));
  }
  return resolved;
}

AxisExtent axis_extent(const Shape& shape, int axis) {
  AxisExtent e;
  for (int i = 0; i < static_cast<int>(shape.size()); ++i) {
    const auto d = static_cast<std::size_t>(shape[static_cast<std::size_t>(i)]);
    if (i < axis) {
      e.outer *= d;
    } else if (i == axis) {
      e.length = d;
    } else {
      e.inner *= d;
    }
  }
  return e;
}

}  // namespace trajformer::dg
