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

#include "trajformer/diffgraph/parameters.hpp"

#include "trajformer/common/error.hpp"

namespace trajformer::dg {

std::shared_ptr<Tensor> ParameterSet::add(std::string name, Tensor value) {
  if (find(name)) fail(ErrorKind::kInvalidArgument, "duplicate parameter name " + name);
  auto tensor = std::make_shared<Tensor>(std::move(value));
  tensor->set_requires_grad(true);
  items_.push_back({std::move(name), tensor});
  return tensor;
}

std::shared_ptr<Tensor> ParameterSet::find(std::string_view name) const {
  for (const auto& p : items_) {
    if (p.name == name) return p.tensor;
  }
  return nullptr;
}

std::size_t ParameterSet::element_count() const {
  std::size_t n = 0;
  for (const auto& p : items_) n += p.tensor->numel();
  return n;
}

void ParameterSet::assign_from(const ParameterSet& other) {
  if (other.size() != size()) {
    fail(ErrorKind::kShapeMismatch, "parameter count " + std::to_string(other.size()) +
                                        " vs " + std::to_string(size()));
  }
  for (std::size_t i = 0; i < items_.size(); ++i) {
    const auto& src = other.items_[i];
    auto& dst = items_[i];
    if (src.name != dst.name || src.tensor->shape() != dst.tensor->shape()) {
      throw ShapeError("assign " + dst.name, dst.tensor->shape_string(),
                       src.tensor->shape_string());
    }
    std::copy(src.tensor->data().begin(), src.tensor->data().end(), dst.tensor->data().begin());
  }
}

Tensor truncated_normal(Shape shape, float std, Rng& rng) {
  Tensor t(std::move(shape));
  for (float& v : t.data()) v = static_cast<float>(rng.truncated_normal(std));
  return t;
}

}  // namespace trajformer::dg
