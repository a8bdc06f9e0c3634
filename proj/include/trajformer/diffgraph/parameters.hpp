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

#ifndef TRAJFORMER_DIFFGRAPH_PARAMETERS_HPP_
#define TRAJFORMER_DIFFGRAPH_PARAMETERS_HPP_

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "trajformer/common/rng.hpp"
#include "trajformer/diffgraph/tensor.hpp"

namespace trajformer::dg {

struct NamedParameter {
  std::string name;
  std::shared_ptr<Tensor> tensor;
};

// Ordered registry of trainable tensors. Registration order is the
// checkpoint order and the optimizer iteration order.
class ParameterSet {
 public:
  std::shared_ptr<Tensor> add(std::string name, Tensor value);

  const std::vector<NamedParameter>& items() const noexcept { return items_; }
  std::shared_ptr<Tensor> find(std::string_view name) const;
  std::size_t size() const noexcept { return items_.size(); }
  std::size_t element_count() const;

  // Copies values from `other`; names and shapes must match exactly.
  void assign_from(const ParameterSet& other);

 private:
  std::vector<NamedParameter> items_;
};

// Truncated normal (cut at two standard deviations).
Tensor truncated_normal(Shape shape, float std, Rng& rng);

}  // namespace trajformer::dg

#endif  // TRAJFORMER_DIFFGRAPH_PARAMETERS_HPP_
