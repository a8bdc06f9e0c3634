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

#ifndef TRAJFORMER_DIFFGRAPH_GRAPH_HPP_
#define TRAJFORMER_DIFFGRAPH_GRAPH_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "trajformer/diffgraph/tensor.hpp"

namespace trajformer::dg {

enum class OpKind {
  kLeaf,
  kConstant,
  kMatmul,
  kAdd,
  kSub,
  kMul,
  kScale,
  kAddScalar,
  kExp,
  kLog,
  kSqrt,
  kSoftmax,
  kLayerNorm,
  kGelu,
  kReshape,
  kConcat,
  kSlice,
  kSum,
  kMean,
  kLogSumExp,
  kAttention,
};

std::string_view op_name(OpKind op);

using NodeId = std::int32_t;

struct OpRecord {
  OpKind op = OpKind::kLeaf;
  std::vector<NodeId> inputs;
  NodeId output = -1;
};

class Graph;

// Handle to a node of a Graph. Cheap to copy; valid while the graph lives.
class Var {
 public:
  Var() = default;

  Graph* graph() const noexcept { return graph_; }
  NodeId id() const noexcept { return id_; }
  bool valid() const noexcept { return graph_ != nullptr && id_ >= 0; }

  const Tensor& value() const;
  const Shape& shape() const { return value().shape(); }
  std::int64_t dim(int axis) const { return value().dim(axis); }
  bool requires_grad() const;

 private:
  friend class Graph;
  Var(Graph* graph, NodeId id) : graph_(graph), id_(id) {}

  Graph* graph_ = nullptr;
  NodeId id_ = -1;
};

// Accumulates d(loss)/d(input_i) into grad_in[i]; entries are null for
// inputs that do not require gradients.
using BackwardFn = std::function<void(const Tensor& grad_out, std::span<Tensor* const> grad_in)>;

using GradientMap = std::unordered_map<NodeId, Tensor>;

// Tape of tensor operations. Nodes are appended in creation order, which is
// a topological order, so the reverse sweep needs no sorting.
class Graph {
 public:
  explicit Graph(bool grad_enabled = true) : grad_enabled_(grad_enabled) {}
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  bool grad_enabled() const noexcept { return grad_enabled_; }

  Var constant(Tensor value);
  // Leaf whose gradient is tracked iff value.requires_grad() and the graph
  // has gradients enabled.
  Var input(Tensor value);
  // Leaf aliasing a parameter tensor (no copy). Repeated calls with the same
  // tensor return the same node.
  Var parameter(const std::shared_ptr<Tensor>& tensor);
  // Routes later parameter() calls for `tensor` to `replacement`.
  void bind_parameter(const Tensor* tensor, Var replacement);

  Var record(OpKind op, std::span<const Var> inputs, Tensor value, BackwardFn backward);
  Var record(OpKind op, std::initializer_list<Var> inputs, Tensor value, BackwardFn backward) {
    return record(op, std::span<const Var>(inputs.begin(), inputs.size()), std::move(value),
                  std::move(backward));
  }

  const Tensor& value(NodeId id) const { return *nodes_.at(static_cast<std::size_t>(id)).value; }
  bool requires_grad(NodeId id) const {
    return nodes_.at(static_cast<std::size_t>(id)).requires_grad;
  }

  // Reverse sweep from a scalar loss. Returns gradients of every leaf that
  // requires grad and is reachable from the loss.
  const GradientMap& backward(Var loss);

  const Tensor* grad(Var v) const;
  const Tensor* parameter_grad(const Tensor* tensor) const;

  std::span<const OpRecord> records() const { return records_; }
  std::size_t size() const noexcept { return nodes_.size(); }

 private:
  struct Node {
    std::shared_ptr<const Tensor> value;
    bool requires_grad = false;
    bool leaf = false;
    BackwardFn backward;
  };

  Var add_leaf(OpKind op, std::shared_ptr<const Tensor> value, bool requires_grad);

  bool grad_enabled_;
  std::vector<Node> nodes_;
  std::vector<OpRecord> records_;
  std::unordered_map<const Tensor*, NodeId> parameter_nodes_;
  GradientMap leaf_grads_;
  bool backward_done_ = false;
};

}  // namespace trajformer::dg

#endif  // TRAJFORMER_DIFFGRAPH_GRAPH_HPP_
