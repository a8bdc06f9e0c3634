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

#include "trajformer/diffgraph/graph.hpp"

#include <string>

#include "trajformer/common/error.hpp"

namespace trajformer::dg {

std::string_view op_name(OpKind op) {
  switch (op) {
    case OpKind::kLeaf: return "leaf";
    case OpKind::kConstant: return "constant";
    case OpKind::kMatmul: return "matmul";
    case OpKind::kAdd: return "add";
    case OpKind::kSub: return "sub";
    case OpKind::kMul: return "mul";
    case OpKind::kScale: return "scale";
    case OpKind::kAddScalar: return "add_scalar";
    case OpKind::kExp: return "exp";
    case OpKind::kLog: return "log";
    case OpKind::kSqrt: return "sqrt";
    case OpKind::kSoftmax: return "softmax";
    case OpKind::kLayerNorm: return "layer_norm";
    case OpKind::kGelu: return "gelu";
    case OpKind::kReshape: return "reshape";
    case OpKind::kConcat: return "concat";
    case OpKind::kSlice: return "slice";
    case OpKind::kSum: return "sum";
    case OpKind::kMean: return "mean";
    case OpKind::kLogSumExp: return "logsumexp";
    case OpKind::kAttention: return "scaled_dot_product_attention";
  }
  return "unknown";
}

const Tensor& Var::value() const {
  if (!valid()) fail(ErrorKind::kInvalidArgument, "use of an empty Var");
  return graph_->value(id_);
}

bool Var::requires_grad() const { return valid() && graph_->requires_grad(id_); }

Var Graph::add_leaf(OpKind op, std::shared_ptr<const Tensor> value, bool requires_grad) {
  if (!value->all_finite()) {
    fail(ErrorKind::kNonFinite, std::string(op_name(op)) + ": non-finite leaf value");
  }
  const auto id = static_cast<NodeId>(nodes_.size());
  nodes_.push_back(Node{std::move(value), requires_grad && grad_enabled_, true, {}});
  records_.push_back(OpRecord{op, {}, id});
  return Var(this, id);
}

Var Graph::constant(Tensor value) {
  return add_leaf(OpKind::kConstant, std::make_shared<const Tensor>(std::move(value)), false);
}

Var Graph::input(Tensor value) {
  const bool rg = value.requires_grad();
  return add_leaf(OpKind::kLeaf, std::make_shared<const Tensor>(std::move(value)), rg);
}

Var Graph::parameter(const std::shared_ptr<Tensor>& tensor) {
  if (!tensor) fail(ErrorKind::kInvalidArgument, "null parameter tensor");
  const auto it = parameter_nodes_.find(tensor.get());
  if (it != parameter_nodes_.end()) return Var(this, it->second);
  Var v = add_leaf(OpKind::kLeaf, std::shared_ptr<const Tensor>(tensor), true);
  parameter_nodes_.emplace(tensor.get(), v.id());
  return v;
}

void Graph::bind_parameter(const Tensor* tensor, Var replacement) {
  if (replacement.graph() != this) {
    fail(ErrorKind::kInvalidArgument, "bind_parameter: Var belongs to another graph");
  }
  if (replacement.shape() != tensor->shape()) {
    throw ShapeError("bind_parameter", tensor->shape_string(),
                     shape_to_string(replacement.shape()));
  }
  parameter_nodes_[tensor] = replacement.id();
}

Var Graph::record(OpKind op, std::span<const Var> inputs, Tensor value, BackwardFn backward) {
  if (!value.all_finite()) {
    fail(ErrorKind::kNonFinite,
         std::string(op_name(op)) + ": produced non-finite values, output shape " +
             value.shape_string());
  }
  OpRecord rec{op, {}, static_cast<NodeId>(nodes_.size())};
  bool any_grad = false;
  for (const Var& v : inputs) {
    if (v.graph() != this) fail(ErrorKind::kInvalidArgument, "op input from another graph");
    rec.inputs.push_back(v.id());
    any_grad = any_grad || requires_grad(v.id());
  }
  const bool needs = grad_enabled_ && any_grad;
  nodes_.push_back(Node{std::make_shared<const Tensor>(std::move(value)), needs, false,
                        needs ? std::move(backward) : BackwardFn{}});
  records_.push_back(std::move(rec));
  return Var(this, records_.back().output);
}

const GradientMap& Graph::backward(Var loss) {
  if (loss.graph() != this) fail(ErrorKind::kInvalidArgument, "backward: loss from another graph");
  if (!loss.value().is_scalar()) {
    fail(ErrorKind::kInvalidArgument,
         "backward: loss must be scalar, got shape " + loss.value().shape_string());
  }
  if (backward_done_) fail(ErrorKind::kInvalidArgument, "backward: already run on this graph");
  backward_done_ = true;
  leaf_grads_.clear();
  if (!requires_grad(loss.id())) return leaf_grads_;

  std::vector<std::optional<Tensor>> grads(nodes_.size());
  grads[static_cast<std::size_t>(loss.id())] = Tensor(loss.shape(), 1.0f);

  std::vector<Tensor*> slots;
  for (NodeId id = loss.id(); id >= 0; --id) {
    const auto idx = static_cast<std::size_t>(id);
    if (!grads[idx]) continue;
    Node& node = nodes_[idx];
    if (node.leaf) {
      leaf_grads_.emplace(id, std::move(*grads[idx]));
      grads[idx].reset();
      continue;
    }
    const OpRecord& rec = records_[idx];
    slots.assign(rec.inputs.size(), nullptr);
    for (std::size_t i = 0; i < rec.inputs.size(); ++i) {
      const auto in = static_cast<std::size_t>(rec.inputs[i]);
      if (!nodes_[in].requires_grad) continue;
      if (!grads[in]) grads[in] = Tensor(nodes_[in].value->shape(), 0.0f);
      slots[i] = &*grads[in];
    }
    node.backward(*grads[idx], slots);
    grads[idx].reset();
  }
  return leaf_grads_;
}

const Tensor* Graph::grad(Var v) const {
  const auto it = leaf_grads_.find(v.id());
  return it == leaf_grads_.end() ? nullptr : &it->second;
}

const Tensor* Graph::parameter_grad(const Tensor* tensor) const {
  const auto it = parameter_nodes_.find(tensor);
  if (it == parameter_nodes_.end()) return nullptr;
  const auto g = leaf_grads_.find(it->second);
  return g == leaf_grads_.end() ? nullptr : &g->second;
}

}  // namespace trajformer::dg
