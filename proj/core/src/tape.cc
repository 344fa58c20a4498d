// Copyright 2026 The CompGCN-cpp Authors.
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

#include "compgcn/tape.h"

#include <stdexcept>
#include <utility>

namespace compgcn {

const Tensor& Var::value() const { return tape_->value(id_); }

bool Var::requires_grad() const { return tape_->requires_grad(id_); }

Var Tape::Push(Node node) {
  nodes_.push_back(std::move(node));
  return Var(this, static_cast<int32_t>(nodes_.size() - 1));
}

void Tape::CheckOwned(Var v) const {
  if (v.tape_ != this || v.id_ < 0 || v.id_ >= static_cast<int32_t>(nodes_.size())) {
    throw std::invalid_argument("variable does not belong to this tape");
  }
}

Var Tape::Constant(Tensor value) {
  Node node;
  node.value = std::move(value);
  return Push(std::move(node));
}

Var Tape::Leaf(Parameter& param) {
  Node node;
  node.value = param.value;
  node.param = &param;
  node.requires_grad = param.trainable;
  return Push(std::move(node));
}

Var Tape::Record(Tensor value, std::span<const Var> inputs, BackwardFn backward) {
  Node node;
  node.value = std::move(value);
  node.inputs.reserve(inputs.size());
  for (const Var& in : inputs) {
    CheckOwned(in);
    node.inputs.push_back(in.id_);
    node.requires_grad = node.requires_grad || nodes_[in.id_].requires_grad;
  }
  if (node.requires_grad) node.backward = std::move(backward);
  return Push(std::move(node));
}

const Tensor& Tape::grad(Var v) const {
  CheckOwned(v);
  return nodes_[v.id_].grad;
}

void Tape::Backward(Var loss) {
  CheckOwned(loss);
  if (loss.value().size() != 1) {
    throw ShapeError("backward requires a scalar loss, got shape " +
                     ShapeToString(loss.value().shape()));
  }
  for (Node& node : nodes_) node.grad = Tensor();
  Node& root = nodes_[loss.id_];
  if (!root.requires_grad) return;
  root.grad = Tensor(root.value.shape(), 1.0);

  std::vector<Tensor*> input_grads;
  for (int32_t id = loss.id_; id >= 0; --id) {
    Node& node = nodes_[id];
    if (!node.requires_grad || node.grad.empty()) continue;
    if (node.param != nullptr) {
      if (node.param->grad.shape() != node.grad.shape()) {
        node.param->grad = Tensor(node.grad.shape());
      }
      auto dst = node.param->grad.data();
      auto src = node.grad.data();
      for (size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
    }
    if (!node.backward) continue;
    input_grads.assign(node.inputs.size(), nullptr);
    for (size_t k = 0; k < node.inputs.size(); ++k) {
      Node& in = nodes_[node.inputs[k]];
      if (!in.requires_grad) continue;
      if (in.grad.empty()) in.grad = Tensor(in.value.shape());
      input_grads[k] = &in.grad;
    }
    node.backward(node.grad, input_grads);
  }
}

}  // namespace compgcn
