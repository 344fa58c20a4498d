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

#ifndef COMPGCN_TAPE_H_
#define COMPGCN_TAPE_H_

#include <cstdint>
#include <deque>
#include <functional>
#include <span>
#include <vector>

#include "compgcn/tensor.h"

namespace compgcn {

class Tape;

// Handle to a value recorded on a Tape. Cheap to copy; valid for the
// lifetime of the tape that produced it.
class Var {
 public:
  Var() = default;

  const Tensor& value() const;
  const Shape& shape() const { return value().shape(); }
  bool requires_grad() const;
  Tape* tape() const { return tape_; }
  int32_t id() const { return id_; }
  bool valid() const { return tape_ != nullptr; }

 private:
  friend class Tape;
  Var(Tape* tape, int32_t id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  int32_t id_ = -1;
};

// Receives the gradient of the recorded output and accumulates into the
// gradients of its inputs. Entries of `input_grads` are null for inputs that
// do not require a gradient.
using BackwardFn =
    std::function<void(const Tensor& grad_out, std::span<Tensor* const> input_grads)>;

// Reverse-mode differentiation record. Nodes are appended in evaluation
// order, so every node's inputs precede it and a reverse sweep is a valid
// topological traversal.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var Constant(Tensor value);
  // Reads the parameter's current value. After Backward the node gradient is
  // added into `param.grad` when the parameter is trainable.
  Var Leaf(Parameter& param);
  Var Record(Tensor value, std::span<const Var> inputs, BackwardFn backward);

  // Populates gradients for every node the scalar `loss` depends on and
  // accumulates them into leaf parameters. Node gradients are recomputed from
  // scratch on each call; parameter gradients are not cleared.
  void Backward(Var loss);

  const Tensor& value(int32_t id) const { return nodes_[id].value; }
  bool requires_grad(int32_t id) const { return nodes_[id].requires_grad; }
  // Gradient of the last Backward with respect to `v`; empty if none flowed.
  const Tensor& grad(Var v) const;
  size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    std::vector<int32_t> inputs;
    BackwardFn backward;
    Parameter* param = nullptr;
    bool requires_grad = false;
  };

  Var Push(Node node);
  void CheckOwned(Var v) const;

  // A deque keeps value references stable while nodes are appended.
  std::deque<Node> nodes_;
};

}  // namespace compgcn

#endif  // COMPGCN_TAPE_H_
