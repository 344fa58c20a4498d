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

#ifndef COMPGCN_OPS_H_
#define COMPGCN_OPS_H_

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string_view>

#include "compgcn/random.h"
#include "compgcn/tape.h"
#include "compgcn/tensor.h"

namespace compgcn {

// Raised when a loss sees non-finite inputs.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Activation { kIdentity, kTanh, kRelu };
enum class ElementwiseOp { kAdd, kSub, kMul };

std::string_view ActivationName(Activation a);
Activation ParseActivation(std::string_view name);

// out[k] = sum_i a[i] * b[(i + k) mod d], summed in increasing i.
void CircularCorrelate(std::span<const double> a, std::span<const double> b,
                       std::span<double> out);

// Shapes must be [m x k] and [k x n].
Var MatMul(Var a, Var b);
Var Transpose(Var a);

// Identical shapes, or either operand holding a single element.
Var Elementwise(ElementwiseOp op, Var a, Var b);
inline Var Add(Var a, Var b) { return Elementwise(ElementwiseOp::kAdd, a, b); }
inline Var Sub(Var a, Var b) { return Elementwise(ElementwiseOp::kSub, a, b); }
inline Var Mul(Var a, Var b) { return Elementwise(ElementwiseOp::kMul, a, b); }
inline Var operator+(Var a, Var b) { return Add(a, b); }
inline Var operator-(Var a, Var b) { return Sub(a, b); }
inline Var operator*(Var a, Var b) { return Mul(a, b); }

// Rank 1 vectors of equal length, or rank 2 matrices correlated row by row.
Var CircularCorrelation(Var a, Var b);

Var Activate(Activation kind, Var x);

// Inverted dropout: survivors are scaled by 1/(1-p) in training mode; the
// identity otherwise. Requires 0 <= p < 1.
Var Dropout(Var x, double p, Rng& rng, bool training);

Var Sum(Var x);

// Row gather/scatter. A rank 1 operand is treated as a column of scalars.
Var GatherRows(Var x, std::span<const int32_t> index);
Var ScatterAddRows(Var x, std::span<const int32_t> index, int64_t num_rows);

// x is [n x d] and scales is [n]; row i of the result is scales[i] * x[i].
Var ScaleRows(Var x, Var scales);

// Mean of the rows of x sharing a segment id, giving [num_segments x d].
// Every segment must be non-empty. Each sum is taken in ascending value
// order, making the result invariant to the order of member rows.
Var SegmentMean(Var x, std::span<const int32_t> segment, int64_t num_segments);

// out[b][n] = -||queries[b] - candidates[n]||_p for p in {1, 2}.
Var NegativeDistances(Var queries, Var candidates, int p);

// (1 - eps) * y + eps / n where n is the size of the last axis.
Tensor SmoothLabels(const Tensor& targets, double eps);

// Mean binary cross entropy of sigmoid(logits) against label-smoothed
// targets, in the overflow-free form max(l, 0) - l * y + log1p(exp(-|l|)).
Var BceWithLabelSmoothing(Var logits, const Tensor& targets, double eps);

// Mean over rows of -log softmax(logits)[label].
Var SoftmaxCrossEntropy(Var logits, std::span<const int32_t> labels);

}  // namespace compgcn

#endif  // COMPGCN_OPS_H_
