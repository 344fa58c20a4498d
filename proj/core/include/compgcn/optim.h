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

#ifndef COMPGCN_OPTIM_H_
#define COMPGCN_OPTIM_H_

#include <cstdint>
#include <vector>

#include "compgcn/random.h"
#include "compgcn/tensor.h"

namespace compgcn {

struct AdamOptions {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Adam with bias-corrected moments. Non-trainable parameters are skipped.
class Adam {
 public:
  Adam(std::vector<Parameter*> params, AdamOptions options = {});

  void Step();
  void ZeroGrad();

  int64_t steps() const { return steps_; }
  const AdamOptions& options() const { return options_; }
  void set_lr(double lr) { options_.lr = lr; }
  const Tensor& first_moment(size_t i) const { return m_[i]; }
  const Tensor& second_moment(size_t i) const { return v_[i]; }

 private:
  std::vector<Parameter*> params_;
  AdamOptions options_;
  std::vector<Tensor> m_;
  std::vector<Tensor> v_;
  int64_t steps_ = 0;
};

// Uniform on +-sqrt(6 / (fan_in + fan_out)) for a [fan_in x fan_out] shape.
Tensor XavierUniform(const Shape& shape, Rng& rng);

}  // namespace compgcn

#endif  // COMPGCN_OPTIM_H_
