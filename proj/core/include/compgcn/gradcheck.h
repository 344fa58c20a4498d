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

#ifndef COMPGCN_GRADCHECK_H_
#define COMPGCN_GRADCHECK_H_

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "compgcn/tape.h"
#include "compgcn/tensor.h"

namespace compgcn {

struct GradCheckEntry {
  std::string name;
  double relative_error = 0.0;
  double max_abs_error = 0.0;
};

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::vector<GradCheckEntry> entries;
};

// ||a - b||_2 / max(||a||_2, ||b||_2, floor). The floor keeps parameters
// with vanishing gradients from reporting finite-difference noise as error.
double GradientRelativeError(std::span<const double> analytic, std::span<const double> numeric,
                             double floor = 1e-6);

// Compares reverse-mode gradients of `loss` against central differences
// (f(x + h) - f(x - h)) / 2h for every element of every parameter. `loss`
// must rebuild its computation on the tape it is handed and must be a
// deterministic function of the parameter values. Parameter gradients are
// zeroed on entry and hold the analytic gradient on return.
GradCheckResult CheckGradients(const std::function<Var(Tape&)>& loss,
                               std::span<Parameter* const> params, double step = 1e-5);

}  // namespace compgcn

#endif  // COMPGCN_GRADCHECK_H_
