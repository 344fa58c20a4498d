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

#include "compgcn/gradcheck.h"

#include <algorithm>
#include <cmath>

namespace compgcn {

double GradientRelativeError(std::span<const double> analytic, std::span<const double> numeric,
                             double floor) {
  double diff2 = 0.0, a2 = 0.0, n2 = 0.0;
  for (size_t i = 0; i < analytic.size(); ++i) {
    const double d = analytic[i] - numeric[i];
    diff2 += d * d;
    a2 += analytic[i] * analytic[i];
    n2 += numeric[i] * numeric[i];
  }
  const double denom = std::max({std::sqrt(a2), std::sqrt(n2), floor});
  return std::sqrt(diff2) / denom;
}

GradCheckResult CheckGradients(const std::function<Var(Tape&)>& loss,
                               std::span<Parameter* const> params, double step) {
  for (Parameter* p : params) p->grad = Tensor(p->value.shape());
  {
    Tape tape;
    Var out = loss(tape);
    tape.Backward(out);
  }
  auto evaluate = [&loss]() {
    Tape tape;
    return loss(tape).value().item();
  };

  GradCheckResult result;
  for (Parameter* p : params) {
    std::vector<double> numeric(p->value.size());
    for (int64_t i = 0; i < p->value.size(); ++i) {
      const double saved = p->value[i];
      p->value[i] = saved + step;
      const double up = evaluate();
      p->value[i] = saved - step;
      const double down = evaluate();
      p->value[i] = saved;
      numeric[i] = (up - down) / (2.0 * step);
    }
    GradCheckEntry entry;
    entry.name = p->name;
    entry.relative_error = GradientRelativeError(p->grad.data(), numeric);
    for (size_t i = 0; i < numeric.size(); ++i) {
      entry.max_abs_error = std::max(entry.max_abs_error, std::abs(p->grad[i] - numeric[i]));
    }
    result.max_relative_error = std::max(result.max_relative_error, entry.relative_error);
    result.entries.push_back(std::move(entry));
  }
  return result;
}

}  // namespace compgcn
