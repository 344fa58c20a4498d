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


#ifndef COMPGCN_GRADIENT_SUITE_H_
#define COMPGCN_GRADIENT_SUITE_H_

#include <cstdint>

#include "compgcn/gradcheck.h"

namespace compgcn {

// Finite-difference checks of every differentiable op on `trials` random
// inputs each. Entry names look like "matmul#3/a".
GradCheckResult RunOpGradientSuite(uint64_t seed, int trials = 20);

// Finite-difference check of encoder + DistMult + label-smoothed BCE on a
// random 6-entity, 3-relation graph for the sub, mult and corr operators.
GradCheckResult RunModelGradientSuite(uint64_t seed);

// Both suites merged.
GradCheckResult RunGradientSuite(uint64_t seed, int trials = 20);

}  // namespace compgcn

#endif  // COMPGCN_GRADIENT_SUITE_H_
