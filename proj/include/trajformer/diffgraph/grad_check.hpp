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

#ifndef TRAJFORMER_DIFFGRAPH_GRAD_CHECK_HPP_
#define TRAJFORMER_DIFFGRAPH_GRAD_CHECK_HPP_

#include <cstdint>
#include <functional>

#include "trajformer/diffgraph/graph.hpp"

namespace trajformer::dg {

// Builds a scalar loss on `g` from the leaf `x`.
using ScalarFunction = std::function<Var(Graph& g, Var x)>;

struct GradCheckOptions {
  double step = 1e-3;
  // 0 checks every element; otherwise a seeded random subset of this size.
  std::size_t max_elements = 0;
  std::uint64_t seed = 0;
};

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::size_t worst_index = 0;
  double analytic_at_worst = 0.0;
  double numeric_at_worst = 0.0;
  std::size_t checked = 0;
};

// Compares reverse-mode gradients with central differences. The relative
// error per element is |analytic - numeric| / max(1, |analytic|). Throws
// kNonDeterministic if two forward evaluations at x differ.
GradCheckResult grad_check(const ScalarFunction& f, const Tensor& x,
                           const GradCheckOptions& options);

inline double grad_check(const ScalarFunction& f, const Tensor& x, double step) {
  return grad_check(f, x, GradCheckOptions{step, 0, 0}).max_relative_error;
}

}  // namespace trajformer::dg

#endif  // TRAJFORMER_DIFFGRAPH_GRAD_CHECK_HPP_
