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

#include "trajformer/diffgraph/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>

#include "trajformer/common/error.hpp"
#include "trajformer/common/rng.hpp"

namespace trajformer::dg {

namespace {

float evaluate(const ScalarFunction& f, const Tensor& x) {
  Graph g(false);
  Var y = f(g, g.input(x));
  if (!y.value().is_scalar()) {
    fail(ErrorKind::kInvalidArgument, "grad_check: function is not scalar, shape " +
                                          y.value().shape_string());
  }
  return y.value()[0];
}

}  // namespace

GradCheckResult grad_check(const ScalarFunction& f, const Tensor& x,
                           const GradCheckOptions& options) {
  if (!(options.step > 0.0)) fail(ErrorKind::kInvalidArgument, "grad_check: step must be > 0");

  Tensor leaf = x;
  leaf.set_requires_grad(true);
  Graph g(true);
  Var xv = g.input(leaf);
  Var y = f(g, xv);
  const float y0 = y.value()[0];
  g.backward(y);
  const Tensor* grad = g.grad(xv);
  const Tensor zeros(x.shape(), 0.0f);
  const Tensor& analytic = grad ? *grad : zeros;

  const float y1 = evaluate(f, x);
  if (std::memcmp(&y0, &y1, sizeof(float)) != 0) {
    fail(ErrorKind::kNonDeterministic, "grad_check: two forward evaluations differ");
  }

  std::vector<std::size_t> indices(x.numel());
  std::iota(indices.begin(), indices.end(), std::size_t{0});
  if (options.max_elements > 0 && options.max_elements < indices.size()) {
    Rng rng(options.seed);
    for (std::size_t i = 0; i < options.max_elements; ++i) {
      std::swap(indices[i], indices[i + rng.below(indices.size() - i)]);
    }
    indices.resize(options.max_elements);
    std::sort(indices.begin(), indices.end());
  }

  GradCheckResult result;
  Tensor probe = x;
  for (std::size_t idx : indices) {
    const float original = x[idx];
    const auto plus = static_cast<float>(original + options.step);
    const auto minus = static_cast<float>(original - options.step);
    probe[idx] = plus;
    const double f_plus = evaluate(f, probe);
    probe[idx] = minus;
    const double f_minus = evaluate(f, probe);
    probe[idx] = original;
    // Divide by the step actually representable in f32.
    const double numeric = (f_plus - f_minus) / (static_cast<double>(plus) - minus);
    const double a = analytic[idx];
    const double rel = std::abs(a - numeric) / std::max(1.0, std::abs(a));
    if (rel > result.max_relative_error || result.checked == 0) {
      result.max_relative_error = std::max(result.max_relative_error, rel);
      if (rel >= result.max_relative_error) {
        result.worst_index = idx;
        result.analytic_at_worst = a;
        result.numeric_at_worst = numeric;
      }
    }
    ++result.checked;
  }
  return result;
}

}  // namespace trajformer::dg
