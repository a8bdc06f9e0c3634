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

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include "trajformer/common/error.hpp"
#include "trajformer/diffgraph/ops.hpp"
#include "kernels.hpp"

namespace trajformer::dg {

Var scaled_dot_product_attention(Var q, Var k, Var v, int heads) {
  if (!q.valid() || !k.valid() || !v.valid()) {
    fail(ErrorKind::kInvalidArgument, "scaled_dot_product_attention: empty Var");
  }
  Graph& g = *q.graph();
  if (k.graph() != &g || v.graph() != &g) {
    fail(ErrorKind::kInvalidArgument, "scaled_dot_product_attention: operands from different graphs");
  }
  const Tensor& qv = q.value();
  const Tensor& kv = k.value();
  const Tensor& vv = v.value();
  const bool batched = qv.rank() == 3;
  if ((qv.rank() != 2 && qv.rank() != 3) || kv.rank() != qv.rank() || vv.rank() != qv.rank()) {
    throw ShapeError("scaled_dot_product_attention", qv.shape_string(), kv.shape_string(),
                     "expected matching rank 2 or 3 operands");
  }
  if (kv.shape() != vv.shape()) {
    throw ShapeError("scaled_dot_product_attention", kv.shape_string(), vv.shape_string(),
                     "keys and values differ");
  }
  const std::int64_t batch = batched ? qv.dim(0) : 1;
  const std::int64_t n = qv.dim(-2);
  const std::int64_t m = kv.dim(-2);
  const std::int64_t d = qv.dim(-1);
  if (kv.dim(-1) != d || (batched && kv.dim(0) != batch)) {
    throw ShapeError("scaled_dot_product_attention", qv.shape_string(), kv.shape_string(),
                     "query and key dims differ");
  }
  if (heads < 1 || d % heads != 0) {
    fail(ErrorKind::kInvalidArgument, "scaled_dot_product_attention: model dim " +
                                          std::to_string(d) + " not divisible by " +
                                          std::to_string(heads) + " heads");
  }
  const std::int64_t dh = d / heads;
  const float scale = 1.0f / std::sqrt(static_cast<float>(dh));

  Tensor out(qv.shape());
  // Attention weights per (batch, head), kept for the backward pass.
  auto probs = std::make_shared<std::vector<float>>(
      static_cast<std::size_t>(batch * heads * n * m));
  std::vector<float> scores(static_cast<std::size_t>(n * m));
  for (std::int64_t b = 0; b < batch; ++b) {
    for (std::int64_t h = 0; h < heads; ++h) {
      const std::int64_t qoff = b * n * d + h * dh;
      const std::int64_t koff = b * m * d + h * dh;
      kernel::gemm_bt(n, m, dh, qv.raw() + qoff, d, kv.raw() + koff, d, scores.data(), m, false);
      float* p = probs->data() + (b * heads + h) * n * m;
      for (std::int64_t i = 0; i < n; ++i) {
        const float* row = scores.data() + i * m;
        float mx = row[0] * scale;
        for (std::int64_t j = 1; j < m; ++j) mx = std::max(mx, row[j] * scale);
        double total = 0.0;
        for (std::int64_t j = 0; j < m; ++j) total += std::exp(static_cast<double>(row[j] * scale) - mx);
        const double lse = mx + std::log(total);
        for (std::int64_t j = 0; j < m; ++j) {
          p[i * m + j] = static_cast<float>(std::exp(static_cast<double>(row[j] * scale) - lse));
        }
      }
      kernel::gemm(n, dh, m, p, m, vv.raw() + koff, d, out.raw() + qoff, d, false);
    }
  }

  const float* pq = qv.raw();
  const float* pk = kv.raw();
  const float* pv = vv.raw();
  return g.record(
      OpKind::kAttention, {q, k, v}, std::move(out),
      [=](const Tensor& dy, std::span<Tensor* const> dx) {
        std::vector<float> ds(static_cast<std::size_t>(n * m));
        for (std::int64_t b = 0; b < batch; ++b) {
          for (std::int64_t h = 0; h < heads; ++h) {
            const std::int64_t qoff = b * n * d + h * dh;
            const std::int64_t koff = b * m * d + h * dh;
            const float* p = probs->data() + (b * heads + h) * n * m;
            const float* dout = dy.raw() + qoff;
            if (dx[2]) kernel::gemm_at(m, dh, n, p, m, dout, d, dx[2]->raw() + koff, d, true);
            if (!dx[0] && !dx[1]) continue;
            // ds = p * (dp - rowsum(dp * p)), folded with the score scale.
            kernel::gemm_bt(n, m, dh, dout, d, pv + koff, d, ds.data(), m, false);
            for (std::int64_t i = 0; i < n; ++i) {
              float* dsi = ds.data() + i * m;
              const float* pi = p + i * m;
              double dot = 0.0;
              for (std::int64_t j = 0; j < m; ++j) dot += static_cast<double>(dsi[j]) * pi[j];
              for (std::int64_t j = 0; j < m; ++j) {
                dsi[j] = pi[j] * (dsi[j] - static_cast<float>(dot)) * scale;
              }
            }
            if (dx[0]) kernel::gemm(n, dh, m, ds.data(), m, pk + koff, d, dx[0]->raw() + qoff, d, true);
            if (dx[1]) kernel::gemm_at(m, dh, n, ds.data(), m, pq + qoff, d, dx[1]->raw() + koff, d, true);
          }
        }
      });
}

}  // namespace trajformer::dg
