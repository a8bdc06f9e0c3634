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

#ifndef TRAJFORMER_DIFFGRAPH_KERNELS_HPP_
#define TRAJFORMER_DIFFGRAPH_KERNELS_HPP_

#include <cstdint>

// Dense row-major kernels behind matmul and attention. Each output row is
// produced by the same instruction sequence whatever its position and the
// number of rows, so results do not depend on batch composition.
namespace trajformer::dg::kernel {

// C[i, j] = sum_p A[i, p] B[p, j]   (or += when accumulate is set)
void gemm(std::int64_t m, std::int64_t n, std::int64_t k, const float* a, std::int64_t lda,
          const float* b, std::int64_t ldb, float* c, std::int64_t ldc, bool accumulate);

// C (+)= A B^T with B stored [n, k].
void gemm_bt(std::int64_t m, std::int64_t n, std::int64_t k, const float* a, std::int64_t lda,
             const float* b, std::int64_t ldb, float* c, std::int64_t ldc, bool accumulate);

// C (+)= A^T B with A stored [k, m] and B stored [k, n].
void gemm_at(std::int64_t m, std::int64_t n, std::int64_t k, const float* a, std::int64_t lda,
             const float* b, std::int64_t ldb, float* c, std::int64_t ldc, bool accumulate);

}  // namespace trajformer::dg::kernel

#endif  // TRAJFORMER_DIFFGRAPH_KERNELS_HPP_
