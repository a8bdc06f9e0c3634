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

#include "kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#ifdef __AVX512F__
#include <immintrin.h>
#endif

namespace trajformer::dg::kernel {

namespace {

constexpr int kRows = 4;
constexpr int kTile = 64;

// Fused where the target has FMA; this file is built without contraction
// so vector and scalar paths agree either way.
inline float madd(float a, float b, float c) {
#ifdef __FMA__
  return std::fma(a, b, c);
#else
  return a * b + c;
#endif
}

void store(const float* acc, float* c, std::int64_t width, bool accumulate) {
  if (accumulate) {
    for (std::int64_t j = 0; j < width; ++j) c[j] += acc[j];
  } else {
    std::copy_n(acc, width, c);
  }
}

// Full-width tile for kRows rows.
void block_rows(std::int64_t k, const float* a, std::int64_t lda, const float* b, std::int64_t ldb,
                float* c, std::int64_t ldc, bool accumulate) {
  alignas(64) float acc[kRows][kTile] = {};
  for (std::int64_t p = 0; p < k; ++p) {
    const float* bp = b + p * ldb;
    for (int r = 0; r < kRows; ++r) {
      const float av = a[r * lda + p];
      for (int j = 0; j < kTile; ++j) acc[r][j] = madd(av, bp[j], acc[r][j]);
    }
  }
  for (int r = 0; r < kRows; ++r) store(acc[r], c + r * ldc, kTile, accumulate);
}

void block_row(std::int64_t k, const float* a, const float* b, std::int64_t ldb, float* c,
               bool accumulate) {
  alignas(64) float acc[kTile] = {};
  for (std::int64_t p = 0; p < k; ++p) {
    const float* bp = b + p * ldb;
    const float av = a[p];
    for (int j = 0; j < kTile; ++j) acc[j] = madd(av, bp[j], acc[j]);
  }
  store(acc, c, kTile, accumulate);
}

// Narrow trailing tile, one row at a time.
void narrow_row(std::int64_t k, std::int64_t width, const float* a, const float* b,
                std::int64_t ldb, float* c, bool accumulate) {
  alignas(64) float acc[kTile] = {};
  for (std::int64_t p = 0; p < k; ++p) {
    const float* bp = b + p * ldb;
    const float av = a[p];
    for (std::int64_t j = 0; j < width; ++j) acc[j] = madd(av, bp[j], acc[j]);
  }
  store(acc, c, width, accumulate);
}

// dst[cols, rows] = src[rows, cols]^T
std::vector<float> transposed(std::int64_t rows, std::int64_t cols, const float* src, std::int64_t ld) {
  constexpr std::int64_t kBlock = 32;
  std::vector<float> out(static_cast<std::size_t>(rows * cols));
  for (std::int64_t i0 = 0; i0 < rows; i0 += kBlock) {
    const std::int64_t i1 = std::min(rows, i0 + kBlock);
    for (std::int64_t j0 = 0; j0 < cols; j0 += kBlock) {
      const std::int64_t j1 = std::min(cols, j0 + kBlock);
      for (std::int64_t i = i0; i < i1; ++i) {
        for (std::int64_t j = j0; j < j1; ++j) out[static_cast<std::size_t>(j * rows + i)] = src[i * ld + j];
      }
    }
  }
  return out;
}

#ifdef __AVX512F__

// Register-blocked AVX-512 path: 4 rows x 64 columns of accumulators, and
// masked 16-column strips for the remainder. Every element is one fused
// multiply-add per inner-product term, in the same order as the portable
// path, so both paths round identically.
template <int Rows>
void simd_block(std::int64_t k, const float* a, std::int64_t lda, const float* b, std::int64_t ldb,
                float* c, std::int64_t ldc, bool accumulate) {
  __m512 acc[Rows][4];
  for (int r = 0; r < Rows; ++r) {
    for (int v = 0; v < 4; ++v) acc[r][v] = _mm512_setzero_ps();
  }
  for (std::int64_t p = 0; p < k; ++p) {
    const float* bp = b + p * ldb;
    const __m512 b0 = _mm512_loadu_ps(bp);
    const __m512 b1 = _mm512_loadu_ps(bp + 16);
    const __m512 b2 = _mm512_loadu_ps(bp + 32);
    const __m512 b3 = _mm512_loadu_ps(bp + 48);
    for (int r = 0; r < Rows; ++r) {
      const __m512 av = _mm512_set1_ps(a[r * lda + p]);
      acc[r][0] = _mm512_fmadd_ps(av, b0, acc[r][0]);
      acc[r][1] = _mm512_fmadd_ps(av, b1, acc[r][1]);
      acc[r][2] = _mm512_fmadd_ps(av, b2, acc[r][2]);
      acc[r][3] = _mm512_fmadd_ps(av, b3, acc[r][3]);
    }
  }
  for (int r = 0; r < Rows; ++r) {
    for (int v = 0; v < 4; ++v) {
      float* dst = c + r * ldc + v * 16;
      const __m512 out = accumulate ? _mm512_add_ps(_mm512_loadu_ps(dst), acc[r][v]) : acc[r][v];
      _mm512_storeu_ps(dst, out);
    }
  }
}

template <int Rows>
void simd_strip(std::int64_t k, __mmask16 mask, const float* a, std::int64_t lda, const float* b,
                std::int64_t ldb, float* c, std::int64_t ldc, bool accumulate) {
  __m512 acc[Rows];
  for (int r = 0; r < Rows; ++r) acc[r] = _mm512_setzero_ps();
  for (std::int64_t p = 0; p < k; ++p) {
    const __m512 bv = _mm512_maskz_loadu_ps(mask, b + p * ldb);
    for (int r = 0; r < Rows; ++r) acc[r] = _mm512_fmadd_ps(_mm512_set1_ps(a[r * lda + p]), bv, acc[r]);
  }
  for (int r = 0; r < Rows; ++r) {
    float* dst = c + r * ldc;
    const __m512 out = accumulate ? _mm512_add_ps(_mm512_maskz_loadu_ps(mask, dst), acc[r]) : acc[r];
    _mm512_mask_storeu_ps(dst, mask, out);
  }
}

void gemm_simd(std::int64_t m, std::int64_t n, std::int64_t k, const float* a, std::int64_t lda,
               const float* b, std::int64_t ldb, float* c, std::int64_t ldc, bool accumulate) {
  const std::int64_t full = n - n % kTile;
  for (std::int64_t j0 = 0; j0 < full; j0 += kTile) {
    std::int64_t i = 0;
    for (; i + kRows <= m; i += kRows) {
      simd_block<kRows>(k, a + i * lda, lda, b + j0, ldb, c + i * ldc + j0, ldc, accumulate);
    }
    for (; i < m; ++i) simd_block<1>(k, a + i * lda, lda, b + j0, ldb, c + i * ldc + j0, ldc, accumulate);
  }
  for (std::int64_t j0 = full; j0 < n; j0 += 16) {
    const auto width = static_cast<unsigned>(std::min<std::int64_t>(16, n - j0));
    const auto mask = static_cast<__mmask16>(width == 16 ? 0xffffu : (1u << width) - 1u);
    std::int64_t i = 0;
    for (; i + kRows <= m; i += kRows) {
      simd_strip<kRows>(k, mask, a + i * lda, lda, b + j0, ldb, c + i * ldc + j0, ldc, accumulate);
    }
    for (; i < m; ++i) simd_strip<1>(k, mask, a + i * lda, lda, b + j0, ldb, c + i * ldc + j0, ldc, accumulate);
  }
}

#endif

}  // namespace

void gemm(std::int64_t m, std::int64_t n, std::int64_t k, const float* a, std::int64_t lda,
          const float* b, std::int64_t ldb, float* c, std::int64_t ldc, bool accumulate) {
#ifdef __AVX512F__
  gemm_simd(m, n, k, a, lda, b, ldb, c, ldc, accumulate);
  return;
#endif
  const std::int64_t full = n - n % kTile;
  for (std::int64_t j0 = 0; j0 < full; j0 += kTile) {
    std::int64_t i = 0;
    for (; i + kRows <= m; i += kRows) {
      block_rows(k, a + i * lda, lda, b + j0, ldb, c + i * ldc + j0, ldc, accumulate);
    }
    for (; i < m; ++i) block_row(k, a + i * lda, b + j0, ldb, c + i * ldc + j0, accumulate);
  }
  if (full < n) {
    for (std::int64_t i = 0; i < m; ++i) {
      narrow_row(k, n - full, a + i * lda, b + full, ldb, c + i * ldc + full, accumulate);
    }
  }
}

void gemm_bt(std::int64_t m, std::int64_t n, std::int64_t k, const float* a, std::int64_t lda,
             const float* b, std::int64_t ldb, float* c, std::int64_t ldc, bool accumulate) {
  const std::vector<float> bt = transposed(n, k, b, ldb);
  gemm(m, n, k, a, lda, bt.data(), n, c, ldc, accumulate);
}

void gemm_at(std::int64_t m, std::int64_t n, std::int64_t k, const float* a, std::int64_t lda,
             const float* b, std::int64_t ldb, float* c, std::int64_t ldc, bool accumulate) {
  const std::vector<float> at = transposed(k, m, a, lda);
  gemm(m, n, k, at.data(), k, b, ldb, c, ldc, accumulate);
}

}  // namespace trajformer::dg::kernel
