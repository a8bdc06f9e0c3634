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

#include "trajformer/diffgraph/ops.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "trajformer/common/error.hpp"
#include "kernels.hpp"

namespace trajformer::dg {

namespace {

Graph& graph_of(Var v, const char* op) {
  if (!v.valid()) fail(ErrorKind::kInvalidArgument, std::string(op) + ": empty Var");
  return *v.graph();
}

Graph& graph_of(Var a, Var b, const char* op) {
  Graph& g = graph_of(a, op);
  if (&graph_of(b, op) != &g) {
    fail(ErrorKind::kInvalidArgument, std::string(op) + ": operands from different graphs");
  }
  return g;
}

// ---------------------------------------------------------------------------
// Broadcasting

// For every element of `out`, the flat index of the element of `in` it reads.
std::vector<std::uint32_t> gather_index(const Shape& in, const Shape& out) {
  const std::size_t r = out.size();
  const std::size_t offset = r - in.size();
  std::vector<std::size_t> stride(r, 0);
  std::size_t s = 1;
  for (std::size_t i = in.size(); i-- > 0;) {
    if (in[i] != 1) stride[i + offset] = s;
    s *= static_cast<std::size_t>(in[i]);
  }
  const std::size_t n = shape_numel(out);
  std::vector<std::uint32_t> index(n);
  std::vector<std::int64_t> counter(r, 0);
  std::size_t cur = 0;
  for (std::size_t i = 0; i < n; ++i) {
    index[i] = static_cast<std::uint32_t>(cur);
    for (std::size_t d = r; d-- > 0;) {
      ++counter[d];
      cur += stride[d];
      if (counter[d] < out[d]) break;
      cur -= stride[d] * static_cast<std::size_t>(out[d]);
      counter[d] = 0;
    }
  }
  return index;
}

struct Broadcast {
  Shape out;
  std::vector<std::uint32_t> a_index;  // empty when a already has shape out
  std::vector<std::uint32_t> b_index;

  std::size_t ai(std::size_t i) const { return a_index.empty() ? i : a_index[i]; }
  std::size_t bi(std::size_t i) const { return b_index.empty() ? i : b_index[i]; }
};

Broadcast plan_broadcast(const Shape& a, const Shape& b, const char* op) {
  const std::size_t r = std::max(a.size(), b.size());
  Broadcast plan;
  plan.out.resize(r);
  for (std::size_t i = 0; i < r; ++i) {
    const std::int64_t da = i < r - a.size() ? 1 : a[i - (r - a.size())];
    const std::int64_t db = i < r - b.size() ? 1 : b[i - (r - b.size())];
    if (da == db || db == 1) {
      plan.out[i] = da;
    } else if (da == 1) {
      plan.out[i] = db;
    } else {
      throw ShapeError(op, shape_to_string(a), shape_to_string(b), "not broadcastable");
    }
  }
  if (a != plan.out) plan.a_index = gather_index(a, plan.out);
  if (b != plan.out) plan.b_index = gather_index(b, plan.out);
  return plan;
}

enum class Binary { kAdd, kSub, kMul };

Var binary_op(Var a, Var b, Binary kind) {
  static constexpr const char* kNames[] = {"add", "sub", "mul"};
  const char* name = kNames[static_cast<int>(kind)];
  Graph& g = graph_of(a, b, name);
  auto plan = std::make_shared<Broadcast>(plan_broadcast(a.shape(), b.shape(), name));
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  Tensor out(plan->out);
  const std::size_t n = out.numel();
  float* o = out.raw();
  const float* pa = av.raw();
  const float* pb = bv.raw();
  switch (kind) {
    case Binary::kAdd:
      for (std::size_t i = 0; i < n; ++i) o[i] = pa[plan->ai(i)] + pb[plan->bi(i)];
      break;
    case Binary::kSub:
      for (std::size_t i = 0; i < n; ++i) o[i] = pa[plan->ai(i)] - pb[plan->bi(i)];
      break;
    case Binary::kMul:
      for (std::size_t i = 0; i < n; ++i) o[i] = pa[plan->ai(i)] * pb[plan->bi(i)];
      break;
  }
  const OpKind op = kind == Binary::kAdd ? OpKind::kAdd
                    : kind == Binary::kSub ? OpKind::kSub
                                           : OpKind::kMul;
  return g.record(op, {a, b}, std::move(out),
                  [plan, kind, pa, pb](const Tensor& dy, std::span<Tensor* const> dx) {
                    const float* d = dy.raw();
                    const std::size_t n = dy.numel();
                    if (dx[0]) {
                      float* ga = dx[0]->raw();
                      if (kind == Binary::kMul) {
                        for (std::size_t i = 0; i < n; ++i) ga[plan->ai(i)] += d[i] * pb[plan->bi(i)];
                      } else {
                        for (std::size_t i = 0; i < n; ++i) ga[plan->ai(i)] += d[i];
                      }
                    }
                    if (dx[1]) {
                      float* gb = dx[1]->raw();
                      if (kind == Binary::kMul) {
                        for (std::size_t i = 0; i < n; ++i) gb[plan->bi(i)] += d[i] * pa[plan->ai(i)];
                      } else if (kind == Binary::kSub) {
                        for (std::size_t i = 0; i < n; ++i) gb[plan->bi(i)] -= d[i];
                      } else {
                        for (std::size_t i = 0; i < n; ++i) gb[plan->bi(i)] += d[i];
                      }
                    }
                  });
}

// Shape with `axis` removed; rank-1 inputs reduce to {1}.
Shape reduced_shape(const Shape& shape, int axis) {
  Shape out;
  for (int i = 0; i < static_cast<int>(shape.size()); ++i) {
    if (i != axis) out.push_back(shape[static_cast<std::size_t>(i)]);
  }
  if (out.empty()) out.push_back(1);
  return out;
}

template <typename Forward, typename Derivative>
Var unary_op(Var x, OpKind op, Forward f, Derivative df) {
  Graph& g = graph_of(x, std::string(op_name(op)).c_str());
  const Tensor& xv = x.value();
  Tensor out(xv.shape());
  for (std::size_t i = 0; i < out.numel(); ++i) out[i] = f(xv[i]);
  const float* px = xv.raw();
  return g.record(op, {x}, std::move(out),
                        [px, df](const Tensor& dy, std::span<Tensor* const> dx) {
                          if (!dx[0]) return;
                          float* gx = dx[0]->raw();
                          for (std::size_t i = 0; i < dy.numel(); ++i) gx[i] += dy[i] * df(px[i]);
                        });
}

}  // namespace

// ---------------------------------------------------------------------------
// Linear algebra

Var matmul(Var a, Var b) {
  Graph& g = graph_of(a, b, "matmul");
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  if (av.rank() < 2 || (bv.rank() != 2 && bv.rank() != 3)) {
    throw ShapeError("matmul", av.shape_string(), bv.shape_string(), "unsupported ranks");
  }
  const std::int64_t k = av.dim(-1);
  if (bv.rank() == 2) {
    if (bv.dim(0) != k) {
      throw ShapeError("matmul", av.shape_string(), bv.shape_string(), "inner dims differ");
    }
    const auto n = bv.dim(1);
    const auto m = static_cast<std::int64_t>(av.numel()) / k;
    Shape out_shape = av.shape();
    out_shape.back() = n;
    Tensor out(out_shape);
    kernel::gemm(m, n, k, av.raw(), k, bv.raw(), n, out.raw(), n, false);
    const float* pa = av.raw();
    const float* pb = bv.raw();
    return g.record(OpKind::kMatmul, {a, b}, std::move(out),
                    [pa, pb, m, k, n](const Tensor& dy, std::span<Tensor* const> dx) {
                      if (dx[0]) kernel::gemm_bt(m, k, n, dy.raw(), n, pb, n, dx[0]->raw(), k, true);
                      if (dx[1]) kernel::gemm_at(k, n, m, pa, k, dy.raw(), n, dx[1]->raw(), n, true);
                    });
  }
  if (av.rank() != 3 || av.dim(0) != bv.dim(0) || bv.dim(1) != k) {
    throw ShapeError("matmul", av.shape_string(), bv.shape_string(), "batched dims differ");
  }
  const auto batch = av.dim(0);
  const auto m = av.dim(1);
  const auto n = bv.dim(2);
  Tensor out({batch, m, n});
  for (std::int64_t i = 0; i < batch; ++i) {
    kernel::gemm(m, n, k, av.raw() + i * m * k, k, bv.raw() + i * k * n, n, out.raw() + i * m * n, n,
                 false);
  }
  const float* pa = av.raw();
  const float* pb = bv.raw();
  return g.record(OpKind::kMatmul, {a, b}, std::move(out),
                  [pa, pb, batch, m, k, n](const Tensor& dy, std::span<Tensor* const> dx) {
                    for (std::int64_t i = 0; i < batch; ++i) {
                      const float* d = dy.raw() + i * m * n;
                      if (dx[0]) {
                        kernel::gemm_bt(m, k, n, d, n, pb + i * k * n, n, dx[0]->raw() + i * m * k, k,
                                        true);
                      }
                      if (dx[1]) {
                        kernel::gemm_at(k, n, m, pa + i * m * k, k, d, n, dx[1]->raw() + i * k * n, n,
                                        true);
                      }
                    }
                  });
}

Var add(Var a, Var b) { return binary_op(a, b, Binary::kAdd); }
Var sub(Var a, Var b) { return binary_op(a, b, Binary::kSub); }
Var mul(Var a, Var b) { return binary_op(a, b, Binary::kMul); }

// ---------------------------------------------------------------------------
// Elementwise

Var scale(Var x, float factor) {
  return unary_op(
      x, OpKind::kScale, [factor](float v) { return v * factor; },
      [factor](float) { return factor; });
}

Var add_scalar(Var x, float offset) {
  return unary_op(
      x, OpKind::kAddScalar, [offset](float v) { return v + offset; },
      [](float) { return 1.0f; });
}

Var exp(Var x) {
  return unary_op(
      x, OpKind::kExp, [](float v) { return std::exp(v); },
      [](float v) { return std::exp(v); });
}

Var log(Var x) {
  return unary_op(
      x, OpKind::kLog, [](float v) { return v > 0.0f ? std::max(std::log(v), kLogFloor) : kLogFloor; },
      [](float v) { return v > 0.0f ? 1.0f / v : 0.0f; });
}

Var sqrt(Var x) {
  Graph& g = graph_of(x, "sqrt");
  const Tensor& xv = x.value();
  Tensor out(xv.shape());
  for (std::size_t i = 0; i < out.numel(); ++i) {
    if (xv[i] < 0.0f) fail(ErrorKind::kNonFinite, "sqrt: negative input");
    out[i] = std::sqrt(xv[i]);
  }
  auto y = std::make_shared<Tensor>(out);
  return g.record(OpKind::kSqrt, {x}, std::move(out),
                  [y](const Tensor& dy, std::span<Tensor* const> dx) {
                    if (!dx[0]) return;
                    for (std::size_t i = 0; i < dy.numel(); ++i) {
                      const float r = (*y)[i];
                      if (r > 0.0f) (*dx[0])[i] += dy[i] * 0.5f / r;
                    }
                  });
}

Var gelu(Var x) {
  constexpr double kInvSqrt2 = 0.70710678118654752440;
  constexpr double kInvSqrt2Pi = 0.39894228040143267794;
  return unary_op(
      x, OpKind::kGelu,
      [](float v) {
        const double d = v;
        return static_cast<float>(0.5 * d * (1.0 + std::erf(d * kInvSqrt2)));
      },
      [](float v) {
        const double d = v;
        const double cdf = 0.5 * (1.0 + std::erf(d * kInvSqrt2));
        const double pdf = kInvSqrt2Pi * std::exp(-0.5 * d * d);
        return static_cast<float>(cdf + d * pdf);
      });
}

// ---------------------------------------------------------------------------
// Axis ops

Var logsumexp(Var x, int axis) {
  Graph& g = graph_of(x, "logsumexp");
  const Tensor& xv = x.value();
  axis = normalize_axis(axis, xv.rank(), "logsumexp");
  const AxisExtent e = axis_extent(xv.shape(), axis);
  Tensor out(reduced_shape(xv.shape(), axis));
  auto weights = std::make_shared<Tensor>(xv.shape());
  for (std::size_t o = 0; o < e.outer; ++o) {
    for (std::size_t n = 0; n < e.inner; ++n) {
      const std::size_t base = o * e.length * e.inner + n;
      float mx = xv[base];
      for (std::size_t i = 1; i < e.length; ++i) mx = std::max(mx, xv[base + i * e.inner]);
      double total = 0.0;
      for (std::size_t i = 0; i < e.length; ++i) {
        total += std::exp(static_cast<double>(xv[base + i * e.inner]) - mx);
      }
      const double lse = mx + std::log(total);
      out[o * e.inner + n] = static_cast<float>(lse);
      for (std::size_t i = 0; i < e.length; ++i) {
        (*weights)[base + i * e.inner] =
            static_cast<float>(std::exp(static_cast<double>(xv[base + i * e.inner]) - lse));
      }
    }
  }
  return g.record(OpKind::kLogSumExp, {x}, std::move(out),
                  [weights, e](const Tensor& dy, std::span<Tensor* const> dx) {
                    if (!dx[0]) return;
                    for (std::size_t o = 0; o < e.outer; ++o) {
                      for (std::size_t n = 0; n < e.inner; ++n) {
                        const std::size_t base = o * e.length * e.inner + n;
                        const float d = dy[o * e.inner + n];
                        for (std::size_t i = 0; i < e.length; ++i) {
                          (*dx[0])[base + i * e.inner] += d * (*weights)[base + i * e.inner];
                        }
                      }
                    }
                  });
}

Var softmax(Var x, int axis) {
  Graph& g = graph_of(x, "softmax");
  const Tensor& xv = x.value();
  axis = normalize_axis(axis, xv.rank(), "softmax");
  const AxisExtent e = axis_extent(xv.shape(), axis);
  Tensor out(xv.shape());
  for (std::size_t o = 0; o < e.outer; ++o) {
    for (std::size_t n = 0; n < e.inner; ++n) {
      const std::size_t base = o * e.length * e.inner + n;
      float mx = xv[base];
      for (std::size_t i = 1; i < e.length; ++i) mx = std::max(mx, xv[base + i * e.inner]);
      double total = 0.0;
      for (std::size_t i = 0; i < e.length; ++i) {
        total += std::exp(static_cast<double>(xv[base + i * e.inner]) - mx);
      }
      const double lse = mx + std::log(total);
      for (std::size_t i = 0; i < e.length; ++i) {
        out[base + i * e.inner] =
            static_cast<float>(std::exp(static_cast<double>(xv[base + i * e.inner]) - lse));
      }
    }
  }
  auto y = std::make_shared<Tensor>(out);
  return g.record(OpKind::kSoftmax, {x}, std::move(out),
                  [y, e](const Tensor& dy, std::span<Tensor* const> dx) {
                    if (!dx[0]) return;
                    for (std::size_t o = 0; o < e.outer; ++o) {
                      for (std::size_t n = 0; n < e.inner; ++n) {
                        const std::size_t base = o * e.length * e.inner + n;
                        double dot = 0.0;
                        for (std::size_t i = 0; i < e.length; ++i) {
                          const std::size_t j = base + i * e.inner;
                          dot += static_cast<double>(dy[j]) * (*y)[j];
                        }
                        for (std::size_t i = 0; i < e.length; ++i) {
                          const std::size_t j = base + i * e.inner;
                          (*dx[0])[j] += static_cast<float>((*y)[j] * (dy[j] - dot));
                        }
                      }
                    }
                  });
}

Var log_softmax(Var x, int axis) {
  axis = normalize_axis(axis, x.value().rank(), "log_softmax");
  Shape keep = x.shape();
  keep[static_cast<std::size_t>(axis)] = 1;
  return sub(x, reshape(logsumexp(x, axis), keep));
}

Var layer_norm(Var x, int axis, float eps) {
  Graph& g = graph_of(x, "layer_norm");
  const Tensor& xv = x.value();
  axis = normalize_axis(axis, xv.rank(), "layer_norm");
  if (!(eps > 0.0f)) fail(ErrorKind::kInvalidArgument, "layer_norm: eps must be positive");
  const AxisExtent e = axis_extent(xv.shape(), axis);
  Tensor out(xv.shape());
  auto rstd = std::make_shared<std::vector<float>>(e.outer * e.inner);
  for (std::size_t o = 0; o < e.outer; ++o) {
    for (std::size_t n = 0; n < e.inner; ++n) {
      const std::size_t base = o * e.length * e.inner + n;
      double mu = 0.0;
      for (std::size_t i = 0; i < e.length; ++i) mu += xv[base + i * e.inner];
      mu /= static_cast<double>(e.length);
      double var = 0.0;
      for (std::size_t i = 0; i < e.length; ++i) {
        const double c = xv[base + i * e.inner] - mu;
        var += c * c;
      }
      var /= static_cast<double>(e.length);
      const double r = 1.0 / std::sqrt(var + eps);
      (*rstd)[o * e.inner + n] = static_cast<float>(r);
      for (std::size_t i = 0; i < e.length; ++i) {
        out[base + i * e.inner] = static_cast<float>((xv[base + i * e.inner] - mu) * r);
      }
    }
  }
  auto y = std::make_shared<Tensor>(out);
  return g.record(OpKind::kLayerNorm, {x}, std::move(out),
                  [y, rstd, e](const Tensor& dy, std::span<Tensor* const> dx) {
                    if (!dx[0]) return;
                    const double inv_len = 1.0 / static_cast<double>(e.length);
                    for (std::size_t o = 0; o < e.outer; ++o) {
                      for (std::size_t n = 0; n < e.inner; ++n) {
                        const std::size_t base = o * e.length * e.inner + n;
                        double mean_dy = 0.0;
                        double mean_dy_y = 0.0;
                        for (std::size_t i = 0; i < e.length; ++i) {
                          const std::size_t j = base + i * e.inner;
                          mean_dy += dy[j];
                          mean_dy_y += static_cast<double>(dy[j]) * (*y)[j];
                        }
                        mean_dy *= inv_len;
                        mean_dy_y *= inv_len;
                        const double r = (*rstd)[o * e.inner + n];
                        for (std::size_t i = 0; i < e.length; ++i) {
                          const std::size_t j = base + i * e.inner;
                          (*dx[0])[j] +=
                              static_cast<float>(r * (dy[j] - mean_dy - (*y)[j] * mean_dy_y));
                        }
                      }
                    }
                  });
}

// ---------------------------------------------------------------------------
// Structural

Var reshape(Var x, Shape shape) {
  Graph& g = graph_of(x, "reshape");
  Tensor out = x.value().reshaped(std::move(shape));
  return g.record(OpKind::kReshape, {x}, std::move(out),
                  [](const Tensor& dy, std::span<Tensor* const> dx) {
                    if (!dx[0]) return;
                    float* gx = dx[0]->raw();
                    for (std::size_t i = 0; i < dy.numel(); ++i) gx[i] += dy[i];
                  });
}

Var concat(std::initializer_list<Var> xs, int axis) {
  return concat(std::span<const Var>(xs.begin(), xs.size()), axis);
}

Var concat(std::span<const Var> xs, int axis) {
  if (xs.empty()) fail(ErrorKind::kInvalidArgument, "concat: no inputs");
  Graph& g = graph_of(xs[0], "concat");
  const Shape& first = xs[0].shape();
  axis = normalize_axis(axis, static_cast<int>(first.size()), "concat");
  Shape out_shape = first;
  out_shape[static_cast<std::size_t>(axis)] = 0;
  std::vector<std::size_t> lengths;
  for (const Var& v : xs) {
    graph_of(xs[0], v, "concat");
    const Shape& s = v.shape();
    bool ok = s.size() == first.size();
    for (std::size_t i = 0; ok && i < s.size(); ++i) {
      ok = static_cast<int>(i) == axis || s[i] == first[i];
    }
    if (!ok) throw ShapeError("concat", shape_to_string(first), shape_to_string(s), "off-axis dims differ");
    out_shape[static_cast<std::size_t>(axis)] += s[static_cast<std::size_t>(axis)];
    lengths.push_back(static_cast<std::size_t>(s[static_cast<std::size_t>(axis)]));
  }
  const AxisExtent e = axis_extent(out_shape, axis);
  Tensor out(out_shape);
  std::size_t offset = 0;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    const float* src = xs[j].value().raw();
    const std::size_t block = lengths[j] * e.inner;
    for (std::size_t o = 0; o < e.outer; ++o) {
      std::copy_n(src + o * block, block, out.raw() + o * e.length * e.inner + offset * e.inner);
    }
    offset += lengths[j];
  }
  return g.record(OpKind::kConcat, xs, std::move(out),
                  [lengths, e](const Tensor& dy, std::span<Tensor* const> dx) {
                    std::size_t offset = 0;
                    for (std::size_t j = 0; j < lengths.size(); ++j) {
                      const std::size_t block = lengths[j] * e.inner;
                      if (dx[j]) {
                        for (std::size_t o = 0; o < e.outer; ++o) {
                          const float* src = dy.raw() + o * e.length * e.inner + offset * e.inner;
                          float* dst = dx[j]->raw() + o * block;
                          for (std::size_t i = 0; i < block; ++i) dst[i] += src[i];
                        }
                      }
                      offset += lengths[j];
                    }
                  });
}

Var slice(Var x, int axis, std::int64_t start, std::int64_t length) {
  Graph& g = graph_of(x, "slice");
  const Tensor& xv = x.value();
  axis = normalize_axis(axis, xv.rank(), "slice");
  const auto dim = xv.dim(axis);
  if (start < 0 || length < 1 || start + length > dim) {
    fail(ErrorKind::kInvalidArgument, "slice: range [" + std::to_string(start) + ", " +
                                          std::to_string(start + length) + ") outside axis of " +
                                          std::to_string(dim) + " in " + xv.shape_string());
  }
  Shape out_shape = xv.shape();
  out_shape[static_cast<std::size_t>(axis)] = length;
  const AxisExtent e = axis_extent(xv.shape(), axis);
  const std::size_t block = static_cast<std::size_t>(length) * e.inner;
  const std::size_t skip = static_cast<std::size_t>(start) * e.inner;
  Tensor out(out_shape);
  for (std::size_t o = 0; o < e.outer; ++o) {
    std::copy_n(xv.raw() + o * e.length * e.inner + skip, block, out.raw() + o * block);
  }
  return g.record(OpKind::kSlice, {x}, std::move(out),
                  [e, block, skip](const Tensor& dy, std::span<Tensor* const> dx) {
                    if (!dx[0]) return;
                    for (std::size_t o = 0; o < e.outer; ++o) {
                      float* dst = dx[0]->raw() + o * e.length * e.inner + skip;
                      const float* src = dy.raw() + o * block;
                      for (std::size_t i = 0; i < block; ++i) dst[i] += src[i];
                    }
                  });
}

namespace {

Var reduce_axis(Var x, int axis, bool average) {
  const OpKind op = average ? OpKind::kMean : OpKind::kSum;
  Graph& g = graph_of(x, average ? "mean" : "sum");
  const Tensor& xv = x.value();
  axis = normalize_axis(axis, xv.rank(), average ? "mean" : "sum");
  const AxisExtent e = axis_extent(xv.shape(), axis);
  const double factor = average ? 1.0 / static_cast<double>(e.length) : 1.0;
  Tensor out(reduced_shape(xv.shape(), axis));
  for (std::size_t o = 0; o < e.outer; ++o) {
    for (std::size_t n = 0; n < e.inner; ++n) {
      const std::size_t base = o * e.length * e.inner + n;
      double total = 0.0;
      for (std::size_t i = 0; i < e.length; ++i) total += xv[base + i * e.inner];
      out[o * e.inner + n] = static_cast<float>(total * factor);
    }
  }
  return g.record(op, {x}, std::move(out),
                  [e, factor](const Tensor& dy, std::span<Tensor* const> dx) {
                    if (!dx[0]) return;
                    for (std::size_t o = 0; o < e.outer; ++o) {
                      for (std::size_t n = 0; n < e.inner; ++n) {
                        const std::size_t base = o * e.length * e.inner + n;
                        const auto d = static_cast<float>(dy[o * e.inner + n] * factor);
                        for (std::size_t i = 0; i < e.length; ++i) (*dx[0])[base + i * e.inner] += d;
                      }
                    }
                  });
}

Var reduce_all(Var x, bool average) {
  const OpKind op = average ? OpKind::kMean : OpKind::kSum;
  Graph& g = graph_of(x, average ? "mean" : "sum");
  const Tensor& xv = x.value();
  double total = 0.0;
  for (float v : xv.data()) total += v;
  const double factor = average ? 1.0 / static_cast<double>(xv.numel()) : 1.0;
  return g.record(op, {x}, Tensor::scalar(static_cast<float>(total * factor)),
                  [factor](const Tensor& dy, std::span<Tensor* const> dx) {
                    if (!dx[0]) return;
                    const auto d = static_cast<float>(dy[0] * factor);
                    for (float& v : dx[0]->data()) v += d;
                  });
}

}  // namespace

Var sum(Var x, int axis) { return reduce_axis(x, axis, false); }
Var sum(Var x) { return reduce_all(x, false); }
Var mean(Var x, int axis) { return reduce_axis(x, axis, true); }
Var mean(Var x) { return reduce_all(x, true); }

Var detach(Var x) {
  Graph& g = graph_of(x, "detach");
  return g.constant(x.value());
}

Var dropout(Var x, float p, Rng& rng) {
  if (p <= 0.0f) return x;
  if (p >= 1.0f) fail(ErrorKind::kInvalidArgument, "dropout: p must be < 1");
  Graph& g = graph_of(x, "dropout");
  Tensor mask(x.shape());
  const float keep_scale = 1.0f / (1.0f - p);
  for (float& m : mask.data()) m = rng.uniform() < p ? 0.0f : keep_scale;
  return mul(x, g.constant(std::move(mask)));
}

}  // namespace trajformer::dg
