// Copyright 2026 The HGAT Forecast Authors
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

#include "hgat/ops.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace hgat
{
namespace
{

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapC = Eigen::Map<const RowMajor>;
using Map = Eigen::Map<RowMajor>;

MapC as_matrix(const Tensor & t) { return MapC(t.data().data(), t.rows(), t.cols()); }
Map as_matrix(Tensor & t) { return Map(t.data().data(), t.rows(), t.cols()); }

void require_rank2(const Var & x, const char * op)
{
  if (x.value().rank() != 2) {
    throw DimensionError(
      std::string(op) + ": expected a matrix, got " + shape_to_string(x.value().shape()));
  }
}

void require_same_shape(const Var & a, const Var & b, const char * op)
{
  if (a.value().shape() != b.value().shape()) {
    throw DimensionError(
      std::string(op) + ": shape mismatch " + shape_to_string(a.value().shape()) + " vs " +
      shape_to_string(b.value().shape()));
  }
}

void accumulate(Tensor & dst, const Tensor & src)
{
  auto d = dst.data();
  auto s = src.data();
  for (std::size_t i = 0; i < d.size(); ++i) d[i] += s[i];
}

}  // namespace

Var matmul(const Var & a, const Var & b)
{
  require_rank2(a, "matmul");
  require_rank2(b, "matmul");
  if (a.cols() != b.rows()) {
    throw DimensionError(
      "matmul: inner dimensions differ, " + shape_to_string(a.value().shape()) + " x " +
      shape_to_string(b.value().shape()));
  }
  Tensor out = Tensor::matrix(a.rows(), b.cols());
  if (out.size() > 0 && a.cols() > 0) as_matrix(out).noalias() = as_matrix(a.value()) * as_matrix(b.value());
  const std::size_t ia = a.id();
  const std::size_t ib = b.id();
  return a.tape()->record(
    std::move(out), {a, b},
    [ia, ib](Tape & t, std::size_t self) {
      const Tensor & g = *t.grad_if_any(self);
      if (g.size() == 0) return;
      if (t.requires_grad(ia) && t.value(ia).size() > 0) {
        as_matrix(t.grad(ia)).noalias() += as_matrix(g) * as_matrix(t.value(ib)).transpose();
      }
      if (t.requires_grad(ib) && t.value(ib).size() > 0) {
        as_matrix(t.grad(ib)).noalias() += as_matrix(t.value(ia)).transpose() * as_matrix(g);
      }
    },
    "matmul");
}

Var linear(const Var & x, const Var & w, const Var & b)
{
  require_rank2(x, "linear");
  require_rank2(w, "linear");
  if (x.cols() != w.rows()) {
    throw DimensionError(
      "linear: input " + shape_to_string(x.value().shape()) + " does not conform to weight " +
      shape_to_string(w.value().shape()));
  }
  if (b.valid() && (b.value().rank() != 1 || b.value().size() != w.cols())) {
    throw DimensionError(
      "linear: bias " + shape_to_string(b.value().shape()) + " does not conform to weight " +
      shape_to_string(w.value().shape()));
  }
  const std::size_t n = x.rows();
  const std::size_t dout = w.cols();
  Tensor out = Tensor::matrix(n, dout);
  if (out.size() > 0 && x.cols() > 0) as_matrix(out).noalias() = as_matrix(x.value()) * as_matrix(w.value());
  if (b.valid()) {
    const auto bias = b.value().data();
    for (std::size_t r = 0; r < n; ++r) {
      auto row = out.row(r);
      for (std::size_t c = 0; c < dout; ++c) row[c] += bias[c];
    }
  }
  const std::size_t ix = x.id();
  const std::size_t iw = w.id();
  const bool has_bias = b.valid();
  const std::size_t ib = has_bias ? b.id() : 0;
  std::vector<Var> inputs{x, w};
  if (has_bias) inputs.push_back(b);
  return x.tape()->record(
    std::move(out), inputs,
    [ix, iw, ib, has_bias](Tape & t, std::size_t self) {
      const Tensor & g = *t.grad_if_any(self);
      if (g.size() == 0) return;
      if (t.requires_grad(ix) && t.value(ix).size() > 0) {
        as_matrix(t.grad(ix)).noalias() += as_matrix(g) * as_matrix(t.value(iw)).transpose();
      }
      if (t.requires_grad(iw) && t.value(ix).size() > 0) {
        as_matrix(t.grad(iw)).noalias() += as_matrix(t.value(ix)).transpose() * as_matrix(g);
      }
      if (has_bias && t.requires_grad(ib)) {
        auto gb = t.grad(ib).data();
        for (std::size_t r = 0; r < g.rows(); ++r) {
          auto row = g.row(r);
          for (std::size_t c = 0; c < row.size(); ++c) gb[c] += row[c];
        }
      }
    },
    "linear");
}

Var add(const Var & a, const Var & b)
{
  require_same_shape(a, b, "add");
  Tensor out = a.value();
  accumulate(out, b.value());
  const std::size_t ia = a.id();
  const std::size_t ib = b.id();
  return a.tape()->record(
    std::move(out), {a, b},
    [ia, ib](Tape & t, std::size_t self) {
      const Tensor & g = *t.grad_if_any(self);
      if (t.requires_grad(ia)) accumulate(t.grad(ia), g);
      if (t.requires_grad(ib)) accumulate(t.grad(ib), g);
    },
    "add");
}

Var sub(const Var & a, const Var & b)
{
  require_same_shape(a, b, "sub");
  Tensor out = a.value();
  auto o = out.data();
  auto bv = b.value().data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] -= bv[i];
  const std::size_t ia = a.id();
  const std::size_t ib = b.id();
  return a.tape()->record(
    std::move(out), {a, b},
    [ia, ib](Tape & t, std::size_t self) {
      const Tensor & g = *t.grad_if_any(self);
      if (t.requires_grad(ia)) accumulate(t.grad(ia), g);
      if (t.requires_grad(ib)) {
        auto gb = t.grad(ib).data();
        for (std::size_t i = 0; i < gb.size(); ++i) gb[i] -= g[i];
      }
    },
    "sub");
}

Var mul(const Var & a, const Var & b)
{
  require_same_shape(a, b, "mul");
  Tensor out = a.value();
  auto o = out.data();
  auto bv = b.value().data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] *= bv[i];
  const std::size_t ia = a.id();
  const std::size_t ib = b.id();
  return a.tape()->record(
    std::move(out), {a, b},
    [ia, ib](Tape & t, std::size_t self) {
      const Tensor & g = *t.grad_if_any(self);
      if (t.requires_grad(ia)) {
        auto ga = t.grad(ia).data();
        const auto & bv = t.value(ib);
        for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += g[i] * bv[i];
      }
      if (t.requires_grad(ib)) {
        auto gb = t.grad(ib).data();
        const auto & av = t.value(ia);
        for (std::size_t i = 0; i < gb.size(); ++i) gb[i] += g[i] * av[i];
      }
    },
    "mul");
}

Var scale(const Var & x, double factor)
{
  Tensor out = x.value();
  for (auto & v : out.data()) v *= factor;
  const std::size_t ix = x.id();
  return x.tape()->record(
    std::move(out), {x},
    [ix, factor](Tape & t, std::size_t self) {
      const Tensor & g = *t.grad_if_any(self);
      auto gx = t.grad(ix).data();
      for (std::size_t i = 0; i < gx.size(); ++i) gx[i] += factor * g[i];
    },
    "scale");
}

Var sum(const Var & x)
{
  double s = 0.0;
  for (double v : x.value().data()) s += v;
  const std::size_t ix = x.id();
  return x.tape()->record(
    Tensor({1, 1}, {s}), {x},
    [ix](Tape & t, std::size_t self) {
      const double g = (*t.grad_if_any(self))[0];
      for (auto & v : t.grad(ix).data()) v += g;
    },
    "sum");
}

Var mean(const Var & x)
{
  const std::size_t n = x.value().size();
  if (n == 0) throw DimensionError("mean of an empty tensor");
  return scale(sum(x), 1.0 / static_cast<double>(n));
}

Var leaky_relu(const Var & x, double slope)
{
  Tensor out = x.value();
  for (auto & v : out.data()) v = v > 0.0 ? v : slope * v;
  const std::size_t ix = x.id();
  return x.tape()->record(
    std::move(out), {x},
    [ix, slope](Tape & t, std::size_t self) {
      const Tensor & g = *t.grad_if_any(self);
      const Tensor & xv = t.value(ix);
      auto gx = t.grad(ix).data();
      for (std::size_t i = 0; i < gx.size(); ++i) gx[i] += xv[i] > 0.0 ? g[i] : slope * g[i];
    },
    "leaky_relu");
}

Var relu(const Var & x)
{
  Tensor out = x.value();
  for (auto & v : out.data()) v = v > 0.0 ? v : 0.0;
  const std::size_t ix = x.id();
  return x.tape()->record(
    std::move(out), {x},
    [ix](Tape & t, std::size_t self) {
      const Tensor & g = *t.grad_if_any(self);
      const Tensor & xv = t.value(ix);
      auto gx = t.grad(ix).data();
      for (std::size_t i = 0; i < gx.size(); ++i) {
        if (xv[i] > 0.0) gx[i] += g[i];
      }
    },
    "relu");
}

Var smooth_l1(const Var & x)
{
  Tensor out = x.value();
  for (auto & v : out.data()) {
    const double a = std::abs(v);
    v = a < 1.0 ? 0.5 * v * v : a - 0.5;
  }
  const std::size_t ix = x.id();
  return x.tape()->record(
    std::move(out), {x},
    [ix](Tape & t, std::size_t self) {
      const Tensor & g = *t.grad_if_any(self);
      const Tensor & xv = t.value(ix);
      auto gx = t.grad(ix).data();
      for (std::size_t i = 0; i < gx.size(); ++i) {
        const double v = xv[i];
        const double d = std::abs(v) < 1.0 ? v : (v > 0.0 ? 1.0 : -1.0);
        gx[i] += d * g[i];
      }
    },
    "smooth_l1");
}

Var gather_rows(const Var & x, const Index & rows)
{
  require_rank2(x, "gather_rows");
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  Tensor out = Tensor::matrix(rows.size(), d);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r] >= n) {
      throw DimensionError(
        "gather_rows: index " + std::to_string(rows[r]) + " out of range for " +
        shape_to_string(x.value().shape()));
    }
    std::copy_n(x.value().row(rows[r]).begin(), d, out.row(r).begin());
  }
  const std::size_t ix = x.id();
  return x.tape()->record(
    std::move(out), {x},
    [ix, rows, d](Tape & t, std::size_t self) {
      const Tensor & g = *t.grad_if_any(self);
      Tensor & gx = t.grad(ix);
      for (std::size_t r = 0; r < rows.size(); ++r) {
        auto src = g.row(r);
        auto dst = gx.row(rows[r]);
        for (std::size_t c = 0; c < d; ++c) dst[c] += src[c];
      }
    },
    "gather_rows");
}

Var concat_rows(const std::vector<Var> & parts)
{
  if (parts.empty()) throw DimensionError("concat_rows: no inputs");
  const std::size_t d = parts.front().cols();
  std::size_t n = 0;
  for (const auto & p : parts) {
    require_rank2(p, "concat_rows");
    if (p.cols() != d) {
      throw DimensionError(
        "concat_rows: column mismatch " + shape_to_string(parts.front().value().shape()) +
        " vs " + shape_to_string(p.value().shape()));
    }
    n += p.rows();
  }
  Tensor out = Tensor::matrix(n, d);
  std::vector<std::size_t> ids;
  std::vector<std::size_t> offsets;
  std::size_t off = 0;
  for (const auto & p : parts) {
    std::copy(p.value().data().begin(), p.value().data().end(), out.data().begin() + off * d);
    ids.push_back(p.id());
    offsets.push_back(off);
    off += p.rows();
  }
  return parts.front().tape()->record(
    std::move(out), parts,
    [ids, offsets, d](Tape & t, std::size_t self) {
      const Tensor & g = *t.grad_if_any(self);
      for (std::size_t k = 0; k < ids.size(); ++k) {
        if (!t.requires_grad(ids[k])) continue;
        auto gp = t.grad(ids[k]).data();
        const double * src = g.data().data() + offsets[k] * d;
        for (std::size_t i = 0; i < gp.size(); ++i) gp[i] += src[i];
      }
    },
    "concat_rows");
}

Var concat_cols(const std::vector<Var> & parts)
{
  if (parts.empty()) throw DimensionError("concat_cols: no inputs");
  const std::size_t n = parts.front().rows();
  std::size_t d = 0;
  for (const auto & p : parts) {
    require_rank2(p, "concat_cols");
    if (p.rows() != n) {
      throw DimensionError(
        "concat_cols: row mismatch " + shape_to_string(parts.front().value().shape()) + " vs " +
        shape_to_string(p.value().shape()));
    }
    d += p.cols();
  }
  Tensor out = Tensor::matrix(n, d);
  std::vector<std::size_t> ids;
  std::vector<std::size_t> offsets;
  std::vector<std::size_t> widths;
  std::size_t off = 0;
  for (const auto & p : parts) {
    const std::size_t w = p.cols();
    for (std::size_t r = 0; r < n; ++r) {
      std::copy_n(p.value().row(r).begin(), w, out.row(r).begin() + off);
    }
    ids.push_back(p.id());
    offsets.push_back(off);
    widths.push_back(w);
    off += w;
  }
  return parts.front().tape()->record(
    std::move(out), parts,
    [ids, offsets, widths, n](Tape & t, std::size_t self) {
      const Tensor & g = *t.grad_if_any(self);
      for (std::size_t k = 0; k < ids.size(); ++k) {
        if (!t.requires_grad(ids[k])) continue;
        Tensor & gp = t.grad(ids[k]);
        for (std::size_t r = 0; r < n; ++r) {
          auto src = g.row(r);
          auto dst = gp.row(r);
          for (std::size_t c = 0; c < widths[k]; ++c) dst[c] += src[offsets[k] + c];
        }
      }
    },
    "concat_cols");
}

Var slice_cols(const Var & x, std::size_t begin, std::size_t end)
{
  require_rank2(x, "slice_cols");
  if (begin > end || end > x.cols()) {
    throw DimensionError(
      "slice_cols: [" + std::to_string(begin) + ", " + std::to_string(end) + ") outside " +
      shape_to_string(x.value().shape()));
  }
  const std::size_t n = x.rows();
  const std::size_t w = end - begin;
  Tensor out = Tensor::matrix(n, w);
  for (std::size_t r = 0; r < n; ++r) {
    std::copy_n(x.value().row(r).begin() + begin, w, out.row(r).begin());
  }
  const std::size_t ix = x.id();
  return x.tape()->record(
    std::move(out), {x},
    [ix, begin, w, n](Tape & t, std::size_t self) {
      const Tensor & g = *t.grad_if_any(self);
      Tensor & gx = t.grad(ix);
      for (std::size_t r = 0; r < n; ++r) {
        auto src = g.row(r);
        auto dst = gx.row(r);
        for (std::size_t c = 0; c < w; ++c) dst[begin + c] += src[c];
      }
    },
    "slice_cols");
}

Var reshape(const Var & x, std::size_t rows, std::size_t cols)
{
  Tensor out = x.value().reshaped({rows, cols});
  const std::size_t ix = x.id();
  return x.tape()->record(
    std::move(out), {x},
    [ix](Tape & t, std::size_t self) {
      const Tensor & g = *t.grad_if_any(self);
      auto gx = t.grad(ix).data();
      for (std::size_t i = 0; i < gx.size(); ++i) gx[i] += g[i];
    },
    "reshape");
}

Var rotate2d(const Var & x, const std::vector<double> & cos_a, const std::vector<double> & sin_a)
{
  require_rank2(x, "rotate2d");
  if (x.cols() != 2 || cos_a.size() != x.rows() || sin_a.size() != x.rows()) {
    throw DimensionError(
      "rotate2d: expected [N x 2] with N angles, got " + shape_to_string(x.value().shape()) +
      " and " + std::to_string(cos_a.size()) + " angles");
  }
  Tensor out = x.value();
  for (std::size_t r = 0; r < out.rows(); ++r) {
    const double a = x.value()(r, 0);
    const double b = x.value()(r, 1);
    out(r, 0) = cos_a[r] * a - sin_a[r] * b;
    out(r, 1) = sin_a[r] * a + cos_a[r] * b;
  }
  const std::size_t ix = x.id();
  return x.tape()->record(
    std::move(out), {x},
    [ix, cos_a, sin_a](Tape & t, std::size_t self) {
      const Tensor & g = *t.grad_if_any(self);
      Tensor & gx = t.grad(ix);
      for (std::size_t r = 0; r < g.rows(); ++r) {
        gx(r, 0) += cos_a[r] * g(r, 0) + sin_a[r] * g(r, 1);
        gx(r, 1) += -sin_a[r] * g(r, 0) + cos_a[r] * g(r, 1);
      }
    },
    "rotate2d");
}

Var segment_softmax(const Var & logits, const Index & segments, std::size_t n_segments)
{
  require_rank2(logits, "segment_softmax");
  const std::size_t e = logits.rows();
  const std::size_t h = logits.cols();
  if (segments.size() != e) {
    throw DimensionError(
      "segment_softmax: " + std::to_string(segments.size()) + " segment ids for " +
      std::to_string(e) + " rows");
  }
  const Tensor & x = logits.value();
  Tensor peak = Tensor::matrix(n_segments, h, -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < e; ++i) {
    if (segments[i] >= n_segments) throw DimensionError("segment_softmax: segment id out of range");
    for (std::size_t c = 0; c < h; ++c) peak(segments[i], c) = std::max(peak(segments[i], c), x(i, c));
  }
  Tensor out = Tensor::matrix(e, h);
  Tensor denom = Tensor::matrix(n_segments, h);
  for (std::size_t i = 0; i < e; ++i) {
    for (std::size_t c = 0; c < h; ++c) {
      const double v = std::exp(x(i, c) - peak(segments[i], c));
      out(i, c) = v;
      denom(segments[i], c) += v;
    }
  }
  for (std::size_t i = 0; i < e; ++i) {
    for (std::size_t c = 0; c < h; ++c) out(i, c) /= denom(segments[i], c);
  }
  const std::size_t il = logits.id();
  return logits.tape()->record(
    std::move(out), {logits},
    [il, segments, n_segments, e, h](Tape & t, std::size_t self) {
      const Tensor & g = *t.grad_if_any(self);
      const Tensor & y = t.value(self);
      Tensor dot = Tensor::matrix(n_segments, h);
      for (std::size_t i = 0; i < e; ++i) {
        for (std::size_t c = 0; c < h; ++c) dot(segments[i], c) += g(i, c) * y(i, c);
      }
      Tensor & gx = t.grad(il);
      for (std::size_t i = 0; i < e; ++i) {
        for (std::size_t c = 0; c < h; ++c) gx(i, c) += y(i, c) * (g(i, c) - dot(segments[i], c));
      }
    },
    "segment_softmax");
}

Var segment_sum(const Var & values, const Index & segments, std::size_t n_segments)
{
  require_rank2(values, "segment_sum");
  const std::size_t e = values.rows();
  const std::size_t d = values.cols();
  if (segments.size() != e) {
    throw DimensionError(
      "segment_sum: " + std::to_string(segments.size()) + " segment ids for " +
      std::to_string(e) + " rows");
  }
  Tensor out = Tensor::matrix(n_segments, d);
  for (std::size_t i = 0; i < e; ++i) {
    if (segments[i] >= n_segments) throw DimensionError("segment_sum: segment id out of range");
    auto src = values.value().row(i);
    auto dst = out.row(segments[i]);
    for (std::size_t c = 0; c < d; ++c) dst[c] += src[c];
  }
  const std::size_t iv = values.id();
  return values.tape()->record(
    std::move(out), {values},
    [iv, segments, d](Tape & t, std::size_t self) {
      const Tensor & g = *t.grad_if_any(self);
      Tensor & gv = t.grad(iv);
      for (std::size_t i = 0; i < segments.size(); ++i) {
        auto src = g.row(segments[i]);
        auto dst = gv.row(i);
        for (std::size_t c = 0; c < d; ++c) dst[c] += src[c];
      }
    },
    "segment_sum");
}

Var head_dot(const Var & x, const Var & a)
{
  require_rank2(x, "head_dot");
  require_rank2(a, "head_dot");
  const std::size_t heads = a.rows();
  const std::size_t d = a.cols();
  if (x.cols() != heads * d) {
    throw DimensionError(
      "head_dot: features " + shape_to_string(x.value().shape()) + " vs attention vectors " +
      shape_to_string(a.value().shape()));
  }
  const std::size_t e = x.rows();
  Tensor out = Tensor::matrix(e, heads);
  const Tensor & xv = x.value();
  const Tensor & av = a.value();
  const double * xp = xv.data().data();
  const double * ap = av.data().data();
  double * op = out.data().data();
  for (std::size_t i = 0; i < e; ++i) {
    for (std::size_t h = 0; h < heads; ++h) {
      const double * xr = xp + i * heads * d + h * d;
      const double * ar = ap + h * d;
      double s = 0.0;
      for (std::size_t k = 0; k < d; ++k) s += xr[k] * ar[k];
      op[i * heads + h] = s;
    }
  }
  const std::size_t ix = x.id();
  const std::size_t ia = a.id();
  return x.tape()->record(
    std::move(out), {x, a},
    [ix, ia, heads, d, e](Tape & t, std::size_t self) {
      const Tensor & g = *t.grad_if_any(self);
      const Tensor & xv = t.value(ix);
      const Tensor & av = t.value(ia);
      const double * gp = g.data().data();
      const double * ap = av.data().data();
      const double * xp = xv.data().data();
      if (t.requires_grad(ix)) {
        double * gxp = t.grad(ix).data().data();
        for (std::size_t i = 0; i < e; ++i) {
          for (std::size_t h = 0; h < heads; ++h) {
            const double gi = gp[i * heads + h];
            double * row = gxp + i * heads * d + h * d;
            const double * ar = ap + h * d;
            for (std::size_t k = 0; k < d; ++k) row[k] += gi * ar[k];
          }
        }
      }
      if (t.requires_grad(ia)) {
        double * gap = t.grad(ia).data().data();
        for (std::size_t i = 0; i < e; ++i) {
          for (std::size_t h = 0; h < heads; ++h) {
            const double gi = gp[i * heads + h];
            const double * xr = xp + i * heads * d + h * d;
            double * ar = gap + h * d;
            for (std::size_t k = 0; k < d; ++k) ar[k] += gi * xr[k];
          }
        }
      }
    },
    "head_dot");
}

Var head_scale(const Var & x, const Var & alpha)
{
  require_rank2(x, "head_scale");
  require_rank2(alpha, "head_scale");
  const std::size_t e = x.rows();
  const std::size_t heads = alpha.cols();
  if (alpha.rows() != e || heads == 0 || x.cols() % heads != 0) {
    throw DimensionError(
      "head_scale: features " + shape_to_string(x.value().shape()) + " vs weights " +
      shape_to_string(alpha.value().shape()));
  }
  const std::size_t d = x.cols() / heads;
  Tensor out = x.value();
  const Tensor & av = alpha.value();
  double * op = out.data().data();
  const double * ap = av.data().data();
  for (std::size_t i = 0; i < e; ++i) {
    for (std::size_t h = 0; h < heads; ++h) {
      const double a = ap[i * heads + h];
      double * row = op + (i * heads + h) * d;
      for (std::size_t k = 0; k < d; ++k) row[k] *= a;
    }
  }
  const std::size_t ix = x.id();
  const std::size_t ia = alpha.id();
  return x.tape()->record(
    std::move(out), {x, alpha},
    [ix, ia, heads, d, e](Tape & t, std::size_t self) {
      const Tensor & g = *t.grad_if_any(self);
      const Tensor & xv = t.value(ix);
      const Tensor & av = t.value(ia);
      const double * gp = g.data().data();
      const double * ap = av.data().data();
      const double * xp = xv.data().data();
      if (t.requires_grad(ix)) {
        double * gxp = t.grad(ix).data().data();
        for (std::size_t i = 0; i < e; ++i) {
          for (std::size_t h = 0; h < heads; ++h) {
            const double a = ap[i * heads + h];
            const std::size_t base = (i * heads + h) * d;
            for (std::size_t k = 0; k < d; ++k) gxp[base + k] += gp[base + k] * a;
          }
        }
      }
      if (t.requires_grad(ia)) {
        double * gap = t.grad(ia).data().data();
        for (std::size_t i = 0; i < e; ++i) {
          for (std::size_t h = 0; h < heads; ++h) {
            const std::size_t base = (i * heads + h) * d;
            double s = 0.0;
            for (std::size_t k = 0; k < d; ++k) s += gp[base + k] * xp[base + k];
            gap[i * heads + h] += s;
          }
        }
      }
    },
    "head_scale");
}

Var batch_norm(
  const Var & x, const Var & gamma, const Var & beta, RunningStats stats,
  const BatchNormOptions & options)
{
  require_rank2(x, "batch_norm");
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  if (gamma.value().size() != d || beta.value().size() != d) {
    throw DimensionError(
      "batch_norm: input " + shape_to_string(x.value().shape()) + " vs scale " +
      shape_to_string(gamma.value().shape()) + " and shift " +
      shape_to_string(beta.value().shape()));
  }
  if (n == 0) throw DimensionError("batch_norm: empty batch");
  const Tensor & xv = x.value();
  std::vector<double> mu(d, 0.0);
  std::vector<double> var(d, 0.0);
  if (options.training) {
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < d; ++c) mu[c] += xv(r, c);
    }
    for (auto & m : mu) m /= static_cast<double>(n);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < d; ++c) {
        const double dv = xv(r, c) - mu[c];
        var[c] += dv * dv;
      }
    }
    for (auto & v : var) v /= static_cast<double>(n);
    if (stats.mean != nullptr && stats.var != nullptr) {
      for (std::size_t c = 0; c < d; ++c) {
        (*stats.mean)[c] = (1.0 - options.momentum) * (*stats.mean)[c] + options.momentum * mu[c];
        (*stats.var)[c] = (1.0 - options.momentum) * (*stats.var)[c] + options.momentum * var[c];
      }
    }
  } else {
    if (stats.mean == nullptr || stats.var == nullptr) {
      throw std::logic_error("batch_norm: evaluation mode needs running statistics");
    }
    for (std::size_t c = 0; c < d; ++c) {
      mu[c] = (*stats.mean)[c];
      var[c] = (*stats.var)[c];
    }
  }
  std::vector<double> inv_std(d);
  for (std::size_t c = 0; c < d; ++c) inv_std[c] = 1.0 / std::sqrt(var[c] + options.eps);

  Tensor xhat = Tensor::matrix(n, d);
  Tensor out = Tensor::matrix(n, d);
  const auto gv = gamma.value().data();
  const auto bv = beta.value().data();
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      const double h = (xv(r, c) - mu[c]) * inv_std[c];
      xhat(r, c) = h;
      out(r, c) = gv[c] * h + bv[c];
    }
  }
  const std::size_t ix = x.id();
  const std::size_t ig = gamma.id();
  const std::size_t ib = beta.id();
  const bool training = options.training;
  return x.tape()->record(
    std::move(out), {x, gamma, beta},
    [ix, ig, ib, n, d, training, xhat = std::move(xhat), inv_std](Tape & t, std::size_t self) {
      const Tensor & g = *t.grad_if_any(self);
      const auto gv = t.value(ig).data();
      if (t.requires_grad(ig)) {
        auto gg = t.grad(ig).data();
        for (std::size_t r = 0; r < n; ++r) {
          for (std::size_t c = 0; c < d; ++c) gg[c] += g(r, c) * xhat(r, c);
        }
      }
      if (t.requires_grad(ib)) {
        auto gb = t.grad(ib).data();
        for (std::size_t r = 0; r < n; ++r) {
          for (std::size_t c = 0; c < d; ++c) gb[c] += g(r, c);
        }
      }
      if (!t.requires_grad(ix)) return;
      Tensor & gx = t.grad(ix);
      if (!training) {
        for (std::size_t r = 0; r < n; ++r) {
          for (std::size_t c = 0; c < d; ++c) gx(r, c) += g(r, c) * gv[c] * inv_std[c];
        }
        return;
      }
      // dx = gamma * inv_std / n * (n * dy - sum(dy) - xhat * sum(dy * xhat))
      std::vector<double> sum_g(d, 0.0);
      std::vector<double> sum_gx(d, 0.0);
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
          sum_g[c] += g(r, c);
          sum_gx[c] += g(r, c) * xhat(r, c);
        }
      }
      const double inv_n = 1.0 / static_cast<double>(n);
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
          gx(r, c) += gv[c] * inv_std[c] *
                      (g(r, c) - inv_n * sum_g[c] - xhat(r, c) * inv_n * sum_gx[c]);
        }
      }
    },
    "batch_norm");
}

}  // namespace hgat
