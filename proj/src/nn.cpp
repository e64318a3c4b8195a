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

#include "hgat/nn.hpp"

#include <cmath>

namespace hgat
{

Tensor xavier_uniform(std::size_t fan_in, std::size_t fan_out, Rng & rng)
{
  const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  Tensor w = Tensor::matrix(fan_in, fan_out);
  for (auto & v : w.data()) v = rng.uniform(-bound, bound);
  return w;
}

void add_linear(
  ParameterStore & store, const std::string & name, std::size_t din, std::size_t dout, Rng & rng,
  Init init, bool bias)
{
  Tensor w;
  switch (init) {
    case Init::kXavier:
      w = xavier_uniform(din, dout, rng);
      break;
    case Init::kZero:
      w = Tensor::matrix(din, dout);
      break;
    case Init::kIdentity:
      w = Tensor::matrix(din, dout);
      for (std::size_t i = 0; i < std::min(din, dout); ++i) w(i, i) = 1.0;
      break;
  }
  store.add(name + ".W", std::move(w));
  if (bias) store.add(name + ".b", Tensor::vector(dout));
}

Var apply_linear(Context & ctx, const std::string & name, const Var & x)
{
  const Var w = ctx.param(name + ".W");
  const std::string bias = name + ".b";
  return linear(x, w, ctx.store().contains(bias) ? ctx.param(bias) : Var());
}

void add_batch_norm(ParameterStore & store, const std::string & name, std::size_t dim)
{
  store.add(name + ".gamma", Tensor::vector(dim, 1.0));
  store.add(name + ".beta", Tensor::vector(dim, 0.0));
  store.add(name + ".running_mean", Tensor::vector(dim, 0.0), ParamKind::kBuffer);
  store.add(name + ".running_var", Tensor::vector(dim, 1.0), ParamKind::kBuffer);
}

void add_mlp(ParameterStore & store, const std::string & name, const MlpLayout & layout, Rng & rng)
{
  std::size_t in = layout.in;
  for (std::size_t i = 0; i < layout.widths.size(); ++i) {
    const bool last = i + 1 == layout.widths.size();
    const std::string layer = name + ".l" + std::to_string(i);
    add_linear(store, layer, in, layout.widths[i], rng, last ? layout.last_init : Init::kXavier);
    if ((!last || layout.activate_last) && layout.batch_norm) {
      add_batch_norm(store, name + ".bn" + std::to_string(i), layout.widths[i]);
    }
    in = layout.widths[i];
  }
}

Var apply_mlp(Context & ctx, const std::string & name, const MlpLayout & layout, const Var & x)
{
  Var h = x;
  for (std::size_t i = 0; i < layout.widths.size(); ++i) {
    const bool last = i + 1 == layout.widths.size();
    h = apply_linear(ctx, name + ".l" + std::to_string(i), h);
    if (!last || layout.activate_last) {
      if (layout.batch_norm) h = ctx.batch_norm(name + ".bn" + std::to_string(i), h);
      h = relu(h);
    }
  }
  return h;
}

void add_residual_encoder(
  ParameterStore & store, const std::string & name, std::size_t in, std::size_t dim, Rng & rng)
{
  for (std::size_t i = 0; i < 4; ++i) {
    add_linear(store, name + ".l" + std::to_string(i), i == 0 ? in : dim, dim, rng);
    add_batch_norm(store, name + ".bn" + std::to_string(i), dim);
  }
}

Var apply_residual_encoder(Context & ctx, const std::string & name, const Var & x)
{
  const Var h1 = relu(ctx.batch_norm(name + ".bn0", apply_linear(ctx, name + ".l0", x)));
  Var h = h1;
  for (std::size_t i = 1; i < 3; ++i) {
    const std::string k = std::to_string(i);
    h = relu(ctx.batch_norm(name + ".bn" + k, apply_linear(ctx, name + ".l" + k, h)));
  }
  h = ctx.batch_norm(name + ".bn3", apply_linear(ctx, name + ".l3", h));
  return relu(add(h, h1));
}

TemporalLayout TemporalLayout::blocks(std::size_t count, std::size_t length)
{
  TemporalLayout layout;
  layout.prev1.reserve(count * length);
  layout.prev2.reserve(count * length);
  for (std::size_t a = 0; a < count; ++a) {
    for (std::size_t t = 0; t < length; ++t) {
      const std::size_t base = a * length;
      layout.prev1.push_back(static_cast<std::uint32_t>(base + (t >= 1 ? t - 1 : 0)));
      layout.prev2.push_back(static_cast<std::uint32_t>(base + (t >= 2 ? t - 2 : 0)));
    }
  }
  return layout;
}

void add_conv1d_block(
  ParameterStore & store, const std::string & name, std::size_t cin, std::size_t cout, Rng & rng,
  Init init)
{
  Tensor kernel;
  if (init == Init::kIdentity) {
    // taps are stacked [t-2 | t-1 | t]; identity on the current step
    kernel = Tensor::matrix(3 * cin, cout);
    for (std::size_t i = 0; i < std::min(cin, cout); ++i) kernel(2 * cin + i, i) = 1.0;
  } else if (init == Init::kZero) {
    kernel = Tensor::matrix(3 * cin, cout);
  } else {
    kernel = xavier_uniform(3 * cin, cout, rng);
  }
  store.add(name + ".conv.W", std::move(kernel));
  store.add(name + ".conv.b", Tensor::vector(cout));
  add_batch_norm(store, name + ".bn", cout);
  if (cin != cout) {
    add_linear(store, name + ".skip", cin, cout, rng, init == Init::kIdentity ? Init::kIdentity : Init::kXavier, false);
  }
}

Var apply_conv1d_block(
  Context & ctx, const std::string & name, const Var & x, const TemporalLayout & layout)
{
  if (x.rows() == 0) throw DimensionError("conv1d block '" + name + "': empty input sequence");
  if (layout.prev1.size() != x.rows() || layout.prev2.size() != x.rows()) {
    throw DimensionError(
      "conv1d block '" + name + "': layout covers " + std::to_string(layout.prev1.size()) +
      " rows, input has " + std::to_string(x.rows()));
  }
  const Var taps = concat_cols({gather_rows(x, layout.prev2), gather_rows(x, layout.prev1), x});
  const Var conv = ctx.batch_norm(name + ".bn", apply_linear(ctx, name + ".conv", taps));
  const std::string skip = name + ".skip";
  const Var residual = ctx.store().contains(skip + ".W") ? apply_linear(ctx, skip, x) : x;
  return relu(add(conv, residual));
}

}  // namespace hgat
