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

#ifndef HGAT__NN_HPP_
#define HGAT__NN_HPP_

#include "hgat/ops.hpp"
#include "hgat/parameters.hpp"

#include <string>
#include <vector>

namespace hgat
{

enum class Init { kXavier, kZero, kIdentity };

Tensor xavier_uniform(std::size_t fan_in, std::size_t fan_out, Rng & rng);

/// Registers `name.W` [din x dout] and, optionally, `name.b` [dout] (zero).
void add_linear(
  ParameterStore & store, const std::string & name, std::size_t din, std::size_t dout, Rng & rng,
  Init init = Init::kXavier, bool bias = true);
Var apply_linear(Context & ctx, const std::string & name, const Var & x);

/// Registers `name.gamma` (ones), `name.beta` (zeros) and the running statistics buffers.
void add_batch_norm(ParameterStore & store, const std::string & name, std::size_t dim);

/**
 * @brief Stack of linear layers.
 *
 * Every layer but the last is followed by (optional) batch norm and ReLU. The last
 * layer is plain linear unless `activate_last` is set.
 */
struct MlpLayout
{
  std::size_t in = 0;
  std::vector<std::size_t> widths;
  bool batch_norm = true;
  bool activate_last = false;
  Init last_init = Init::kXavier;
};

void add_mlp(ParameterStore & store, const std::string & name, const MlpLayout & layout, Rng & rng);
Var apply_mlp(Context & ctx, const std::string & name, const MlpLayout & layout, const Var & x);

/// Four linear layers with batch norm; the first layer's activation skips to the last.
void add_residual_encoder(
  ParameterStore & store, const std::string & name, std::size_t in, std::size_t dim, Rng & rng);
Var apply_residual_encoder(Context & ctx, const std::string & name, const Var & x);

/**
 * @brief Row layout of one or more time series stacked in a matrix.
 *
 * prev1[r] / prev2[r] name the row one / two steps earlier in the same series, clamped
 * to the series start (causal replication padding).
 */
struct TemporalLayout
{
  Index prev1;
  Index prev2;

  /// Layout for `count` series of `length` steps stored series-major.
  static TemporalLayout blocks(std::size_t count, std::size_t length);
};

/// Kernel-3 temporal convolution, batch norm, ReLU and an additive residual path
/// (1x1 projection when channel counts differ).
void add_conv1d_block(
  ParameterStore & store, const std::string & name, std::size_t cin, std::size_t cout, Rng & rng,
  Init init = Init::kXavier);
Var apply_conv1d_block(
  Context & ctx, const std::string & name, const Var & x, const TemporalLayout & layout);

}  // namespace hgat

#endif  // HGAT__NN_HPP_
