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

#ifndef HGAT__OPS_HPP_
#define HGAT__OPS_HPP_

#include "hgat/tape.hpp"
#include "hgat/tensor.hpp"

#include <cstdint>
#include <vector>

namespace hgat
{

using Index = std::vector<std::uint32_t>;

// Dense algebra ------------------------------------------------------------

Var matmul(const Var & a, const Var & b);
/// y = x W + b, with b of shape [Dout] (or an invalid Var for no bias).
Var linear(const Var & x, const Var & w, const Var & b);
Var add(const Var & a, const Var & b);
Var sub(const Var & a, const Var & b);
/// Elementwise product of equally shaped operands.
Var mul(const Var & a, const Var & b);
Var scale(const Var & x, double factor);
/// Sum of all entries as a [1 x 1] tensor.
Var sum(const Var & x);
Var mean(const Var & x);

// Activations --------------------------------------------------------------

Var leaky_relu(const Var & x, double slope);
Var relu(const Var & x);
/// Elementwise Huber loss with transition at |x| = 1.
Var smooth_l1(const Var & x);

// Shape plumbing -----------------------------------------------------------

Var gather_rows(const Var & x, const Index & rows);
Var concat_rows(const std::vector<Var> & parts);
Var concat_cols(const std::vector<Var> & parts);
Var slice_cols(const Var & x, std::size_t begin, std::size_t end);
Var reshape(const Var & x, std::size_t rows, std::size_t cols);

/// Row-wise planar rotation of [N x 2] by per-row angles given as cosines and sines.
Var rotate2d(const Var & x, const std::vector<double> & cos_a, const std::vector<double> & sin_a);

// Graph reductions ---------------------------------------------------------

/**
 * @brief Softmax over entries that share a segment, independently per column.
 *
 * logits is [E x H]; segments[e] names the group of row e. Each column of each
 * group sums to one.
 */
Var segment_softmax(const Var & logits, const Index & segments, std::size_t n_segments);

/// Row i of the result is the sum of the value rows with segments[e] == i.
Var segment_sum(const Var & values, const Index & segments, std::size_t n_segments);

/// out[e, h] = sum_k x[e, h*d + k] * a[h, k] for x of shape [E x H*d] and a of shape [H x d].
Var head_dot(const Var & x, const Var & a);

/// out[e, h*d + k] = x[e, h*d + k] * alpha[e, h].
Var head_scale(const Var & x, const Var & alpha);

// Normalization ------------------------------------------------------------

struct RunningStats
{
  Tensor * mean = nullptr;
  Tensor * var = nullptr;
};

struct BatchNormOptions
{
  bool training = true;
  double momentum = 0.1;
  double eps = 1e-5;
};

/**
 * Normalizes each column of x over its rows. In training mode the batch statistics
 * are used (biased variance) and the running statistics, when given, move toward
 * them with the configured momentum. In evaluation mode the running statistics
 * are used.
 */
Var batch_norm(
  const Var & x, const Var & gamma, const Var & beta, RunningStats stats,
  const BatchNormOptions & options);

}  // namespace hgat

#endif  // HGAT__OPS_HPP_
