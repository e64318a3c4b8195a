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

#ifndef HGAT__PARAMETERS_HPP_
#define HGAT__PARAMETERS_HPP_

#include "hgat/ops.hpp"
#include "hgat/tape.hpp"
#include "hgat/tensor.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <unordered_map>

namespace hgat
{

/// Learned weights are optimized; buffers (running statistics) are only carried along.
enum class ParamKind { kWeight, kBuffer };

struct Parameter
{
  Tensor value;
  ParamKind kind = ParamKind::kWeight;
  bool trainable = true;
};

/// Named, shaped real arrays for every weight and buffer of a model. Iteration is by name.
class ParameterStore
{
public:
  Tensor & add(const std::string & name, Tensor value, ParamKind kind = ParamKind::kWeight);

  bool contains(const std::string & name) const { return entries_.count(name) > 0; }
  Parameter & at(const std::string & name);
  const Parameter & at(const std::string & name) const;
  Tensor & value(const std::string & name) { return at(name).value; }

  const std::map<std::string, Parameter> & entries() const noexcept { return entries_; }
  std::map<std::string, Parameter> & entries() noexcept { return entries_; }

  /// Marks weights trainable iff `keep(name)` holds. Buffers are untouched.
  void set_trainable(const std::function<bool(const std::string &)> & keep);

  std::size_t scalar_count(ParamKind kind) const;

  bool operator==(const ParameterStore & other) const;

private:
  std::map<std::string, Parameter> entries_;
};

/// Deterministic generator; distribution transforms are written out so results do not
/// depend on the standard library implementation.
class Rng
{
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  /// Uniform integer in [0, n).
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n; }
  std::uint64_t next() { return engine_(); }

private:
  std::mt19937_64 engine_;
};

/**
 * @brief Binds a ParameterStore to a Tape for one forward/backward pass.
 *
 * Each weight becomes one tape leaf the first time it is requested, so repeated uses
 * share a gradient slot. Leaves require gradients only for trainable weights.
 */
class Context
{
public:
  Context(Tape & tape, ParameterStore & store, bool training)
  : tape_(tape), store_(store), training_(training)
  {
  }

  Tape & tape() noexcept { return tape_; }
  ParameterStore & store() noexcept { return store_; }
  bool training() const noexcept { return training_; }

  Var param(const std::string & name);
  Var constant(Tensor value) { return tape_.constant(std::move(value)); }

  double bn_momentum = 0.1;
  double bn_eps = 1e-5;

  /// Batch statistics are used (and running statistics updated) only when training and
  /// the layer's scale is trainable; frozen layers run in evaluation mode.
  Var batch_norm(const std::string & prefix, const Var & x);

  /// Gradients of every bound trainable weight after Tape::backward.
  std::map<std::string, Tensor> gradients() const;

private:
  Tape & tape_;
  ParameterStore & store_;
  bool training_;
  std::unordered_map<std::string, Var> bound_;
};

}  // namespace hgat

#endif  // HGAT__PARAMETERS_HPP_
