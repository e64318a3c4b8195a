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

#ifndef HGAT__TAPE_HPP_
#define HGAT__TAPE_HPP_

#include "hgat/tensor.hpp"

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <optional>
#include <vector>

namespace hgat
{

class Tape;

/// Handle to a value recorded on a Tape. Cheap to copy; valid while the tape lives.
class Var
{
public:
  Var() = default;
  Var(Tape * tape, std::size_t id) : tape_(tape), id_(id) {}

  bool valid() const noexcept { return tape_ != nullptr; }
  Tape * tape() const noexcept { return tape_; }
  std::size_t id() const noexcept { return id_; }

  const Tensor & value() const;
  bool requires_grad() const;
  std::size_t rows() const { return value().rows(); }
  std::size_t cols() const { return value().cols(); }

private:
  Tape * tape_ = nullptr;
  std::size_t id_ = 0;
};

/**
 * @brief Linear record of forward operations for reverse-mode differentiation.
 *
 * Operations are appended in execution order, so inputs always precede outputs.
 * backward() walks the record in exact reverse order and calls each operation's
 * backward rule, which reads the output gradient and accumulates into its inputs.
 */
class Tape
{
public:
  using BackwardFn = std::function<void(Tape &, std::size_t self)>;

  Tape() = default;
  Tape(const Tape &) = delete;
  Tape & operator=(const Tape &) = delete;

  Var constant(Tensor value);
  Var variable(Tensor value);

  /// Append an operation. The rule is dropped when no input requires a gradient.
  Var record(Tensor value, std::initializer_list<Var> inputs, BackwardFn backward, const char * op);
  Var record(Tensor value, const std::vector<Var> & inputs, BackwardFn backward, const char * op);

  const Tensor & value(std::size_t id) const { return nodes_[id].value; }
  bool requires_grad(std::size_t id) const { return nodes_[id].requires_grad; }

  /// Gradient slot, zero-allocated on first touch.
  Tensor & grad(std::size_t id);
  /// Gradient if any contribution reached the node.
  const Tensor * grad_if_any(std::size_t id) const;

  /// Seed d(out)/d(out) = 1 for a single-element output and propagate.
  void backward(const Var & out);
  void backward(const Var & out, const Tensor & seed);

  std::size_t size() const noexcept { return nodes_.size(); }

private:
  struct Node
  {
    Tensor value;
    std::optional<Tensor> grad;
    bool requires_grad = false;
    BackwardFn backward;
    const char * op = "";
  };

  Var push(Node node);

  std::vector<Node> nodes_;
};

inline const Tensor & Var::value() const { return tape_->value(id_); }
inline bool Var::requires_grad() const { return tape_->requires_grad(id_); }

}  // namespace hgat

#endif  // HGAT__TAPE_HPP_
