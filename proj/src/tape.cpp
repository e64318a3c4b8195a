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

#include "hgat/tape.hpp"

#include <string>

namespace hgat
{

Var Tape::push(Node node)
{
  nodes_.push_back(std::move(node));
  return Var(this, nodes_.size() - 1);
}

Var Tape::constant(Tensor value)
{
  value.require_finite("constant");
  Node n;
  n.value = std::move(value);
  n.op = "constant";
  return push(std::move(n));
}

Var Tape::variable(Tensor value)
{
  value.require_finite("variable");
  Node n;
  n.value = std::move(value);
  n.requires_grad = true;
  n.op = "variable";
  return push(std::move(n));
}

Var Tape::record(Tensor value, std::initializer_list<Var> inputs, BackwardFn backward, const char * op)
{
  return record(std::move(value), std::vector<Var>(inputs), std::move(backward), op);
}

Var Tape::record(Tensor value, const std::vector<Var> & inputs, BackwardFn backward, const char * op)
{
  value.require_finite(std::string("output of ") + op);
  bool any = false;
  for (const auto & v : inputs) {
    if (v.tape() != this) throw std::logic_error(std::string(op) + ": input from a different tape");
    any = any || requires_grad(v.id());
  }
  Node n;
  n.value = std::move(value);
  n.requires_grad = any;
  if (any) n.backward = std::move(backward);
  n.op = op;
  return push(std::move(n));
}

Tensor & Tape::grad(std::size_t id)
{
  auto & node = nodes_[id];
  if (!node.grad) node.grad.emplace(node.value.shape(), 0.0);
  return *node.grad;
}

const Tensor * Tape::grad_if_any(std::size_t id) const
{
  const auto & node = nodes_[id];
  return node.grad ? &*node.grad : nullptr;
}

void Tape::backward(const Var & out)
{
  if (out.value().size() != 1) {
    throw DimensionError(
      "backward() without seed needs a single-element output, got " +
      shape_to_string(out.value().shape()));
  }
  backward(out, Tensor(out.value().shape(), 1.0));
}

void Tape::backward(const Var & out, const Tensor & seed)
{
  if (seed.shape() != out.value().shape()) {
    throw DimensionError(
      "backward seed " + shape_to_string(seed.shape()) + " vs output " +
      shape_to_string(out.value().shape()));
  }
  if (!requires_grad(out.id())) return;
  auto & g = grad(out.id());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] += seed[i];
  for (std::size_t i = out.id() + 1; i-- > 0;) {
    auto & node = nodes_[i];
    if (!node.backward || !node.grad) continue;
    node.backward(*this, i);
  }
}

}  // namespace hgat
