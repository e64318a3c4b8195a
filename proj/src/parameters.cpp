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

#include "hgat/parameters.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hgat
{

Tensor & ParameterStore::add(const std::string & name, Tensor value, ParamKind kind)
{
  auto [it, inserted] = entries_.emplace(name, Parameter{std::move(value), kind, kind == ParamKind::kWeight});
  if (!inserted) throw std::logic_error("duplicate parameter name: " + name);
  return it->second.value;
}

Parameter & ParameterStore::at(const std::string & name)
{
  auto it = entries_.find(name);
  if (it == entries_.end()) throw std::out_of_range("unknown parameter: " + name);
  return it->second;
}

const Parameter & ParameterStore::at(const std::string & name) const
{
  auto it = entries_.find(name);
  if (it == entries_.end()) throw std::out_of_range("unknown parameter: " + name);
  return it->second;
}

void ParameterStore::set_trainable(const std::function<bool(const std::string &)> & keep)
{
  for (auto & [name, p] : entries_) {
    if (p.kind == ParamKind::kWeight) p.trainable = keep(name);
  }
}

std::size_t ParameterStore::scalar_count(ParamKind kind) const
{
  std::size_t n = 0;
  for (const auto & [name, p] : entries_) {
    if (p.kind == kind) n += p.value.size();
  }
  return n;
}

bool ParameterStore::operator==(const ParameterStore & other) const
{
  if (entries_.size() != other.entries_.size()) return false;
  for (const auto & [name, p] : entries_) {
    auto it = other.entries_.find(name);
    if (it == other.entries_.end() || it->second.kind != p.kind) return false;
    if (!bitwise_equal(p.value, it->second.value)) return false;
  }
  return true;
}

double Rng::normal()
{
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Var Context::param(const std::string & name)
{
  auto it = bound_.find(name);
  if (it != bound_.end()) return it->second;
  const Parameter & p = store_.at(name);
  Var v = (p.kind == ParamKind::kWeight && p.trainable) ? tape_.variable(p.value)
                                                        : tape_.constant(p.value);
  bound_.emplace(name, v);
  return v;
}

Var Context::batch_norm(const std::string & prefix, const Var & x)
{
  const Var gamma = param(prefix + ".gamma");
  const Var beta = param(prefix + ".beta");
  BatchNormOptions opt;
  opt.training = training_ && store_.at(prefix + ".gamma").trainable;
  opt.momentum = bn_momentum;
  opt.eps = bn_eps;
  RunningStats stats{&store_.value(prefix + ".running_mean"), &store_.value(prefix + ".running_var")};
  return hgat::batch_norm(x, gamma, beta, stats, opt);
}

std::map<std::string, Tensor> Context::gradients() const
{
  std::map<std::string, Tensor> out;
  for (const auto & [name, v] : bound_) {
    if (!v.requires_grad()) continue;
    const Tensor * g = tape_.grad_if_any(v.id());
    out.emplace(name, g ? *g : Tensor(v.value().shape(), 0.0));
  }
  return out;
}

}  // namespace hgat
