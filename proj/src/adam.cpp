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
#include "hgat/adam.hpp"

#include <cmath>

namespace hgat
{

void Adam::step(ParameterStore & store, const std::map<std::string, Tensor> & grads, double lr)
{
  for (const auto & [name, g] : grads) {
    if (!g.all_finite()) throw NonFiniteError("non-finite gradient for parameter " + name);
    if (g.shape() != store.at(name).value.shape()) {
      throw DimensionError(
        "gradient for " + name + " has shape " + shape_to_string(g.shape()) + ", parameter has " +
        shape_to_string(store.at(name).value.shape()));
    }
  }
  ++t_;
  const double c1 = 1.0 - std::pow(options_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(options_.beta2, static_cast<double>(t_));
  for (const auto & [name, g] : grads) {
    Parameter & p = store.at(name);
    if (p.kind != ParamKind::kWeight || !p.trainable) continue;
    auto [it, fresh] = moments_.try_emplace(name);
    if (fresh) {
      it->second.m = Tensor(g.shape(), 0.0);
      it->second.v = Tensor(g.shape(), 0.0);
    }
    auto m = it->second.m.data();
    auto v = it->second.v.data();
    auto w = p.value.data();
    for (std::size_t i = 0; i < w.size(); ++i) {
      m[i] = options_.beta1 * m[i] + (1.0 - options_.beta1) * g[i];
      v[i] = options_.beta2 * v[i] + (1.0 - options_.beta2) * g[i] * g[i];
      const double mhat = m[i] / c1;
      const double vhat = v[i] / c2;
      w[i] -= lr * mhat / (std::sqrt(vhat) + options_.eps);
    }
  }
}

}  // namespace hgat
