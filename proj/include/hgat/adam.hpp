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
#ifndef HGAT__ADAM_HPP_
#define HGAT__ADAM_HPP_

#include "hgat/parameters.hpp"

#include <map>
#include <string>

namespace hgat
{

struct AdamOptions
{
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Adam with bias correction. One first/second moment slot per parameter, created on
/// first use.
class Adam
{
public:
  explicit Adam(AdamOptions options = {}) : options_(options) {}

  /**
   * Applies one update with learning rate `lr` to every parameter in `grads`.
   * All gradients are checked first; a non-finite entry aborts the whole step with a
   * NonFiniteError naming the parameter, leaving the store untouched.
   */
  void step(ParameterStore & store, const std::map<std::string, Tensor> & grads, double lr);
  void step(ParameterStore & store, const std::map<std::string, Tensor> & grads)
  {
    step(store, grads, options_.lr);
  }

  long long steps() const noexcept { return t_; }
  const AdamOptions & options() const noexcept { return options_; }

private:
  struct Moments
  {
    Tensor m;
    Tensor v;
  };

  AdamOptions options_;
  long long t_ = 0;
  std::map<std::string, Moments> moments_;
};

}  // namespace hgat

#endif  // HGAT__ADAM_HPP_
