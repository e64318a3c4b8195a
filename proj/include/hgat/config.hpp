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
#ifndef HGAT__CONFIG_HPP_
#define HGAT__CONFIG_HPP_

#include "hgat/graph.hpp"

#include <map>
#include <stdexcept>
#include <string>

namespace hgat
{

struct ModelConfig
{
  std::size_t dim = 64;
  std::size_t heads = 2;
  std::size_t modes = 6;
  std::size_t map_layers = 4;
  std::size_t scene_layers = 4;
  double leaky_slope = 0.2;
  std::size_t refine_iterations = 3;
  std::size_t refine_heads = 2;
  double bn_momentum = 0.1;
  double bn_eps = 1e-5;
  GraphConfig graph;
};

struct TrainConfig
{
  std::size_t steps = 500;
  std::size_t batch_size = 4;
  double lr = 1e-3;
  /// "cosine" or "constant".
  std::string lr_schedule = "cosine";
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  double margin = 0.2;
  double traj_weight = 1.0;
  double weight_focal = 1.0;
  double weight_scored = 0.5;
  double weight_unscored = 0.2;
  double weight_fragment = 0.0;
  /// Weight of the proposal loss added to the refined loss when training end to end.
  double proposal_loss_weight = 0.5;
  std::uint64_t seed = 0;
  /// Recompute batch-norm running statistics as exact averages after training.
  bool precise_bn = true;
};

struct Config
{
  ModelConfig model;
  TrainConfig train;
};

class ConfigError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Flat "key = value" text; '#' starts a comment. Unknown keys and bad values throw.
Config parse_config(const std::string & text, Config base = {});
Config load_config(const std::string & path);
/// Every key with its current value, in documentation order.
std::string config_to_text(const Config & config);
std::map<std::string, std::string> config_to_map(const Config & config);

}  // namespace hgat

#endif  // HGAT__CONFIG_HPP_
