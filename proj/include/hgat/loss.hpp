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
#ifndef HGAT__LOSS_HPP_
#define HGAT__LOSS_HPP_

#include "hgat/config.hpp"
#include "hgat/forecaster.hpp"

#include <vector>

namespace hgat
{

struct LossOptions
{
  double focal = 1.0;
  double scored = 0.5;
  double unscored = 0.2;
  double fragment = 0.0;
  double margin = 0.2;
  /// Weight of the trajectory term against the confidence term.
  double traj_weight = 1.0;

  double weight(TrackCategory c) const;
  static LossOptions from(const TrainConfig & c);
};

struct AgentLoss
{
  double traj = 0.0;
  double conf = 0.0;
  double weight = 0.0;
  std::size_t best = 0;
};

/// Weighted sums over agents; per-agent terms are unweighted.
struct LossBreakdown
{
  Var total;
  Var traj;
  Var conf;
  std::vector<AgentLoss> agents;
};

/// Mode whose last point is closest to the last ground-truth point; ties go to the lower index.
std::size_t best_mode(const Tensor & coords, std::size_t agent, std::size_t modes, const std::vector<Vec2> & future);

/**
 * Winner-take-all loss: smooth-L1 averaged over the best mode's 2T coordinates, and a
 * max-margin term averaged over the other modes' logits, summed over agents with the
 * category weights. Agents whose ground truth does not cover the horizon are skipped.
 */
LossBreakdown forecast_loss(const Forecast & f, const std::vector<AgentInfo> & agents, const LossOptions & options);

}  // namespace hgat

#endif  // HGAT__LOSS_HPP_
