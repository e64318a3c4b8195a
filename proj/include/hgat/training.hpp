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
#ifndef HGAT__TRAINING_HPP_
#define HGAT__TRAINING_HPP_

#include "hgat/loss.hpp"
#include "hgat/model.hpp"

#include <functional>
#include <ostream>
#include <vector>

namespace hgat
{

/// none: proposals only; frozen: refinement trained on top of a fixed base; e2e: everything jointly.
enum class Regime { kNone, kFrozen, kE2e };

const char * to_string(Regime r);
Regime regime_from_string(const std::string & s);

struct StepRecord
{
  std::size_t step = 0;
  double traj = 0.0;
  double conf = 0.0;
  double total = 0.0;
  double lr = 0.0;
};

struct TrainOptions
{
  Regime regime = Regime::kNone;
  TrainConfig config;
  /// Called after every optimizer step.
  std::function<void(const StepRecord &)> on_step;
};

/// Scene indices of every step: consecutive chunks of seeded per-epoch permutations.
std::vector<std::vector<std::size_t>> batch_schedule(
  std::size_t scenes, std::size_t batch_size, std::size_t steps, std::uint64_t seed);

/// Objective of one batch under a regime (refined outputs for frozen/e2e, plus the
/// weighted proposal loss for e2e). `logged` receives the main loss terms.
Var regime_loss(
  Context & ctx, const Model & model, const HeteroGraph & batch, Regime regime, const TrainConfig & config,
  LossBreakdown * logged = nullptr);

/// Marks the weights the regime optimizes as trainable (all others frozen).
void apply_regime(ParameterStore & store, Regime regime);

/// Adam with cosine (or constant) learning rate over `config.steps` steps; then, when
/// configured, exact recalibration of the batch-norm running statistics. Deterministic
/// given the seed. The trainable flags are restored to all-true on return.
std::vector<StepRecord> train(Model & model, const std::vector<HeteroGraph> & dataset, const TrainOptions & options);

/// Running statistics of the regime's trainable batch-norm layers become exact averages
/// of batch statistics over one pass of the dataset.
void recalibrate_batch_norm(Model & model, const std::vector<HeteroGraph> & dataset, std::size_t batch_size, Regime regime);

/// Columns step, L_traj, L_conf, total.
void write_loss_csv(std::ostream & out, const std::vector<StepRecord> & records);

HeteroGraph merge_batch(const std::vector<HeteroGraph> & dataset, const std::vector<std::size_t> & indices);

}  // namespace hgat

#endif  // HGAT__TRAINING_HPP_
