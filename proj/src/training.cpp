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
#include "hgat/training.hpp"

#include "hgat/adam.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <numeric>

namespace hgat
{

const char * to_string(Regime r)
{
  switch (r) {
    case Regime::kNone:
      return "none";
    case Regime::kFrozen:
      return "frozen";
    case Regime::kE2e:
      return "e2e";
  }
  return "?";
}

Regime regime_from_string(const std::string & s)
{
  if (s == "none") return Regime::kNone;
  if (s == "frozen") return Regime::kFrozen;
  if (s == "e2e") return Regime::kE2e;
  throw std::invalid_argument("unknown training regime '" + s + "' (expected none, frozen or e2e)");
}

std::vector<std::vector<std::size_t>> batch_schedule(
  std::size_t scenes, std::size_t batch_size, std::size_t steps, std::uint64_t seed)
{
  if (scenes == 0) throw std::invalid_argument("training needs at least one scene");
  if (batch_size == 0) throw std::invalid_argument("batch size must be positive");
  const std::size_t per_batch = std::min(batch_size, scenes);
  Rng rng(seed ^ 0x5eedba7c4ULL);
  std::vector<std::size_t> order;
  std::size_t cursor = 0;
  std::vector<std::vector<std::size_t>> out;
  out.reserve(steps);
  for (std::size_t s = 0; s < steps; ++s) {
    std::vector<std::size_t> batch;
    while (batch.size() < per_batch) {
      if (cursor == order.size()) {
        order.resize(scenes);
        std::iota(order.begin(), order.end(), std::size_t{0});
        for (std::size_t i = scenes; i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);
        cursor = 0;
      }
      batch.push_back(order[cursor++]);
    }
    out.push_back(std::move(batch));
  }
  return out;
}

HeteroGraph merge_batch(const std::vector<HeteroGraph> & dataset, const std::vector<std::size_t> & indices)
{
  std::vector<const HeteroGraph *> parts;
  for (auto i : indices) parts.push_back(&dataset.at(i));
  return merge_graphs(parts);
}

void apply_regime(ParameterStore & store, Regime regime)
{
  if (regime == Regime::kFrozen) {
    store.set_trainable([](const std::string & n) { return n.starts_with("refine."); });
  } else {
    store.set_trainable([](const std::string &) { return true; });
  }
}

Var regime_loss(
  Context & ctx, const Model & model, const HeteroGraph & batch, Regime regime, const TrainConfig & config,
  LossBreakdown * logged)
{
  const LossOptions lo = LossOptions::from(config);
  ForwardOptions fo;
  fo.refine = regime != Regime::kNone;
  const ModelOutput out = run_model(ctx, model, batch, fo);
  if (regime == Regime::kNone) {
    LossBreakdown l = forecast_loss(out.proposals, batch.agents, lo);
    const Var total = l.total;
    if (logged) *logged = std::move(l);
    return total;
  }
  LossBreakdown refined = forecast_loss(*out.refined, batch.agents, lo);
  Var total = refined.total;
  if (regime == Regime::kE2e && config.proposal_loss_weight > 0.0) {
    total = add(total, scale(forecast_loss(out.proposals, batch.agents, lo).total, config.proposal_loss_weight));
  }
  if (logged) *logged = std::move(refined);
  return total;
}

std::vector<StepRecord> train(Model & model, const std::vector<HeteroGraph> & dataset, const TrainOptions & options)
{
  const TrainConfig & cfg = options.config;
  if (dataset.empty()) throw std::invalid_argument("training dataset is empty");
  const auto schedule = batch_schedule(dataset.size(), cfg.batch_size, cfg.steps, cfg.seed);
  apply_regime(model.store, options.regime);
  Adam adam({cfg.lr, cfg.adam_beta1, cfg.adam_beta2, cfg.adam_eps});
  std::vector<StepRecord> records;
  records.reserve(cfg.steps);
  try {
    for (std::size_t s = 0; s < cfg.steps; ++s) {
      const HeteroGraph batch = merge_batch(dataset, schedule[s]);
      double lr = cfg.lr;
      if (cfg.lr_schedule == "cosine") {
        lr = 0.5 * cfg.lr * (1.0 + std::cos(std::numbers::pi * static_cast<double>(s) / static_cast<double>(cfg.steps)));
      }
      Tape tape;
      Context ctx(tape, model.store, true);
      LossBreakdown parts;
      const Var total = regime_loss(ctx, model, batch, options.regime, cfg, &parts);
      tape.backward(total);
      adam.step(model.store, ctx.gradients(), lr);
      StepRecord r{s + 1, parts.traj.value()[0], parts.conf.value()[0], total.value()[0], lr};
      records.push_back(r);
      if (options.on_step) options.on_step(r);
    }
    if (cfg.precise_bn) recalibrate_batch_norm(model, dataset, cfg.batch_size, options.regime);
  } catch (...) {
    apply_regime(model.store, Regime::kE2e);
    throw;
  }
  apply_regime(model.store, Regime::kE2e);
  model.use_refinement = options.regime != Regime::kNone;
  return records;
}

void recalibrate_batch_norm(Model & model, const std::vector<HeteroGraph> & dataset, std::size_t batch_size, Regime regime)
{
  apply_regime(model.store, regime);
  ForwardOptions fo;
  fo.refine = regime != Regime::kNone;
  std::size_t seen = 0;
  for (std::size_t start = 0; start < dataset.size(); start += batch_size) {
    std::vector<std::size_t> idx;
    for (std::size_t i = start; i < std::min(dataset.size(), start + batch_size); ++i) idx.push_back(i);
    const HeteroGraph batch = merge_batch(dataset, idx);
    ++seen;
    fo.bn_momentum = 1.0 / static_cast<double>(seen);
    Tape tape;
    Context ctx(tape, model.store, true);
    run_model(ctx, model, batch, fo);
  }
}

void write_loss_csv(std::ostream & out, const std::vector<StepRecord> & records)
{
  out << "step,L_traj,L_conf,total\n";
  out << std::setprecision(17);
  for (const auto & r : records) out << r.step << ',' << r.traj << ',' << r.conf << ',' << r.total << '\n';
}

}  // namespace hgat
