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
#include "hgat/model.hpp"

namespace hgat
{

EncoderLayout Model::encoder_layout() const
{
  EncoderLayout l;
  l.hgat.dim = config.dim;
  l.hgat.heads = config.heads;
  l.hgat.slope = config.leaky_slope;
  l.map_layers = config.map_layers;
  l.scene_layers = config.scene_layers;
  return l;
}

ForecastLayout Model::forecast_layout() const
{
  ForecastLayout l;
  l.dim = config.dim;
  l.modes = config.modes;
  l.future_steps = future_steps;
  return l;
}

RefineLayout Model::refine_layout() const
{
  RefineLayout l;
  l.dim = config.dim;
  l.heads = config.refine_heads;
  l.iterations = config.refine_iterations;
  l.position_scale = config.graph.position_scale;
  return l;
}

Model create_model(const ModelConfig & config, std::size_t future_steps, std::uint64_t seed)
{
  if (future_steps == 0) throw std::invalid_argument("model needs at least one future step");
  Model m;
  m.config = config;
  m.future_steps = future_steps;
  // one generator per part so that adding a part never reshuffles another's weights
  Rng enc(seed * 4 + 1);
  Rng head(seed * 4 + 2);
  Rng ref(seed * 4 + 3);
  add_encoders(m.store, m.encoder_layout(), enc);
  add_forecaster(m.store, m.forecast_layout(), head);
  add_refinement(m.store, m.refine_layout(), ref);
  return m;
}

ModelOutput run_model(Context & ctx, const Model & model, const HeteroGraph & graph, const ForwardOptions & options)
{
  if (graph.future_steps() != model.future_steps) {
    throw std::invalid_argument(
      "scene has " + std::to_string(graph.future_steps()) + " future steps, model predicts " + std::to_string(model.future_steps));
  }
  ctx.bn_momentum = options.bn_momentum > 0.0 ? options.bn_momentum : model.config.bn_momentum;
  ctx.bn_eps = model.config.bn_eps;
  ModelOutput out;
  out.encoded = encode(ctx, model.encoder_layout(), graph, options.record_attention);
  out.proposals = forecast(ctx, model.forecast_layout(), out.encoded.final, graph.agents);
  if (options.refine) {
    out.refined = refine(
      ctx, model.refine_layout(), refinement_inputs(graph, out.encoded, out.proposals),
      options.record_refinement_edges ? &out.refinement_edges : nullptr);
  }
  return out;
}

PredictionSet predict(Model & model, const HeteroGraph & graph, bool refine)
{
  Tape tape;
  Context ctx(tape, model.store, false);
  ForwardOptions opt;
  opt.refine = refine;
  return to_prediction_set(run_model(ctx, model, graph, opt).final());
}

}  // namespace hgat
