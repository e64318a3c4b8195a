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
#include "hgat/encoders.hpp"

namespace hgat
{

namespace
{

const std::vector<Relation> & lane_relations()
{
  static const std::vector<Relation> r(kLaneRelations.begin(), kLaneRelations.end());
  return r;
}

const std::vector<Relation> & all_relations()
{
  static const std::vector<Relation> r(kAllRelations.begin(), kAllRelations.end());
  return r;
}

MlpLayout final_layout(std::size_t dim) { return {2 * dim, {dim, dim, dim}}; }

}  // namespace

void add_encoders(ParameterStore & store, const EncoderLayout & layout, Rng & rng)
{
  const std::size_t d = layout.hgat.dim;
  add_residual_encoder(store, "enc.lane", kLaneFeatureDim, d, rng);
  add_residual_encoder(store, "enc.step", kStepFeatureDim, d, rng);
  add_conv1d_block(store, "enc.traj.block0", kStepFeatureDim, d, rng);
  add_conv1d_block(store, "enc.traj.block1", d, d, rng);
  for (std::size_t i = 0; i < layout.map_layers; ++i) {
    add_hgat_layer(store, "map.layer" + std::to_string(i), layout.hgat, lane_relations(), rng, {NodeType::kLane});
  }
  for (std::size_t i = 0; i < layout.scene_layers; ++i) {
    add_hgat_layer(store, "scene.layer" + std::to_string(i), layout.hgat, all_relations(), rng);
  }
  add_mlp(store, "final", final_layout(d), rng);
}

Var encode_trajectories(Context & ctx, const Var & step_features, std::size_t agents, std::size_t observed_steps)
{
  if (observed_steps == 0) throw DimensionError("trajectory encoder: no observed steps");
  if (step_features.rows() != agents * observed_steps) {
    throw DimensionError(
      "trajectory encoder: " + std::to_string(step_features.rows()) + " step rows for " + std::to_string(agents) +
      " agents x " + std::to_string(observed_steps) + " steps");
  }
  const TemporalLayout layout = TemporalLayout::blocks(agents, observed_steps);
  Var h = apply_conv1d_block(ctx, "enc.traj.block0", step_features, layout);
  h = apply_conv1d_block(ctx, "enc.traj.block1", h, layout);
  Index last(agents);
  for (std::size_t a = 0; a < agents; ++a) last[a] = static_cast<std::uint32_t>((a + 1) * observed_steps - 1);
  return gather_rows(h, last);
}

namespace
{

Var encode_rows(Context & ctx, const std::string & name, const Var & x)
{
  // batch norm has no statistics for an empty table (a scene without lanes)
  if (x.rows() == 0) return ctx.constant(Tensor::matrix(0, ctx.store().value(name + ".l3.W").cols()));
  return apply_residual_encoder(ctx, name, x);
}

}  // namespace

Var encode_steps(Context & ctx, const Var & step_features) { return encode_rows(ctx, "enc.step", step_features); }

Var encode_lanes(Context & ctx, const Var & lane_features) { return encode_rows(ctx, "enc.lane", lane_features); }

Var encode_map(
  Context & ctx, const EncoderLayout & layout, const HeteroGraph & graph, const Var & lanes,
  std::vector<LayerAttention> * attention)
{
  // step and trajectory slots stay empty; map layers never touch them
  NodeFeatures x{lanes, Var(), Var()};
  for (std::size_t i = 0; i < layout.map_layers; ++i) {
    LayerAttention record;
    record.layer = attention ? attention->size() : 0;
    x = hgat_layer(ctx, "map.layer" + std::to_string(i), layout.hgat, graph, x, lane_relations(), attention ? &record : nullptr);
    if (attention) attention->push_back(std::move(record));
  }
  return x[0];
}

NodeFeatures encode_scene(
  Context & ctx, const EncoderLayout & layout, const HeteroGraph & graph, const NodeFeatures & x,
  std::vector<LayerAttention> * attention)
{
  NodeFeatures h = x;
  for (std::size_t i = 0; i < layout.scene_layers; ++i) {
    LayerAttention record;
    record.layer = attention ? attention->size() : 0;
    h = hgat_layer(ctx, "scene.layer" + std::to_string(i), layout.hgat, graph, h, all_relations(), attention ? &record : nullptr);
    if (attention) attention->push_back(std::move(record));
  }
  return h;
}

Var final_features(Context & ctx, const Var & scene_trajectories, const Var & residual)
{
  return apply_mlp(ctx, "final", final_layout(residual.cols()), concat_cols({scene_trajectories, residual}));
}

EncodedScene encode(Context & ctx, const EncoderLayout & layout, const HeteroGraph & graph, bool record_attention)
{
  const NodeTable & lanes = graph.lanes();
  const NodeTable & steps = graph.steps();
  EncodedScene out;
  std::vector<LayerAttention> * att = record_attention ? &out.attention : nullptr;
  const Var lane_raw = ctx.constant(lanes.features);
  const Var step_raw = ctx.constant(steps.features);
  Var lane0 = encode_lanes(ctx, lane_raw);
  out.lanes = encode_map(ctx, layout, graph, lane0, att);
  const Var step0 = encode_steps(ctx, step_raw);
  out.trajectory_residual = encode_trajectories(ctx, step_raw, graph.agents.size(), graph.observed_steps());
  const NodeFeatures scene = encode_scene(ctx, layout, graph, {out.lanes, step0, out.trajectory_residual}, att);
  out.steps = scene[1];
  out.trajectories = scene[2];
  out.final = final_features(ctx, out.trajectories, out.trajectory_residual);
  return out;
}

}  // namespace hgat
