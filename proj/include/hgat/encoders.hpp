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
#ifndef HGAT__ENCODERS_HPP_
#define HGAT__ENCODERS_HPP_

#include "hgat/hgat.hpp"
#include "hgat/nn.hpp"

#include <vector>

namespace hgat
{

struct EncoderLayout
{
  HgatLayout hgat;
  std::size_t map_layers = 4;
  std::size_t scene_layers = 4;
};

/// Per-node features after the encoder pipeline; every matrix has width D.
struct EncodedScene
{
  /// Lane features after the map encoder.
  Var lanes;
  Var steps;
  /// Full-trajectory features after the scene encoder.
  Var trajectories;
  /// Trajectory-encoder output, fed again to the final processor.
  Var trajectory_residual;
  /// [N_agents x D]
  Var final;
  /// One entry per HGAT layer (map layers first) when recording was requested.
  std::vector<LayerAttention> attention;
};

/**
 * Parameters: `enc.lane`, `enc.step` (residual encoders), `enc.traj.block{0,1}`
 * (temporal conv blocks), `map.layer{i}` (lane relations, lane residual only),
 * `scene.layer{i}` (all relations) and `final` (3-layer MLP on [scene | residual]).
 */
void add_encoders(ParameterStore & store, const EncoderLayout & layout, Rng & rng);

/// Two temporal conv blocks over each agent's observed steps (agent-major rows);
/// returns the row of the last observed step per agent, [N_agents x D].
Var encode_trajectories(Context & ctx, const Var & step_features, std::size_t agents, std::size_t observed_steps);

Var encode_steps(Context & ctx, const Var & step_features);
Var encode_lanes(Context & ctx, const Var & lane_features);

/// Map-encoder HGAT stack over lane-lane relations only.
Var encode_map(
  Context & ctx, const EncoderLayout & layout, const HeteroGraph & graph, const Var & lanes,
  std::vector<LayerAttention> * attention = nullptr);

/// Scene-encoder HGAT stack over every relation.
NodeFeatures encode_scene(
  Context & ctx, const EncoderLayout & layout, const HeteroGraph & graph, const NodeFeatures & x,
  std::vector<LayerAttention> * attention = nullptr);

Var final_features(Context & ctx, const Var & scene_trajectories, const Var & residual);

/// Whole pipeline from raw graph features.
EncodedScene encode(Context & ctx, const EncoderLayout & layout, const HeteroGraph & graph, bool record_attention = false);

}  // namespace hgat

#endif  // HGAT__ENCODERS_HPP_
