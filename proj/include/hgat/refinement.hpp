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
#ifndef HGAT__REFINEMENT_HPP_
#define HGAT__REFINEMENT_HPP_

#include "hgat/encoders.hpp"
#include "hgat/forecaster.hpp"

#include <stdexcept>
#include <vector>

namespace hgat
{

struct RefineLayout
{
  std::size_t dim = 64;
  std::size_t heads = 2;
  std::size_t iterations = 3;
  std::size_t lane_k = 5;
  double position_scale = 0.1;
  std::size_t confidence_layers = 5;
};

/// Raised when the inputs handed to the refinement module miss a required field.
class RefinementContractError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/**
 * @brief Everything the refinement module consumes.
 *
 * Lane nodes need coordinates, headings, a scene index and features; proposals need
 * agent-major coordinates [N*K x 2T], auxiliary features [N*K x D]; agents need their
 * final features [N x D], scene index and last heading. Any producer filling these can
 * be refined.
 */
struct RefinementInputs
{
  std::vector<Vec2> lane_coords;
  std::vector<double> lane_headings;
  std::vector<std::uint32_t> lane_scene;
  Var lane_features;

  std::vector<AgentInfo> agents;
  Var final;
  std::size_t modes = 0;
  std::size_t future_steps = 0;
  Var coords;
  Var aux;
};

RefinementInputs refinement_inputs(const HeteroGraph & graph, const EncodedScene & encoded, const Forecast & proposals);

/// Step node of (agent a, mode k, step t) has row (a * K + k) * T + t; trajectory node
/// a * K + k.
struct RefinementGraph
{
  std::size_t agents = 0;
  std::size_t modes = 0;
  std::size_t future_steps = 0;

  std::vector<Vec2> lane_coords;
  std::vector<Vec2> lane_directions;
  std::vector<std::uint32_t> lane_scene;
  Var lanes;

  /// [N_step x 2], frame-relative metres
  Var step_coords;
  Var steps;
  Var trajectories;
  std::vector<std::uint32_t> step_scene;
  /// Trajectory node of each step node.
  Index step_owner;
  /// Last heading of the step's agent.
  std::vector<double> step_heading;
};

/// Parameters under `refine.`: step initialization, the three transformer convolutions
/// shared by every iteration, the zero-initialized offset MLP, the final accumulation
/// and the confidence MLP.
void add_refinement(ParameterStore & store, const RefineLayout & layout, Rng & rng);

RefinementGraph init_refinement_graph(Context & ctx, const RefineLayout & layout, const RefinementInputs & in);

/**
 * @brief Exact k nearest lane nodes of each step node within its scene, no radius.
 *
 * Edges run lane -> step, grouped by step in increasing distance (ties to the lower lane
 * index). Throws RefinementContractError when a scene has no lane nodes.
 */
EdgeTable dynamic_edges(
  const std::vector<Vec2> & step_coords, const std::vector<std::uint32_t> & step_scene,
  const std::vector<Vec2> & lane_coords, const std::vector<std::uint32_t> & lane_scene, std::size_t k);

/// [E x 4]: lane minus step position in the step's agent heading frame (scaled), and the
/// lane direction in that frame. Differentiable in the step coordinates.
Var dynamic_edge_features(Context & ctx, const RefinementGraph & g, const EdgeTable & edges, double position_scale);

/// Registers `prefix.query`, `.key`, `.value` (with bias) and, when edge_dim > 0,
/// `prefix.edge` (no bias).
void add_transformer_conv(ParameterStore & store, const std::string & prefix, std::size_t dim, std::size_t edge_dim, Rng & rng);

/// out_i = x_i + sum_j alpha_ij (W_v x_j + b_v + W_e e_ij), alpha = softmax_j of
/// q_i . (W_k x_j + b_k + W_e e_ij) / sqrt(d) per head over the target's incident edges.
/// `edge_features` may be an invalid Var when the relation has none.
Var transformer_conv(
  Context & ctx, const std::string & prefix, std::size_t heads, const Var & x_dst, const Var & x_src, const Index & src,
  const Index & dst, const Var & edge_features, Var * alpha = nullptr);

/// Rebuilds the lane edges from the current coordinates, runs lane->step, step->traj,
/// traj->step and adds the predicted offsets to the step coordinates.
void refinement_iteration(Context & ctx, const RefineLayout & layout, RefinementGraph & g, EdgeTable * edges = nullptr);

/// `iterations` rounds, a final step->traj accumulation and the refinement confidence head.
/// The result carries the refined coordinates; aux is the final trajectory-node feature.
Forecast refine(
  Context & ctx, const RefineLayout & layout, const RefinementInputs & in, std::vector<EdgeTable> * edges = nullptr);

}  // namespace hgat

#endif  // HGAT__REFINEMENT_HPP_
