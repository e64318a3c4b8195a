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
#ifndef HGAT__GRAPH_HPP_
#define HGAT__GRAPH_HPP_

#include "hgat/geometry.hpp"
#include "hgat/ops.hpp"
#include "hgat/scenario.hpp"
#include "hgat/tensor.hpp"

#include "json.hpp"

#include <array>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace hgat
{

enum class NodeType { kLane, kStep, kTrajectory };
constexpr std::size_t kNodeTypeCount = 3;

enum class Relation {
  kLaneLeft,
  kLaneRight,
  kLanePred,
  kLaneSucc,
  kLaneToStep,
  kStepToLane,
  kStepToStep,
  kStepToTraj,
  kTrajToStep,
};
constexpr std::size_t kRelationCount = 9;

constexpr std::array<Relation, kRelationCount> kAllRelations{
  Relation::kLaneLeft,   Relation::kLaneRight,  Relation::kLanePred,
  Relation::kLaneSucc,   Relation::kLaneToStep, Relation::kStepToLane,
  Relation::kStepToStep, Relation::kStepToTraj, Relation::kTrajToStep};

constexpr std::array<Relation, 4> kLaneRelations{
  Relation::kLaneLeft, Relation::kLaneRight, Relation::kLanePred, Relation::kLaneSucc};

const char * to_string(NodeType t);
const char * to_string(Relation r);
Relation relation_from_string(const std::string & s);
NodeType source_type(Relation r);
NodeType target_type(Relation r);

/// Width of the raw features of each node type and of each relation's edge features.
constexpr std::size_t kLaneFeatureDim = 13;
constexpr std::size_t kStepFeatureDim = 14;
constexpr std::size_t kTrajectoryFeatureDim = 5;
std::size_t edge_feature_dim(Relation r);

struct NodeTable
{
  NodeType type = NodeType::kLane;
  Tensor features;
  /// Frame-relative meters; empty for trajectory nodes.
  std::vector<Vec2> coords;
  /// Frame-relative lane direction or agent heading (rad); empty for trajectory nodes.
  std::vector<double> headings;
  /// Observation step (step nodes only).
  std::vector<std::uint32_t> timestep;
  /// Index into HeteroGraph::agents (step and trajectory nodes).
  std::vector<std::uint32_t> owner;
  /// Source lane id (lane nodes only).
  std::vector<std::int64_t> lane_id;
  /// Scene of each node when several graphs are batched together.
  std::vector<std::uint32_t> scene;

  std::size_t size() const noexcept { return scene.size(); }
  bool has_coordinates() const noexcept { return coords.size() == size(); }
};

struct EdgeTable
{
  Relation relation = Relation::kLaneLeft;
  Index src;
  Index dst;
  Tensor features;

  std::size_t size() const noexcept { return src.size(); }
};

struct AgentInfo
{
  std::string id;
  AgentType type = AgentType::kVehicle;
  TrackCategory category = TrackCategory::kUnscored;
  std::uint32_t scene = 0;
  /// Last observed pose in the scene frame.
  Vec2 last_position;
  double last_heading = 0.0;
  /// Ground-truth future positions in the scene frame (empty when unknown).
  std::vector<Vec2> future;
};

struct SceneInfo
{
  std::string id;
  /// Focal agent's last observed pose in world coordinates.
  Frame frame;
  std::size_t observed_steps = 0;
  std::size_t future_steps = 0;
  double dt_s = 0.0;
};

struct GraphConfig
{
  double lane_spacing = 2.0;
  std::size_t step_lane_k = 5;
  double step_lane_radius = 7.0;
  /// Maximum |lane direction - agent heading| for vehicle-like agents, degrees.
  double orientation_gate_deg = 60.0;
  std::size_t step_step_k = 5;
  double step_step_radius = 100.0;
  /// Multiplies positions and displacements in raw features.
  double position_scale = 0.1;
  /// Multiplies velocities and speeds in raw features.
  double speed_scale = 0.1;
  std::set<Relation> removed;
};

struct HeteroGraph
{
  std::vector<SceneInfo> scenes;
  std::vector<AgentInfo> agents;
  std::array<NodeTable, kNodeTypeCount> nodes;
  std::array<EdgeTable, kRelationCount> edges;

  NodeTable & table(NodeType t) { return nodes[static_cast<std::size_t>(t)]; }
  const NodeTable & table(NodeType t) const { return nodes[static_cast<std::size_t>(t)]; }
  EdgeTable & edge(Relation r) { return edges[static_cast<std::size_t>(r)]; }
  const EdgeTable & edge(Relation r) const { return edges[static_cast<std::size_t>(r)]; }

  const NodeTable & lanes() const { return table(NodeType::kLane); }
  const NodeTable & steps() const { return table(NodeType::kStep); }
  const NodeTable & trajectories() const { return table(NodeType::kTrajectory); }

  std::size_t observed_steps() const { return scenes.empty() ? 0 : scenes.front().observed_steps; }
  std::size_t future_steps() const { return scenes.empty() ? 0 : scenes.front().future_steps; }
};

class GraphError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Lane nodes at equal arc-length intervals of at most `spacing`, endpoints included.
NodeTable sample_lane_nodes(
  const std::vector<LanePolyline> & lanes, const Frame & frame, const GraphConfig & config);

/// lane_left, lane_right, lane_pred and lane_succ, in that order.
std::array<EdgeTable, 4> build_lane_edges(
  const NodeTable & lanes, const std::vector<LanePolyline> & lane_polylines, const GraphConfig & config);

/// Observed step nodes of every track, agent-major (row = agent * T_obs + t).
NodeTable build_step_nodes(
  const Scenario & scenario, const Frame & frame, const GraphConfig & config);

/// (lane_to_step, step_to_lane). Each direction keeps the k nearest sources per target.
std::pair<EdgeTable, EdgeTable> build_step_lane_edges(
  const NodeTable & steps, const NodeTable & lanes, const std::vector<AgentType> & owner_types,
  const GraphConfig & config);

EdgeTable build_step_step_edges(const NodeTable & steps, const GraphConfig & config);

/// (step_to_traj, traj_to_step). Throws GraphError for a step without a trajectory node.
std::pair<EdgeTable, EdgeTable> build_trajectory_edges(
  const NodeTable & steps, const NodeTable & trajectories, std::size_t observed_steps);

/// Edge features for displacement src - dst in the target's heading frame plus relative
/// heading (sin, cos).
Tensor relative_edge_features(
  const NodeTable & src_nodes, const NodeTable & dst_nodes, const Index & src, const Index & dst,
  double position_scale);

HeteroGraph assemble_scene_graph(const Scenario & scenario, const GraphConfig & config = {});

/// Disjoint union; node and agent indices of later graphs are offset.
HeteroGraph merge_graphs(const std::vector<const HeteroGraph *> & graphs);

nlohmann::json graph_to_json(const HeteroGraph & g);

/**
 * @brief Up to `k` candidates closest to `query` within `radius`.
 *
 * Ordering is by squared distance rounded to 1e-8 m^2, then by candidate index.
 * `radius` < 0 disables the cap.
 */
std::vector<std::uint32_t> nearest_within(
  const std::vector<Vec2> & points, const std::vector<std::uint32_t> & candidates, const Vec2 & query,
  std::size_t k, double radius);

}  // namespace hgat

#endif  // HGAT__GRAPH_HPP_
