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
#include "hgat/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace hgat
{

const char * to_string(NodeType t)
{
  switch (t) {
    case NodeType::kLane:
      return "lane";
    case NodeType::kStep:
      return "trajectory_step";
    case NodeType::kTrajectory:
      return "full_trajectory";
  }
  return "?";
}

const char * to_string(Relation r)
{
  switch (r) {
    case Relation::kLaneLeft:
      return "lane_left";
    case Relation::kLaneRight:
      return "lane_right";
    case Relation::kLanePred:
      return "lane_pred";
    case Relation::kLaneSucc:
      return "lane_succ";
    case Relation::kLaneToStep:
      return "lane_to_step";
    case Relation::kStepToLane:
      return "step_to_lane";
    case Relation::kStepToStep:
      return "step_to_step";
    case Relation::kStepToTraj:
      return "step_to_traj";
    case Relation::kTrajToStep:
      return "traj_to_step";
  }
  return "?";
}

Relation relation_from_string(const std::string & s)
{
  for (auto r : kAllRelations) {
    if (s == to_string(r)) return r;
  }
  throw std::invalid_argument("unknown relation '" + s + "'");
}

NodeType source_type(Relation r)
{
  switch (r) {
    case Relation::kLaneToStep:
      return NodeType::kLane;
    case Relation::kStepToLane:
    case Relation::kStepToStep:
    case Relation::kStepToTraj:
      return NodeType::kStep;
    case Relation::kTrajToStep:
      return NodeType::kTrajectory;
    default:
      return NodeType::kLane;
  }
}

NodeType target_type(Relation r)
{
  switch (r) {
    case Relation::kLaneToStep:
    case Relation::kStepToStep:
    case Relation::kTrajToStep:
      return NodeType::kStep;
    case Relation::kStepToTraj:
      return NodeType::kTrajectory;
    default:
      return NodeType::kLane;
  }
}

std::size_t edge_feature_dim(Relation r)
{
  switch (r) {
    case Relation::kStepToStep:
      return 5;
    case Relation::kStepToTraj:
    case Relation::kTrajToStep:
      return 1;
    default:
      return 4;
  }
}

namespace
{
constexpr double kDistanceGrid = 1e8;
}  // namespace

std::vector<std::uint32_t> nearest_within(
  const std::vector<Vec2> & points, const std::vector<std::uint32_t> & candidates, const Vec2 & query,
  std::size_t k, double radius)
{
  // distances are compared on a 1e-8 m^2 grid so that geometric ties resolve by index
  // regardless of rounding noise from the frame transform
  std::vector<std::pair<long long, std::uint32_t>> scored;
  scored.reserve(candidates.size());
  const double r2 = radius * radius;
  for (auto c : candidates) {
    const double d2 = (points[c] - query).squared_norm();
    if (radius < 0.0 || d2 <= r2) scored.emplace_back(std::llround(d2 * kDistanceGrid), c);
  }
  const std::size_t keep = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep), scored.end());
  std::vector<std::uint32_t> out;
  out.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) out.push_back(scored[i].second);
  return out;
}

namespace
{

void one_hot(Tensor & t, std::size_t row, std::size_t offset, std::size_t index)
{
  t(row, offset + index) = 1.0;
}

EdgeTable empty_edges(Relation r)
{
  EdgeTable e;
  e.relation = r;
  e.features = Tensor::matrix(0, edge_feature_dim(r));
  return e;
}

void push_edge(EdgeTable & e, std::size_t src, std::size_t dst)
{
  e.src.push_back(static_cast<std::uint32_t>(src));
  e.dst.push_back(static_cast<std::uint32_t>(dst));
}

bool orientation_ok(double a, double b, double gate_rad)
{
  return std::abs(wrap_angle(a - b)) <= gate_rad + 1e-12;
}

}  // namespace

Tensor relative_edge_features(
  const NodeTable & src_nodes, const NodeTable & dst_nodes, const Index & src, const Index & dst,
  double position_scale)
{
  Tensor f = Tensor::matrix(src.size(), 4);
  for (std::size_t e = 0; e < src.size(); ++e) {
    const double target_heading = dst_nodes.headings[dst[e]];
    const Vec2 d = rotate(src_nodes.coords[src[e]] - dst_nodes.coords[dst[e]], -target_heading) * position_scale;
    const double rel = src_nodes.headings[src[e]] - target_heading;
    f(e, 0) = d.x;
    f(e, 1) = d.y;
    f(e, 2) = std::sin(rel);
    f(e, 3) = std::cos(rel);
  }
  return f;
}

NodeTable sample_lane_nodes(
  const std::vector<LanePolyline> & lanes, const Frame & frame, const GraphConfig & config)
{
  if (!(config.lane_spacing > 0.0)) throw GraphError("lane spacing must be positive");
  NodeTable t;
  t.type = NodeType::kLane;
  struct Sample
  {
    Vec2 p;
    Vec2 dir;
    double left;
    double right;
    const LanePolyline * lane;
  };
  std::vector<Sample> samples;
  for (const auto & lane : lanes) {
    std::vector<Vec2> distinct;
    for (const auto & p : lane.centerline) {
      if (distinct.empty() || (p - distinct.back()).norm() > 0.0) distinct.push_back(p);
    }
    if (distinct.size() < 2 || distinct.size() != lane.centerline.size()) {
      throw GraphError("lane " + std::to_string(lane.id) + " is degenerate (needs at least 2 distinct points)");
    }
    const Polyline pl(lane.centerline);
    const double length = pl.length();
    const auto segments = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(length / config.lane_spacing - 1e-9)));
    for (std::size_t i = 0; i <= segments; ++i) {
      const double s = length * static_cast<double>(i) / static_cast<double>(segments);
      samples.push_back({pl.point_at(s), pl.smooth_direction(s, 0.5 * config.lane_spacing),
                         pl.interpolate(lane.left_dist, s), pl.interpolate(lane.right_dist, s), &lane});
    }
  }
  t.features = Tensor::matrix(samples.size(), kLaneFeatureDim);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Sample & s = samples[i];
    const Vec2 p = frame.to_local(s.p);
    const Vec2 d = frame.direction_to_local(s.dir);
    t.coords.push_back(p);
    t.headings.push_back(std::atan2(d.y, d.x));
    t.lane_id.push_back(s.lane->id);
    t.scene.push_back(0);
    t.features(i, 0) = p.x * config.position_scale;
    t.features(i, 1) = p.y * config.position_scale;
    t.features(i, 2) = d.x;
    t.features(i, 3) = d.y;
    t.features(i, 4) = s.left;
    t.features(i, 5) = s.right;
    one_hot(t.features, i, 6, static_cast<std::size_t>(s.lane->left_mark));
    one_hot(t.features, i, 9, static_cast<std::size_t>(s.lane->right_mark));
    t.features(i, 12) = s.lane->is_intersection ? 1.0 : 0.0;
  }
  return t;
}

std::array<EdgeTable, 4> build_lane_edges(
  const NodeTable & lanes, const std::vector<LanePolyline> & lane_polylines, const GraphConfig & config)
{
  std::map<std::int64_t, std::pair<std::size_t, std::size_t>> range;  // first, count
  for (std::size_t i = 0; i < lanes.size(); ++i) {
    auto [it, fresh] = range.emplace(lanes.lane_id[i], std::make_pair(i, 0));
    (void)fresh;
    ++it->second.second;
  }
  EdgeTable left = empty_edges(Relation::kLaneLeft);
  EdgeTable right = empty_edges(Relation::kLaneRight);
  EdgeTable pred = empty_edges(Relation::kLanePred);
  EdgeTable succ = empty_edges(Relation::kLaneSucc);

  const auto neighbor_edges = [&](EdgeTable & e, std::size_t first, std::size_t count, std::int64_t other) {
    auto it = range.find(other);
    if (it == range.end()) return;
    const auto candidates = [&] {
      std::vector<std::uint32_t> c;
      for (std::size_t j = 0; j < it->second.second; ++j) c.push_back(static_cast<std::uint32_t>(it->second.first + j));
      return c;
    }();
    for (std::size_t i = first; i < first + count; ++i) {
      push_edge(e, nearest_within(lanes.coords, candidates, lanes.coords[i], 1, -1.0).front(), i);
    }
  };

  for (const auto & lane : lane_polylines) {
    auto it = range.find(lane.id);
    if (it == range.end()) continue;
    const auto [first, count] = it->second;
    for (std::size_t i = first; i + 1 < first + count; ++i) {
      push_edge(succ, i, i + 1);
      push_edge(pred, i + 1, i);
    }
    for (auto s : lane.successors) {
      auto next = range.find(s);
      if (next != range.end()) push_edge(succ, first + count - 1, next->second.first);
    }
    for (auto p : lane.predecessors) {
      auto prev = range.find(p);
      if (prev != range.end()) push_edge(pred, first, prev->second.first + prev->second.second - 1);
    }
    if (lane.left_neighbor) neighbor_edges(left, first, count, *lane.left_neighbor);
    if (lane.right_neighbor) neighbor_edges(right, first, count, *lane.right_neighbor);
  }
  std::array<EdgeTable, 4> out{std::move(left), std::move(right), std::move(pred), std::move(succ)};
  for (auto & e : out) e.features = relative_edge_features(lanes, lanes, e.src, e.dst, config.position_scale);
  return out;
}

NodeTable build_step_nodes(const Scenario & scenario, const Frame & frame, const GraphConfig & config)
{
  const std::size_t t_obs = scenario.observed_steps();
  NodeTable t;
  t.type = NodeType::kStep;
  t.features = Tensor::matrix(scenario.tracks.size() * t_obs, kStepFeatureDim);
  std::size_t row = 0;
  for (std::size_t a = 0; a < scenario.tracks.size(); ++a) {
    const AgentTrack & track = scenario.tracks[a];
    for (std::size_t k = 0; k < t_obs; ++k, ++row) {
      const AgentState & s = track.states[k];
      const Vec2 p = frame.to_local(s.position);
      const Vec2 v = frame.direction_to_local(s.velocity);
      const double h = frame.heading_to_local(s.heading);
      t.coords.push_back(p);
      t.headings.push_back(h);
      t.timestep.push_back(static_cast<std::uint32_t>(k));
      t.owner.push_back(static_cast<std::uint32_t>(a));
      t.scene.push_back(0);
      t.features(row, 0) = p.x * config.position_scale;
      t.features(row, 1) = p.y * config.position_scale;
      t.features(row, 2) = v.x * config.speed_scale;
      t.features(row, 3) = v.y * config.speed_scale;
      t.features(row, 4) = v.norm() * config.speed_scale;
      t.features(row, 5) = std::sin(h);
      t.features(row, 6) = std::cos(h);
      one_hot(t.features, row, 7, static_cast<std::size_t>(track.type));
      t.features(row, 12) = t_obs > 1 ? static_cast<double>(k) / static_cast<double>(t_obs - 1) : 0.0;
      t.features(row, 13) = s.observed ? 1.0 : 0.0;
    }
  }
  return t;
}

std::pair<EdgeTable, EdgeTable> build_step_lane_edges(
  const NodeTable & steps, const NodeTable & lanes, const std::vector<AgentType> & owner_types,
  const GraphConfig & config)
{
  EdgeTable to_step = empty_edges(Relation::kLaneToStep);
  EdgeTable to_lane = empty_edges(Relation::kStepToLane);
  if (steps.size() == 0 || lanes.size() == 0) return {to_step, to_lane};
  const double gate = config.orientation_gate_deg * std::numbers::pi / 180.0;
  const auto compatible = [&](std::size_t step, std::size_t lane) {
    return !is_vehicle_like(owner_types[steps.owner[step]]) ||
           orientation_ok(lanes.headings[lane], steps.headings[step], gate);
  };
  std::vector<std::uint32_t> candidates;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    candidates.clear();
    for (std::size_t j = 0; j < lanes.size(); ++j) {
      if (lanes.scene[j] == steps.scene[i] && compatible(i, j)) candidates.push_back(static_cast<std::uint32_t>(j));
    }
    for (auto j : nearest_within(lanes.coords, candidates, steps.coords[i], config.step_lane_k, config.step_lane_radius)) {
      push_edge(to_step, j, i);
    }
  }
  for (std::size_t j = 0; j < lanes.size(); ++j) {
    candidates.clear();
    for (std::size_t i = 0; i < steps.size(); ++i) {
      if (lanes.scene[j] == steps.scene[i] && compatible(i, j)) candidates.push_back(static_cast<std::uint32_t>(i));
    }
    for (auto i : nearest_within(steps.coords, candidates, lanes.coords[j], config.step_lane_k, config.step_lane_radius)) {
      push_edge(to_lane, i, j);
    }
  }
  to_step.features = relative_edge_features(lanes, steps, to_step.src, to_step.dst, config.position_scale);
  to_lane.features = relative_edge_features(steps, lanes, to_lane.src, to_lane.dst, config.position_scale);
  return {to_step, to_lane};
}

EdgeTable build_step_step_edges(const NodeTable & steps, const GraphConfig & config)
{
  EdgeTable e = empty_edges(Relation::kStepToStep);
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<std::uint32_t>> by_time;
  for (std::size_t i = 0; i < steps.size(); ++i) by_time[{steps.scene[i], steps.timestep[i]}].push_back(static_cast<std::uint32_t>(i));
  std::vector<std::uint32_t> candidates;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    candidates.clear();
    for (auto j : by_time[{steps.scene[i], steps.timestep[i]}]) {
      if (steps.owner[j] != steps.owner[i]) candidates.push_back(j);
    }
    for (auto j : nearest_within(steps.coords, candidates, steps.coords[i], config.step_step_k, config.step_step_radius)) {
      push_edge(e, j, i);
    }
  }
  const Tensor rel = relative_edge_features(steps, steps, e.src, e.dst, config.position_scale);
  e.features = Tensor::matrix(e.size(), 5);
  for (std::size_t k = 0; k < e.size(); ++k) {
    for (std::size_t c = 0; c < 4; ++c) e.features(k, c) = rel(k, c);
    // column 4 of the step features holds the scaled speed
    e.features(k, 4) = steps.features(e.src[k], 4) - steps.features(e.dst[k], 4);
  }
  return e;
}

std::pair<EdgeTable, EdgeTable> build_trajectory_edges(
  const NodeTable & steps, const NodeTable & trajectories, std::size_t observed_steps)
{
  std::map<std::uint32_t, std::uint32_t> node_of_owner;
  for (std::size_t i = 0; i < trajectories.size(); ++i) node_of_owner[trajectories.owner[i]] = static_cast<std::uint32_t>(i);
  EdgeTable up = empty_edges(Relation::kStepToTraj);
  EdgeTable down = empty_edges(Relation::kTrajToStep);
  up.features = down.features = Tensor::matrix(steps.size(), 1);
  const double denom = observed_steps > 1 ? static_cast<double>(observed_steps - 1) : 1.0;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    auto it = node_of_owner.find(steps.owner[i]);
    if (it == node_of_owner.end()) {
      throw GraphError("step node " + std::to_string(i) + " has no full-trajectory node for its agent");
    }
    push_edge(up, i, it->second);
    push_edge(down, it->second, i);
    up.features(i, 0) = down.features(i, 0) = static_cast<double>(steps.timestep[i]) / denom;
  }
  return {up, down};
}

HeteroGraph assemble_scene_graph(const Scenario & scenario, const GraphConfig & config)
{
  for (auto r : config.removed) {
    if (r != Relation::kLaneToStep && r != Relation::kStepToLane && r != Relation::kStepToStep && r != Relation::kTrajToStep) {
      throw GraphError(std::string("edge family ") + to_string(r) + " cannot be removed");
    }
  }
  const AgentTrack & focal = scenario.focal();
  const std::size_t t_obs = scenario.observed_steps();
  const AgentState & anchor = focal.states[t_obs - 1];
  HeteroGraph g;
  SceneInfo scene;
  scene.id = scenario.id;
  scene.frame = Frame{anchor.position, anchor.heading};
  scene.observed_steps = t_obs;
  scene.future_steps = scenario.future_steps();
  scene.dt_s = scenario.dt_s;
  g.scenes.push_back(scene);
  const Frame & frame = g.scenes.front().frame;

  std::vector<AgentType> types;
  NodeTable & traj = g.table(NodeType::kTrajectory);
  traj.type = NodeType::kTrajectory;
  traj.features = Tensor::matrix(scenario.tracks.size(), kTrajectoryFeatureDim);
  for (std::size_t a = 0; a < scenario.tracks.size(); ++a) {
    const AgentTrack & track = scenario.tracks[a];
    AgentInfo info;
    info.id = track.id;
    info.type = track.type;
    info.category = track.category;
    info.last_position = frame.to_local(track.states[t_obs - 1].position);
    info.last_heading = frame.heading_to_local(track.states[t_obs - 1].heading);
    for (std::size_t k = t_obs; k < track.states.size(); ++k) info.future.push_back(frame.to_local(track.states[k].position));
    g.agents.push_back(std::move(info));
    types.push_back(track.type);
    traj.owner.push_back(static_cast<std::uint32_t>(a));
    traj.scene.push_back(0);
    one_hot(traj.features, a, 0, static_cast<std::size_t>(track.type));
  }

  g.table(NodeType::kLane) = sample_lane_nodes(scenario.lanes, frame, config);
  g.table(NodeType::kStep) = build_step_nodes(scenario, frame, config);
  const NodeTable & lanes = g.lanes();
  const NodeTable & steps = g.steps();

  auto lane_edges = build_lane_edges(lanes, scenario.lanes, config);
  for (std::size_t i = 0; i < 4; ++i) g.edge(kLaneRelations[i]) = std::move(lane_edges[i]);
  auto [lane_to_step, step_to_lane] = build_step_lane_edges(steps, lanes, types, config);
  g.edge(Relation::kLaneToStep) = std::move(lane_to_step);
  g.edge(Relation::kStepToLane) = std::move(step_to_lane);
  g.edge(Relation::kStepToStep) = build_step_step_edges(steps, config);
  auto [step_to_traj, traj_to_step] = build_trajectory_edges(steps, traj, t_obs);
  g.edge(Relation::kStepToTraj) = std::move(step_to_traj);
  g.edge(Relation::kTrajToStep) = std::move(traj_to_step);
  for (auto r : config.removed) g.edge(r) = empty_edges(r);
  return g;
}

HeteroGraph merge_graphs(const std::vector<const HeteroGraph *> & graphs)
{
  HeteroGraph out;
  if (graphs.empty()) return out;
  for (std::size_t t = 0; t < kNodeTypeCount; ++t) {
    out.nodes[t].type = graphs.front()->nodes[t].type;
    std::size_t rows = 0;
    for (const auto * g : graphs) rows += g->nodes[t].size();
    out.nodes[t].features = Tensor::matrix(rows, graphs.front()->nodes[t].features.cols());
  }
  for (auto r : kAllRelations) out.edge(r) = empty_edges(r);
  std::array<std::size_t, kNodeTypeCount> offset{};
  for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
    const HeteroGraph & g = *graphs[gi];
    const auto scene_offset = static_cast<std::uint32_t>(out.scenes.size());
    const auto agent_offset = static_cast<std::uint32_t>(out.agents.size());
    if (!out.scenes.empty() && (g.observed_steps() != out.observed_steps() || g.future_steps() != out.future_steps())) {
      throw GraphError("cannot batch scenes with different timestep layouts");
    }
    out.scenes.insert(out.scenes.end(), g.scenes.begin(), g.scenes.end());
    for (auto a : g.agents) {
      a.scene += scene_offset;
      out.agents.push_back(std::move(a));
    }
    for (std::size_t t = 0; t < kNodeTypeCount; ++t) {
      const NodeTable & src = g.nodes[t];
      NodeTable & dst = out.nodes[t];
      const std::size_t cols = src.features.cols();
      std::copy(src.features.data().begin(), src.features.data().end(), dst.features.data().begin() + static_cast<std::ptrdiff_t>(offset[t] * cols));
      dst.coords.insert(dst.coords.end(), src.coords.begin(), src.coords.end());
      dst.headings.insert(dst.headings.end(), src.headings.begin(), src.headings.end());
      dst.timestep.insert(dst.timestep.end(), src.timestep.begin(), src.timestep.end());
      dst.lane_id.insert(dst.lane_id.end(), src.lane_id.begin(), src.lane_id.end());
      for (auto o : src.owner) dst.owner.push_back(o + agent_offset);
      for (auto s : src.scene) dst.scene.push_back(s + scene_offset);
    }
    for (auto r : kAllRelations) {
      const EdgeTable & src = g.edge(r);
      EdgeTable & dst = out.edge(r);
      const auto so = static_cast<std::uint32_t>(offset[static_cast<std::size_t>(source_type(r))]);
      const auto to = static_cast<std::uint32_t>(offset[static_cast<std::size_t>(target_type(r))]);
      for (std::size_t e = 0; e < src.size(); ++e) {
        dst.src.push_back(src.src[e] + so);
        dst.dst.push_back(src.dst[e] + to);
      }
      dst.features.append_rows(src.features);
    }
    for (std::size_t t = 0; t < kNodeTypeCount; ++t) offset[t] += g.nodes[t].size();
  }
  return out;
}

nlohmann::json graph_to_json(const HeteroGraph & g)
{
  nlohmann::json j;
  j["scenes"] = nlohmann::json::array();
  for (const auto & s : g.scenes) {
    j["scenes"].push_back({{"id", s.id}, {"frame", {{"x", s.frame.origin.x}, {"y", s.frame.origin.y}, {"heading", s.frame.heading}}}});
  }
  for (const auto & t : g.nodes) {
    nlohmann::json n;
    n["count"] = t.size();
    if (t.has_coordinates()) {
      nlohmann::json coords = nlohmann::json::array();
      for (const auto & p : t.coords) coords.push_back({p.x, p.y});
      n["coords"] = std::move(coords);
    }
    if (!t.owner.empty()) n["owner"] = t.owner;
    if (!t.timestep.empty()) n["timestep"] = t.timestep;
    if (!t.lane_id.empty()) n["lane_id"] = t.lane_id;
    j["nodes"][to_string(t.type)] = std::move(n);
  }
  for (const auto & e : g.edges) j["edges"][to_string(e.relation)] = {{"src", e.src}, {"dst", e.dst}};
  return j;
}

}  // namespace hgat
