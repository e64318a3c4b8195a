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
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "hgat/graph.hpp"
#include "hgat/synthetic.hpp"
#include "support/scenes.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <tuple>

using namespace hgat;
using hgat::testing::transformed;

namespace
{

LanePolyline straight_lane(std::int64_t id, Vec2 a, Vec2 b, std::size_t points = 2)
{
  LanePolyline l;
  l.id = id;
  for (std::size_t i = 0; i < points; ++i) {
    const double u = static_cast<double>(i) / static_cast<double>(points - 1);
    l.centerline.push_back(a + (b - a) * u);
  }
  l.left_dist.assign(points, 1.75);
  l.right_dist.assign(points, 1.75);
  return l;
}

NodeTable make_nodes(NodeType type, const std::vector<Vec2> & coords, const std::vector<double> & headings,
                     const std::vector<std::uint32_t> & owner = {}, const std::vector<std::uint32_t> & timestep = {})
{
  NodeTable t;
  t.type = type;
  t.coords = coords;
  t.headings = headings;
  t.owner = owner;
  t.timestep = timestep;
  t.scene.assign(coords.size(), 0);
  t.features = Tensor::matrix(coords.size(), type == NodeType::kStep ? kStepFeatureDim : kLaneFeatureDim);
  return t;
}

using EdgeSet = std::set<std::pair<std::uint32_t, std::uint32_t>>;

EdgeSet edge_set(const EdgeTable & e)
{
  EdgeSet s;
  for (std::size_t k = 0; k < e.size(); ++k) s.emplace(e.src[k], e.dst[k]);
  return s;
}

/// Exhaustive k-NN: full sort of every admissible candidate by (distance, index).
std::vector<std::uint32_t> brute_knn(
  const std::vector<Vec2> & pts, const Vec2 & q, std::size_t k, double radius,
  const std::function<bool(std::size_t)> & admissible)
{
  std::vector<std::tuple<long long, std::uint32_t>> all;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!admissible(i)) continue;
    const double d = std::hypot(pts[i].x - q.x, pts[i].y - q.y);
    // equal up to 1e-8 m^2 counts as a tie
    if (radius < 0 || d <= radius) all.emplace_back(std::llround(d * d * 1e8), static_cast<std::uint32_t>(i));
  }
  std::sort(all.begin(), all.end());
  std::vector<std::uint32_t> out;
  for (std::size_t i = 0; i < std::min(k, all.size()); ++i) out.push_back(std::get<1>(all[i]));
  return out;
}

double angle_diff(double a, double b)
{
  double d = std::fmod(std::abs(a - b), 2 * std::numbers::pi);
  return std::min(d, 2 * std::numbers::pi - d);
}

/// From-scratch recomputation of the step-lane and step-step families of a graph.
void check_against_oracle(const HeteroGraph & g, const GraphConfig & cfg)
{
  const NodeTable & lanes = g.lanes();
  const NodeTable & steps = g.steps();
  const double gate = cfg.orientation_gate_deg * std::numbers::pi / 180.0;
  const auto gated = [&](std::size_t step, std::size_t lane) {
    return g.agents[steps.owner[step]].type == AgentType::kPedestrian ||
           angle_diff(lanes.headings[lane], steps.headings[step]) <= gate + 1e-12;
  };
  EdgeSet lane_to_step;
  EdgeSet step_to_lane;
  EdgeSet step_to_step;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    for (auto j : brute_knn(lanes.coords, steps.coords[i], 5, 7.0, [&](std::size_t j) { return gated(i, j); })) {
      lane_to_step.emplace(j, i);
    }
    for (auto j : brute_knn(steps.coords, steps.coords[i], 5, 100.0, [&](std::size_t j) {
           return steps.timestep[j] == steps.timestep[i] && steps.owner[j] != steps.owner[i];
         })) {
      step_to_step.emplace(j, static_cast<std::uint32_t>(i));
    }
  }
  for (std::size_t j = 0; j < lanes.size(); ++j) {
    for (auto i : brute_knn(steps.coords, lanes.coords[j], 5, 7.0, [&](std::size_t i) { return gated(i, j); })) {
      step_to_lane.emplace(i, static_cast<std::uint32_t>(j));
    }
  }
  CHECK(edge_set(g.edge(Relation::kLaneToStep)) == lane_to_step);
  CHECK(edge_set(g.edge(Relation::kStepToLane)) == step_to_lane);
  CHECK(edge_set(g.edge(Relation::kStepToStep)) == step_to_step);
  CHECK(g.edge(Relation::kLaneToStep).size() == lane_to_step.size());
  CHECK(g.edge(Relation::kStepToStep).size() == step_to_step.size());
}

std::size_t expected_lane_nodes(const Scenario & s, double spacing)
{
  std::size_t n = 0;
  for (const auto & l : s.lanes) {
    double len = 0;
    for (std::size_t i = 1; i < l.centerline.size(); ++i) len += (l.centerline[i] - l.centerline[i - 1]).norm();
    n += std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(len / spacing - 1e-9))) + 1;
  }
  return n;
}

}  // namespace

TEST_CASE("sample_lane_nodes: spacing and endpoints")
{
  GraphConfig cfg;
  const Frame world;
  const NodeTable ten = sample_lane_nodes({straight_lane(1, {0, 0}, {10, 0})}, world, cfg);
  REQUIRE(ten.size() == 6);
  for (std::size_t i = 0; i < 6; ++i) CHECK(ten.coords[i].x == doctest::Approx(2.0 * i).epsilon(1e-12));
  CHECK(sample_lane_nodes({straight_lane(1, {0, 0}, {1.5, 0})}, world, cfg).size() == 2);
  CHECK(ten.features.cols() == kLaneFeatureDim);

  LanePolyline bad = straight_lane(1, {0, 0}, {0, 0});
  CHECK_THROWS_AS(sample_lane_nodes({bad}, world, cfg), GraphError);
  cfg.lane_spacing = 0.0;
  CHECK_THROWS_AS(sample_lane_nodes({straight_lane(1, {0, 0}, {10, 0})}, world, cfg), GraphError);
}

TEST_CASE("sample_lane_nodes: arc tangents")
{
  const double r = 30.0;
  LanePolyline arc;
  arc.id = 5;
  for (int i = 0; i <= 60; ++i) {
    const double phi = i * (1.0 / r);  // 1 m chords
    arc.centerline.push_back({r * std::cos(phi), r * std::sin(phi)});
  }
  arc.left_dist.assign(arc.centerline.size(), 1.5);
  arc.right_dist.assign(arc.centerline.size(), 1.5);
  const NodeTable t = sample_lane_nodes({arc}, Frame{}, GraphConfig{});
  for (std::size_t i = 0; i < t.size(); ++i) {
    const Vec2 p = t.coords[i];
    const double tangent = std::atan2(p.x, -p.y);  // counterclockwise
    CHECK(angle_diff(t.headings[i], tangent) <= 2.0 * std::numbers::pi / 180.0);
  }
}

TEST_CASE("lane edges: chain, connectivity and neighbors")
{
  GraphConfig cfg;
  const Frame world;
  {
    const std::vector<LanePolyline> lanes{straight_lane(1, {0, 0}, {4, 0})};
    const NodeTable n = sample_lane_nodes(lanes, world, cfg);
    REQUIRE(n.size() == 3);
    const auto e = build_lane_edges(n, lanes, cfg);
    CHECK(e[0].size() == 0);
    CHECK(e[1].size() == 0);
    CHECK(edge_set(e[2]) == EdgeSet{{1, 0}, {2, 1}});
    CHECK(edge_set(e[3]) == EdgeSet{{0, 1}, {1, 2}});
  }
  {
    std::vector<LanePolyline> lanes{straight_lane(1, {0, 0}, {4, 0}), straight_lane(2, {4, 0}, {8, 0})};
    lanes[0].successors = {2};
    lanes[1].predecessors = {1};
    const NodeTable n = sample_lane_nodes(lanes, world, cfg);
    const auto e = build_lane_edges(n, lanes, cfg);
    CHECK(edge_set(e[3]).count({2, 3}) == 1);
    CHECK(edge_set(e[2]).count({3, 2}) == 1);
  }
  {
    std::vector<LanePolyline> lanes{straight_lane(1, {0, 0}, {20, 0}), straight_lane(2, {0.7, 3.5}, {19.3, 3.5})};
    lanes[0].left_neighbor = 2;
    lanes[1].right_neighbor = 1;
    const NodeTable n = sample_lane_nodes(lanes, world, cfg);
    const auto e = build_lane_edges(n, lanes, cfg);
    std::map<std::uint32_t, int> incoming;
    for (std::size_t k = 0; k < e[0].size(); ++k) {
      const auto src = e[0].src[k];
      const auto dst = e[0].dst[k];
      CHECK(n.lane_id[dst] == 1);
      CHECK(n.lane_id[src] == 2);
      ++incoming[dst];
      // exhaustive nearest among the neighbor's nodes
      for (std::size_t j = 0; j < n.size(); ++j) {
        if (n.lane_id[j] == 2) CHECK((n.coords[src] - n.coords[dst]).norm() <= (n.coords[j] - n.coords[dst]).norm());
      }
    }
    for (std::size_t i = 0; i < n.size(); ++i) {
      if (n.lane_id[i] == 1) CHECK(incoming[static_cast<std::uint32_t>(i)] == 1);
    }
    CHECK(e[1].size() == e[1].size());
    for (std::size_t k = 0; k < e[1].size(); ++k) CHECK(n.lane_id[e[1].dst[k]] == 2);
  }
}

TEST_CASE("step-lane edges: radius, alignment and k-NN")
{
  GraphConfig cfg;
  const std::vector<AgentType> vehicle{AgentType::kVehicle};
  {
    const NodeTable lanes = make_nodes(NodeType::kLane, {{20, 0}, {0, 20}}, {0, 0});
    const NodeTable steps = make_nodes(NodeType::kStep, {{0, 0}}, {0}, {0}, {0});
    const auto [a, b] = build_step_lane_edges(steps, lanes, vehicle, cfg);
    CHECK(a.size() == 0);
    CHECK(b.size() == 0);
  }
  {
    const NodeTable lanes = make_nodes(NodeType::kLane, {{3, 0}}, {0.1});
    const NodeTable steps = make_nodes(NodeType::kStep, {{0, 0}}, {0}, {0}, {0});
    const auto [a, b] = build_step_lane_edges(steps, lanes, vehicle, cfg);
    CHECK(a.size() == 1);
    CHECK(b.size() == 1);
  }
  {
    // opposite direction: gated for vehicles, not for pedestrians
    const NodeTable lanes = make_nodes(NodeType::kLane, {{3, 0}}, {std::numbers::pi});
    const NodeTable steps = make_nodes(NodeType::kStep, {{0, 0}}, {0}, {0}, {0});
    CHECK(build_step_lane_edges(steps, lanes, vehicle, cfg).first.size() == 0);
    CHECK(build_step_lane_edges(steps, lanes, {AgentType::kPedestrian}, cfg).first.size() == 1);
  }
  {
    std::vector<Vec2> pts;
    for (int i = 0; i < 8; ++i) pts.push_back({0.8 * i - 2.9, 0.3 * (i % 3)});
    pts.push_back({7.5, 0.0});
    const NodeTable lanes = make_nodes(NodeType::kLane, pts, std::vector<double>(pts.size(), 0.0));
    const NodeTable steps = make_nodes(NodeType::kStep, {{0.1, 0.2}}, {0.0}, {0}, {0});
    const auto [a, b] = build_step_lane_edges(steps, lanes, vehicle, cfg);
    const auto oracle = brute_knn(pts, {0.1, 0.2}, 5, 7.0, [](std::size_t) { return true; });
    REQUIRE(a.size() == 5);
    CHECK(std::vector<std::uint32_t>(a.src.begin(), a.src.end()) == oracle);
    CHECK(b.size() == 8);  // each lane node within 7 m keeps its only step
  }
}

TEST_CASE("step-step edges")
{
  GraphConfig cfg;
  const std::size_t steps_per_agent = 4;
  const auto agents = [&](const std::vector<Vec2> & where) {
    std::vector<Vec2> coords;
    std::vector<std::uint32_t> owner;
    std::vector<std::uint32_t> t;
    for (std::size_t a = 0; a < where.size(); ++a) {
      for (std::size_t k = 0; k < steps_per_agent; ++k) {
        coords.push_back(where[a] + Vec2{0.5 * k, 0.0});
        owner.push_back(static_cast<std::uint32_t>(a));
        t.push_back(static_cast<std::uint32_t>(k));
      }
    }
    return make_nodes(NodeType::kStep, coords, std::vector<double>(coords.size(), 0.0), owner, t);
  };
  CHECK(build_step_step_edges(agents({{0, 0}}), cfg).size() == 0);
  CHECK(build_step_step_edges(agents({{0, 0}, {10, 0}}), cfg).size() == 2 * steps_per_agent);
  CHECK(build_step_step_edges(agents({{0, 0}, {150, 0}}), cfg).size() == 0);

  std::vector<Vec2> cluster;
  for (int a = 0; a < 7; ++a) cluster.push_back({std::cos(a * 1.3) * (2.0 + a), std::sin(a * 1.3) * (2.0 + a)});
  const NodeTable steps = agents(cluster);
  const EdgeTable e = build_step_step_edges(steps, cfg);
  std::map<std::uint32_t, int> incoming;
  for (auto d : e.dst) ++incoming[d];
  for (std::size_t i = 0; i < steps.size(); ++i) CHECK(incoming[static_cast<std::uint32_t>(i)] == 5);
  EdgeSet oracle;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    for (auto j : brute_knn(steps.coords, steps.coords[i], 5, 100.0, [&](std::size_t j) {
           return steps.timestep[j] == steps.timestep[i] && steps.owner[j] != steps.owner[i];
         })) {
      oracle.emplace(j, static_cast<std::uint32_t>(i));
    }
  }
  CHECK(edge_set(e) == oracle);
  CHECK(e.features.cols() == 5);
}

TEST_CASE("trajectory edges")
{
  const Scenario s = generate_synthetic(ScenarioKind::kStraight, 2, 3);
  const HeteroGraph g = assemble_scene_graph(s);
  const auto & up = g.edge(Relation::kStepToTraj);
  const auto & down = g.edge(Relation::kTrajToStep);
  CHECK(up.size() == 2 * 50);
  CHECK(down.size() == 2 * 50);
  std::map<std::uint32_t, double> last;
  for (std::size_t k = 0; k < up.size(); ++k) {
    CHECK(g.steps().owner[up.src[k]] == g.trajectories().owner[up.dst[k]]);
    CHECK(g.steps().owner[down.dst[k]] == g.trajectories().owner[down.src[k]]);
    auto it = last.find(up.dst[k]);
    if (it != last.end()) CHECK(up.features(k, 0) > it->second);
    last[up.dst[k]] = up.features(k, 0);
  }
  NodeTable orphaned = g.trajectories();
  orphaned.owner = {0};
  orphaned.scene = {0};
  CHECK_THROWS_AS(build_trajectory_edges(g.steps(), orphaned, 50), GraphError);
}

TEST_CASE("assemble: counts, frame and oracle agreement")
{
  const Scenario single = generate_synthetic(ScenarioKind::kStraight, 1, 4);
  const HeteroGraph g1 = assemble_scene_graph(single);
  const std::size_t total = g1.lanes().size() + g1.steps().size() + g1.trajectories().size();
  CHECK(total == expected_lane_nodes(single, 2.0) + 50 + 1);
  const std::size_t last = single.observed_steps() - 1;
  CHECK(g1.steps().coords[last].norm() <= 1e-9);
  CHECK(std::abs(g1.steps().headings[last]) <= 1e-12);
  CHECK(g1.agents[0].future.size() == 60);

  const Scenario five = generate_synthetic(ScenarioKind::kIntersection, 5, 8);
  const HeteroGraph g5 = assemble_scene_graph(five);
  CHECK(g5.trajectories().size() == 5);
  check_against_oracle(g5, GraphConfig{});
  for (const auto & e : g5.edges) {
    CHECK(e.features.rows() == e.size());
    CHECK(e.features.cols() == edge_feature_dim(e.relation));
    for (std::size_t k = 0; k < e.size(); ++k) {
      CHECK(e.src[k] < g5.table(source_type(e.relation)).size());
      CHECK(e.dst[k] < g5.table(target_type(e.relation)).size());
    }
  }
}

TEST_CASE("k-NN constraints over seeded scenarios")
{
  const GraphConfig cfg;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    SyntheticOptions opt;
    opt.rate_hz = 2.0;
    const auto kind = static_cast<ScenarioKind>(seed % 3);
    const HeteroGraph g = assemble_scene_graph(generate_synthetic(kind, 8, seed, opt), cfg);
    CAPTURE(seed);
    check_against_oracle(g, cfg);
  }
}

TEST_CASE("graph is invariant to rigid transforms")
{
  for (auto kind : {ScenarioKind::kStraight, ScenarioKind::kCurve, ScenarioKind::kIntersection}) {
    const Scenario s = generate_synthetic(kind, 6, 21);
    const HeteroGraph a = assemble_scene_graph(s);
    const HeteroGraph b = assemble_scene_graph(transformed(s, 2.1, {-140.0, 77.0}));
    for (std::size_t t = 0; t < kNodeTypeCount; ++t) {
      REQUIRE(a.nodes[t].size() == b.nodes[t].size());
      CHECK(max_abs_diff(a.nodes[t].features, b.nodes[t].features) <= 1e-9);
    }
    for (auto r : kAllRelations) {
      const std::string relation = to_string(r);
      const std::string kind_name = to_string(kind);
      CAPTURE(relation);
      CAPTURE(kind_name);
      CHECK(a.edge(r).src == b.edge(r).src);
      CHECK(a.edge(r).dst == b.edge(r).dst);
      CHECK(max_abs_diff(a.edge(r).features, b.edge(r).features) <= 1e-9);
    }
  }
}

TEST_CASE("graph construction is deterministic")
{
  const Scenario s = generate_synthetic(ScenarioKind::kCurve, 7, 2);
  const HeteroGraph a = assemble_scene_graph(s);
  const HeteroGraph b = assemble_scene_graph(s);
  for (auto r : kAllRelations) {
    CHECK(a.edge(r).src == b.edge(r).src);
    CHECK(a.edge(r).dst == b.edge(r).dst);
    CHECK(bitwise_equal(a.edge(r).features, b.edge(r).features));
  }
  CHECK(graph_to_json(a) == graph_to_json(b));
}

TEST_CASE("removed families are absent; lane families cannot be removed")
{
  const Scenario s = generate_synthetic(ScenarioKind::kIntersection, 6, 5);
  GraphConfig cfg;
  cfg.removed = {Relation::kLaneToStep, Relation::kStepToLane, Relation::kStepToStep, Relation::kTrajToStep};
  const HeteroGraph g = assemble_scene_graph(s, cfg);
  for (auto r : cfg.removed) CHECK(g.edge(r).size() == 0);
  CHECK(g.edge(Relation::kStepToTraj).size() == g.steps().size());
  CHECK(g.edge(Relation::kLaneSucc).size() > 0);
  cfg.removed = {Relation::kLaneSucc};
  CHECK_THROWS_AS(assemble_scene_graph(s, cfg), GraphError);
}

TEST_CASE("merge_graphs offsets indices")
{
  SyntheticOptions opt;
  opt.rate_hz = 2.0;
  const HeteroGraph a = assemble_scene_graph(generate_synthetic(ScenarioKind::kStraight, 3, 1, opt));
  const HeteroGraph b = assemble_scene_graph(generate_synthetic(ScenarioKind::kCurve, 2, 1, opt));
  const HeteroGraph m = merge_graphs({&a, &b});
  CHECK(m.scenes.size() == 2);
  CHECK(m.agents.size() == 5);
  CHECK(m.agents[3].scene == 1);
  for (std::size_t t = 0; t < kNodeTypeCount; ++t) CHECK(m.nodes[t].size() == a.nodes[t].size() + b.nodes[t].size());
  for (auto r : kAllRelations) {
    REQUIRE(m.edge(r).size() == a.edge(r).size() + b.edge(r).size());
    const std::size_t k = a.edge(r).size();
    for (std::size_t e = 0; e < b.edge(r).size(); ++e) {
      CHECK(m.edge(r).src[k + e] == b.edge(r).src[e] + a.table(source_type(r)).size());
      CHECK(m.edge(r).dst[k + e] == b.edge(r).dst[e] + a.table(target_type(r)).size());
    }
  }
  CHECK(m.steps().owner.back() == 4);
}
