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
// Acceptance suite: one pass/fail line per criterion. Pass criterion numbers as
// arguments to run a subset.

#include "hgat/ablation.hpp"
#include "hgat/checkpoint.hpp"
#include "hgat/hgat.hpp"
#include "hgat/metrics.hpp"
#include "hgat/model.hpp"
#include "hgat/refinement.hpp"
#include "hgat/synthetic.hpp"
#include "hgat/training.hpp"
#include "support/gradcheck.hpp"
#include "support/tiny_graph.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <tuple>

namespace fs = std::filesystem;
using namespace hgat;
using testing::check_leaf_gradients;
using testing::check_store_gradients;
using testing::FdOptions;
using testing::random_tensor;
using testing::weighted_sum;

namespace
{

struct Outcome
{
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string & what)
  {
    if (!ok) {
      if (pass) detail << "FAILED: " << what << "; ";
      pass = false;
    }
  }
};

std::vector<HeteroGraph> graphs_of(const std::vector<Scenario> & scenes, const GraphConfig & g = {})
{
  std::vector<HeteroGraph> out;
  for (const auto & s : scenes) out.push_back(assemble_scene_graph(s, g));
  return out;
}

SyntheticOptions two_hz()
{
  SyntheticOptions o;
  o.rate_hz = 2.0;
  return o;
}

// --- 1 -------------------------------------------------------------------

/// One straight lane and two vehicles following it.
Scenario two_agent_scene()
{
  Scenario s;
  s.id = "two_agents";
  s.dt_s = 0.5;
  LanePolyline lane;
  lane.id = 1;
  lane.centerline = {{-40.0, 0.0}, {0.0, 0.0}, {80.0, 0.0}};
  lane.left_dist.assign(3, 1.75);
  lane.right_dist.assign(3, 1.75);
  s.lanes.push_back(lane);
  const double speeds[2] = {6.0, 4.5};
  const double offsets[2] = {0.3, -0.6};
  for (std::size_t a = 0; a < 2; ++a) {
    AgentTrack t;
    t.id = a == 0 ? "focal" : "lead";
    t.category = a == 0 ? TrackCategory::kFocal : TrackCategory::kScored;
    for (std::size_t i = 0; i < 22; ++i) {
      const double time = 0.5 * static_cast<double>(i);
      AgentState st;
      st.position = {-30.0 + 10.0 * static_cast<double>(a) + speeds[a] * time + 0.05 * time * time, offsets[a] + 0.02 * time};
      st.velocity = {speeds[a] + 0.1 * time, 0.02};
      st.heading = std::atan2(st.velocity.y, st.velocity.x);
      st.observed = i < 10;
      t.states.push_back(st);
    }
    s.tracks.push_back(t);
  }
  return s;
}

Outcome gradient_suite()
{
  Outcome o;
  Rng rng(101);
  double worst_op = 0.0;
  const auto op = [&](const std::string & name, const testing::LeafLoss & f, std::vector<Tensor> in) {
    const auto r = check_leaf_gradients(f, std::move(in));
    worst_op = std::max(worst_op, r.max_rel_err);
    o.require(r.checked > 0 && r.max_rel_err <= 1e-4, name + " rel err " + std::to_string(r.max_rel_err));
  };
  op("matmul/linear", [](Tape &, const std::vector<Var> & v) { return weighted_sum(linear(matmul(v[0], v[1]), v[2], v[3]), 1); },
     {random_tensor({4, 3}, rng), random_tensor({3, 5}, rng), random_tensor({5, 2}, rng), random_tensor({2}, rng)});
  op("add/sub/mul/scale/mean", [](Tape &, const std::vector<Var> & v) { return mean(mul(add(v[0], v[1]), scale(sub(v[0], v[1]), 1.7))); },
     {random_tensor({3, 4}, rng), random_tensor({3, 4}, rng)});
  op("leaky_relu/relu", [](Tape &, const std::vector<Var> & v) { return add(weighted_sum(leaky_relu(v[0], 0.2), 2), weighted_sum(relu(v[0]), 3)); },
     {random_tensor({5, 4}, rng)});
  op("smooth_l1", [](Tape &, const std::vector<Var> & v) { return weighted_sum(smooth_l1(scale(v[0], 2.0)), 4); },
     {random_tensor({6, 3}, rng)});
  op("gather/concat/slice/reshape/rotate", [](Tape &, const std::vector<Var> & v) {
       const Var g = gather_rows(v[0], {2, 0, 2, 1});
       const Var c = concat_rows({concat_cols({g, slice_cols(v[1], 1, 3)}), reshape(v[2], 2, 5)});
       return weighted_sum(rotate2d(reshape(c, 15, 2), std::vector<double>(15, std::cos(0.3)), std::vector<double>(15, std::sin(0.3))), 5);
     },
     {random_tensor({3, 3}, rng), random_tensor({4, 4}, rng), random_tensor({1, 10}, rng)});
  op("segment_softmax/segment_sum", [](Tape &, const std::vector<Var> & v) {
       const Index seg{0, 1, 0, 2, 1, 0};
       return weighted_sum(segment_sum(mul(segment_softmax(v[0], seg, 4), v[1]), seg, 4), 6);
     },
     {random_tensor({6, 2}, rng), random_tensor({6, 2}, rng)});
  op("head_dot/head_scale", [](Tape &, const std::vector<Var> & v) { return weighted_sum(head_scale(v[0], head_dot(v[0], v[1])), 7); },
     {random_tensor({5, 6}, rng), random_tensor({2, 3}, rng)});
  op("batch_norm", [](Tape &, const std::vector<Var> & v) {
       Tensor mean_buf = Tensor::vector(3);
       Tensor var_buf = Tensor::vector(3, 1.0);
       return weighted_sum(batch_norm(v[0], v[1], v[2], RunningStats{&mean_buf, &var_buf}, BatchNormOptions{}), 8);
     },
     {random_tensor({6, 3}, rng), random_tensor({3}, rng), random_tensor({3}, rng)});

  // full pipeline: encoders, heads, two refinement iterations, e2e loss
  const HeteroGraph g = assemble_scene_graph(two_agent_scene());
  ModelConfig mc;
  mc.dim = 8;
  mc.heads = 2;
  mc.refine_heads = 2;
  mc.refine_iterations = 2;
  Model m = create_model(mc, g.future_steps(), 5);
  // leave the zero-initialized layers so every path carries gradient
  Rng wr(6);
  for (auto & [name, p] : m.store.entries()) {
    if (p.kind != ParamKind::kWeight) continue;
    const bool zero = std::all_of(p.value.data().begin(), p.value.data().end(), [](double v) { return v == 0.0; });
    const bool bn = name.find(".bn") != std::string::npos;
    if (zero && !bn) {
      for (auto & v : p.value.data()) v = wr.uniform(-0.3, 0.3);
    }
  }
  TrainConfig tc;
  FdOptions fd;
  fd.per_tensor = 4;
  fd.floor = 1e-4;
  const auto r = check_store_gradients(
    [&](Context & ctx) { return regime_loss(ctx, m, g, Regime::kE2e, tc); }, m.store, fd);
  o.require(r.checked > 500, "too few end-to-end coordinates checked");
  o.require(r.max_rel_err <= 1e-3, "end-to-end rel err " + std::to_string(r.max_rel_err) + " at " + r.worst);
  o.detail << "ops max rel err " << worst_op << "; end-to-end " << r.checked << " coords, " << r.kinks
           << " kinks skipped, max rel err " << r.max_rel_err;
  return o;
}

// --- 2 -------------------------------------------------------------------

Outcome attention_properties()
{
  Outcome o;
  const std::vector<Relation> all(kAllRelations.begin(), kAllRelations.end());
  const HgatLayout layout{16, 2, 0.2};
  ParameterStore store;
  Rng rng(202);
  add_hgat_layer(store, "layer", layout, all, rng);

  const HeteroGraph g = assemble_scene_graph(generate_synthetic(ScenarioKind::kIntersection, 8, 3, two_hz()));
  std::array<Tensor, kNodeTypeCount> x;
  for (std::size_t t = 0; t < kNodeTypeCount; ++t) x[t] = random_tensor({g.nodes[t].size(), layout.dim}, rng);

  const auto run = [&](const HeteroGraph & graph, const std::array<Tensor, kNodeTypeCount> & feats, LayerAttention * att) {
    Tape tape;
    Context ctx(tape, store, false);
    const NodeFeatures in{tape.constant(feats[0]), tape.constant(feats[1]), tape.constant(feats[2])};
    const NodeFeatures out = hgat_layer(ctx, "layer", layout, graph, in, all, att);
    return std::array<Tensor, kNodeTypeCount>{out[0].value(), out[1].value(), out[2].value()};
  };

  LayerAttention att;
  const auto base = run(g, x, &att);
  double worst_sum = 0.0;
  std::map<std::tuple<std::size_t, std::uint32_t, std::size_t>, double> mass;
  for (const auto & rec : attention_records(g, {att})) {
    mass[{static_cast<std::size_t>(target_type(rec.relation)), rec.dst, rec.head}] += rec.alpha;
  }
  for (const auto & [key, m] : mass) worst_sum = std::max(worst_sum, std::abs(m - 1.0));
  o.require(!mass.empty() && worst_sum <= 1e-9, "alpha sums deviate by " + std::to_string(worst_sum));

  // a lane node whose only incoming edge is a single successor link
  HeteroGraph single = testing::empty_graph(2, 1, 1);
  testing::add_edge(single, Relation::kLaneSucc, 0, 1, rng);
  std::array<Tensor, kNodeTypeCount> xs;
  for (std::size_t t = 0; t < kNodeTypeCount; ++t) xs[t] = random_tensor({single.nodes[t].size(), layout.dim}, rng);
  LayerAttention one;
  run(single, xs, &one);
  const Tensor & a1 = one.alpha[static_cast<std::size_t>(Relation::kLaneSucc)];
  o.require(a1.size() == 2 && a1[0] == 1.0 && a1[1] == 1.0, "single edge alpha is not exactly 1");

  // permute step and lane nodes
  std::array<std::vector<std::uint32_t>, kNodeTypeCount> perm;
  for (std::size_t t = 0; t < kNodeTypeCount; ++t) {
    perm[t].resize(g.nodes[t].size());
    std::iota(perm[t].begin(), perm[t].end(), 0u);
    for (std::size_t i = perm[t].size(); i > 1; --i) std::swap(perm[t][i - 1], perm[t][rng.index(i)]);
  }
  HeteroGraph gp = g;
  auto xp = x;
  for (std::size_t t = 0; t < kNodeTypeCount; ++t) {
    for (std::size_t i = 0; i < perm[t].size(); ++i) {
      for (std::size_t c = 0; c < layout.dim; ++c) xp[t](perm[t][i], c) = x[t](i, c);
    }
  }
  for (auto r : kAllRelations) {
    auto & e = gp.edge(r);
    for (std::size_t k = 0; k < e.size(); ++k) {
      e.src[k] = perm[static_cast<std::size_t>(source_type(r))][e.src[k]];
      e.dst[k] = perm[static_cast<std::size_t>(target_type(r))][e.dst[k]];
    }
  }
  const auto moved = run(gp, xp, nullptr);
  double worst_perm = 0.0;
  for (std::size_t t = 0; t < kNodeTypeCount; ++t) {
    for (std::size_t i = 0; i < perm[t].size(); ++i) {
      for (std::size_t c = 0; c < layout.dim; ++c) {
        worst_perm = std::max(worst_perm, std::abs(base[t](i, c) - moved[t](perm[t][i], c)));
      }
    }
  }
  o.require(worst_perm <= 1e-9, "permutation mismatch " + std::to_string(worst_perm));
  o.detail << mass.size() << " target/head groups, max |sum-1| " << worst_sum << "; permutation max diff " << worst_perm;
  return o;
}

// --- 3 -------------------------------------------------------------------

/// Exhaustive k-NN over admissible points, ordered by (distance on a 1e-8 m^2 grid, index).
std::vector<std::uint32_t> brute_knn(
  const std::vector<Vec2> & pts, const Vec2 & q, std::size_t k, double radius, const std::function<bool(std::size_t)> & admissible)
{
  std::vector<std::tuple<long long, std::uint32_t>> all;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!admissible(i)) continue;
    const double d = std::hypot(pts[i].x - q.x, pts[i].y - q.y);
    if (radius < 0 || d <= radius) all.emplace_back(std::llround(d * d * 1e8), static_cast<std::uint32_t>(i));
  }
  std::sort(all.begin(), all.end());
  std::vector<std::uint32_t> out;
  for (std::size_t i = 0; i < std::min(k, all.size()); ++i) out.push_back(std::get<1>(all[i]));
  return out;
}

using EdgeSet = std::set<std::pair<std::uint32_t, std::uint32_t>>;

EdgeSet edge_set(const EdgeTable & e)
{
  EdgeSet s;
  for (std::size_t k = 0; k < e.size(); ++k) s.emplace(e.src[k], e.dst[k]);
  return s;
}

Outcome graph_constraints()
{
  Outcome o;
  std::size_t edges = 0;
  std::size_t dynamic = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto kind = static_cast<ScenarioKind>(seed % 3);
    const HeteroGraph g = assemble_scene_graph(generate_synthetic(kind, 8, 7000 + seed, two_hz()));
    const NodeTable & lanes = g.lanes();
    const NodeTable & steps = g.steps();
    const std::string tag = " (seed " + std::to_string(seed) + ")";

    std::map<std::uint32_t, std::size_t> in_step_lane, in_lane_step, in_step_step;
    for (auto r : {Relation::kLaneToStep, Relation::kStepToLane}) {
      const EdgeTable & e = g.edge(r);
      for (std::size_t k = 0; k < e.size(); ++k) {
        const bool to_step = r == Relation::kLaneToStep;
        const Vec2 a = to_step ? lanes.coords[e.src[k]] : steps.coords[e.src[k]];
        const Vec2 b = to_step ? steps.coords[e.dst[k]] : lanes.coords[e.dst[k]];
        o.require((a - b).norm() <= 7.0, "step-lane edge longer than 7 m" + tag);
        ++(to_step ? in_lane_step : in_step_lane)[e.dst[k]];
      }
      edges += e.size();
    }
    const EdgeTable & ss = g.edge(Relation::kStepToStep);
    for (std::size_t k = 0; k < ss.size(); ++k) {
      o.require((steps.coords[ss.src[k]] - steps.coords[ss.dst[k]]).norm() <= 100.0, "step-step edge longer than 100 m" + tag);
      o.require(steps.timestep[ss.src[k]] == steps.timestep[ss.dst[k]], "step-step edge across timesteps" + tag);
      ++in_step_step[ss.dst[k]];
    }
    edges += ss.size();
    for (const auto * m : {&in_step_lane, &in_lane_step, &in_step_step}) {
      for (const auto & [node, n] : *m) o.require(n <= 5, "more than 5 incident edges" + tag);
    }

    const double gate = 60.0 * std::numbers::pi / 180.0;
    const auto gated = [&](std::size_t step, std::size_t lane) {
      double d = std::fmod(std::abs(lanes.headings[lane] - steps.headings[step]), 2 * std::numbers::pi);
      d = std::min(d, 2 * std::numbers::pi - d);
      return g.agents[steps.owner[step]].type == AgentType::kPedestrian || d <= gate + 1e-12;
    };
    EdgeSet lane_to_step, step_to_lane, step_to_step;
    for (std::size_t i = 0; i < steps.size(); ++i) {
      for (auto j : brute_knn(lanes.coords, steps.coords[i], 5, 7.0, [&](std::size_t j) { return gated(i, j); })) {
        lane_to_step.emplace(j, static_cast<std::uint32_t>(i));
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
    o.require(edge_set(g.edge(Relation::kLaneToStep)) == lane_to_step, "lane_to_step differs from oracle" + tag);
    o.require(edge_set(g.edge(Relation::kStepToLane)) == step_to_lane, "step_to_lane differs from oracle" + tag);
    o.require(edge_set(g.edge(Relation::kStepToStep)) == step_to_step, "step_to_step differs from oracle" + tag);

    // refinement edges from scattered predicted points; a small lane subset exercises N_lane < 5
    Rng rng(seed);
    const std::size_t n_lane = seed % 10 == 0 ? 3 : lanes.size();
    std::vector<Vec2> lane_pts(lanes.coords.begin(), lanes.coords.begin() + static_cast<std::ptrdiff_t>(n_lane));
    std::vector<Vec2> pts;
    for (std::size_t i = 0; i < 60; ++i) pts.push_back({rng.uniform(-60, 60), rng.uniform(-60, 60)});
    const EdgeTable dyn = dynamic_edges(pts, std::vector<std::uint32_t>(pts.size(), 0), lane_pts, std::vector<std::uint32_t>(n_lane, 0), 5);
    EdgeSet want;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto nn = brute_knn(lane_pts, pts[i], 5, -1.0, [](std::size_t) { return true; });
      o.require(nn.size() == std::min<std::size_t>(5, n_lane), "refinement edge count" + tag);
      for (auto j : nn) want.emplace(j, static_cast<std::uint32_t>(i));
    }
    o.require(dyn.size() == pts.size() * std::min<std::size_t>(5, n_lane), "dynamic edge count" + tag);
    o.require(edge_set(dyn) == want, "dynamic edges differ from oracle" + tag);
    dynamic += dyn.size();
  }
  o.detail << "100 scenarios, " << edges << " step edges and " << dynamic << " refinement edges match the oracle";
  return o;
}

// --- 4 -------------------------------------------------------------------

Outcome metric_oracle()
{
  Outcome o;
  Rng rng(404);
  std::vector<EvalSample> samples;
  double worst = 0.0;
  double sums[2][4] = {};
  std::size_t focal = 0;
  for (std::size_t i = 0; i < 200; ++i) {
    const std::size_t n_agents = 1 + rng.index(3);
    const std::size_t K = 6;
    const std::size_t T = 1 + rng.index(12);
    PredictionSet p;
    p.agents = n_agents;
    p.modes = K;
    p.future_steps = T;
    p.coords = random_tensor({n_agents * K, 2 * T}, rng, -6, 6);
    p.confidences = Tensor::matrix(n_agents * K, 1);
    std::vector<AgentInfo> agents(n_agents);
    for (std::size_t a = 0; a < n_agents; ++a) {
      double z = 0.0;
      for (std::size_t k = 0; k < K; ++k) z += (p.confidences[a * K + k] = rng.index(3) == 0 ? 0.5 : rng.uniform());
      for (std::size_t k = 0; k < K; ++k) p.confidences[a * K + k] /= z;
      agents[a].category = a == 0 ? TrackCategory::kFocal : TrackCategory::kScored;
      for (std::size_t t = 0; t < T; ++t) agents[a].future.push_back({rng.uniform(-6, 6), rng.uniform(-6, 6)});
    }
    samples.push_back({p, agents});
    ++focal;
    std::size_t slot = 0;
    for (std::size_t k : {std::size_t{1}, std::size_t{6}}) {
      // brute force: rank by counting better modes, then scan the first k ranks
      std::vector<std::size_t> order(K);
      for (std::size_t m = 0; m < K; ++m) {
        std::size_t better = 0;
        for (std::size_t q = 0; q < K; ++q) {
          if (p.confidences[q] > p.confidences[m] || (p.confidences[q] == p.confidences[m] && q < m)) ++better;
        }
        order[better] = m;
      }
      double ade = 1e300, fde = 1e300, conf = 0.0;
      for (std::size_t r = 0; r < k; ++r) {
        const std::size_t m = order[r];
        double s = 0.0;
        for (std::size_t t = 0; t < T; ++t) s += std::hypot(p.coords(m, 2 * t) - agents[0].future[t].x, p.coords(m, 2 * t + 1) - agents[0].future[t].y);
        ade = std::min(ade, s / static_cast<double>(T));
        const double f = std::hypot(p.coords(m, 2 * T - 2) - agents[0].future[T - 1].x, p.coords(m, 2 * T - 1) - agents[0].future[T - 1].y);
        if (f < fde) {
          fde = f;
          conf = p.confidences[m];
        }
      }
      const double brier = fde + (1.0 - conf) * (1.0 - conf);
      const AgentMetrics got = agent_metrics(p, 0, agents[0].future, k);
      worst = std::max({worst, std::abs(got.min_ade - ade), std::abs(got.min_fde - fde), std::abs(got.brier_min_fde - brier)});
      o.require(got.miss == (fde > 2.0), "miss flag");
      const double c = p.confidence(0, got.best);
      o.require(got.brier_min_fde - got.min_fde == (1.0 - c) * (1.0 - c) || got.brier_min_fde == got.min_fde + (1.0 - c) * (1.0 - c),
                "brier - minFDE != (1-c)^2");
      sums[slot][0] += ade;
      sums[slot][1] += fde;
      sums[slot][2] += fde > 2.0 ? 1.0 : 0.0;
      sums[slot][3] += brier;
      ++slot;
    }
  }
  std::size_t slot = 0;
  for (std::size_t k : {std::size_t{1}, std::size_t{6}}) {
    const MetricRow row = evaluate(samples, k);
    o.require(row.n == focal, "aggregate agent count");
    const double n = static_cast<double>(focal);
    worst = std::max({worst, std::abs(row.min_ade - sums[slot][0] / n), std::abs(row.min_fde - sums[slot][1] / n),
                      std::abs(row.miss_rate - sums[slot][2] / n), std::abs(row.brier_min_fde - sums[slot][3] / n)});
    ++slot;
  }
  o.require(worst <= 1e-9, "max deviation " + std::to_string(worst));

  // boundary: endpoint exactly 2 m away
  PredictionSet edge;
  edge.agents = 1;
  edge.modes = 1;
  edge.future_steps = 1;
  edge.coords = Tensor::matrix(1, 2);
  edge.coords(0, 1) = 2.0;
  edge.confidences = Tensor(Shape{1, 1}, 0.75);
  const AgentMetrics b = agent_metrics(edge, 0, {{0.0, 0.0}}, 1);
  o.require(b.min_fde == 2.0 && !b.miss, "FDE = 2.0 m counted as a miss");
  o.require(b.brier_min_fde - b.min_fde == 0.0625, "brier - minFDE != (1-c)^2 at the boundary");
  o.detail << "200 sets, max deviation " << worst << "; 2.0 m boundary is a hit";
  return o;
}

// --- 5 -------------------------------------------------------------------

Outcome identity_at_init()
{
  Outcome o;
  const auto scenes = generate_dataset(3, 5, 55, two_hz());
  std::size_t runs = 0;
  for (std::size_t iters : {1u, 2u, 3u, 5u}) {
    for (bool training : {false, true}) {
      for (const auto & s : scenes) {
        const HeteroGraph g = assemble_scene_graph(s);
        ModelConfig mc;
        mc.dim = 16;
        mc.refine_iterations = iters;
        Model m = create_model(mc, g.future_steps(), 9);
        // move the proposal heads off zero so proposals are not trivially the last position
        Rng rng(iters);
        for (auto & [name, p] : m.store.entries()) {
          if (name.rfind("head.", 0) == 0 && name.find(".coords.W") != std::string::npos) {
            for (auto & v : p.value.data()) v = rng.uniform(-0.5, 0.5);
          }
        }
        Tape tape;
        Context ctx(tape, m.store, training);
        const ModelOutput out = run_model(ctx, m, g);
        o.require(out.refined.has_value(), "no refined output");
        o.require(bitwise_equal(out.refined->coords.value(), out.proposals.coords.value()),
                  "refined coordinates differ from proposals (iterations " + std::to_string(iters) + ")");
        ++runs;
      }
    }
  }
  o.detail << runs << " forwards (iterations 1,2,3,5; train and eval) bitwise equal";
  return o;
}

// --- 6 -------------------------------------------------------------------

Config overfit_config()
{
  Config c;
  c.model.dim = 32;
  c.train.steps = 500;
  c.train.batch_size = 8;
  c.train.lr = 3e-3;
  return c;
}

Outcome overfit_smoke()
{
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto scenes = generate_dataset(8, 6, 1, two_hz());
  const auto graphs = graphs_of(scenes);
  const Config c = overfit_config();
  Model m = create_model(c.model, graphs.front().future_steps(), c.train.seed);
  TrainOptions opt;
  opt.regime = Regime::kNone;
  opt.config = c.train;
  const auto rec = train(m, graphs, opt);
  std::vector<EvalSample> samples;
  for (const auto & g : graphs) samples.push_back({predict(m, g, false), g.agents});
  const MetricRow row = evaluate(samples, 6);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double drop = 1.0 - rec.back().total / rec.front().total;
  o.require(drop >= 0.9, "loss drop below 90%");
  o.require(row.min_fde < 0.5, "training-set minFDE(K=6) not below 0.5 m");
  o.require(secs < 600.0, "runtime over 10 min");
  o.detail << std::setprecision(4) << "loss " << rec.front().total << " -> " << rec.back().total << " (drop " << 100 * drop
           << "%), minFDE(K=6) " << row.min_fde << " m, " << secs << " s";
  return o;
}

// --- 7 -------------------------------------------------------------------

Outcome refinement_consistency()
{
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<Scenario> train_set, held_out;
  for (std::uint64_t i = 0; i < 40; ++i) train_set.push_back(generate_synthetic(ScenarioKind::kCurve, 4, 1000 + i, two_hz()));
  for (std::uint64_t i = 0; i < 20; ++i) held_out.push_back(generate_synthetic(ScenarioKind::kCurve, 4, 5000 + i, two_hz()));
  const auto train_graphs = graphs_of(train_set);
  Config c;
  c.model.dim = 32;
  c.train.steps = 1000;
  c.train.lr = 3e-3;
  Model m = create_model(c.model, train_graphs.front().future_steps(), c.train.seed);
  TrainOptions opt;
  opt.regime = Regime::kE2e;
  opt.config = c.train;
  train(m, train_graphs, opt);
  double proposals = 0.0;
  double refined = 0.0;
  for (const auto & s : held_out) {
    const HeteroGraph g = assemble_scene_graph(s);
    const auto lanes = local_centerlines(s, g.scenes.front().frame);
    proposals += mean_lane_distance(predict(m, g, false), g.agents, lanes);
    refined += mean_lane_distance(predict(m, g, true), g.agents, lanes);
  }
  proposals /= static_cast<double>(held_out.size());
  refined /= static_cast<double>(held_out.size());
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(refined < proposals, "refined trajectories are not closer to the lanes");
  o.require(secs < 1200.0, "runtime over 20 min");
  o.detail << std::setprecision(4) << "held-out mean lane distance: proposals " << proposals << " m, refined " << refined << " m, " << secs
           << " s";
  return o;
}

// --- 8 -------------------------------------------------------------------

Outcome regime_contracts()
{
  Outcome o;
  const auto graphs = graphs_of(generate_dataset(4, 4, 88, two_hz()));
  ModelConfig mc;
  mc.dim = 16;
  Model m = create_model(mc, graphs.front().future_steps(), 8);
  TrainOptions opt;
  opt.config.steps = 5;
  opt.config.batch_size = 2;
  opt.regime = Regime::kNone;
  train(m, graphs, opt);
  const ParameterStore before = m.store;
  opt.regime = Regime::kFrozen;
  train(m, graphs, opt);
  std::size_t base = 0;
  std::size_t moved_refine = 0;
  for (const auto & [name, p] : m.store.entries()) {
    if (name.rfind("refine.", 0) == 0) {
      if (!bitwise_equal(p.value, before.at(name).value)) ++moved_refine;
    } else {
      ++base;
      o.require(bitwise_equal(p.value, before.at(name).value), "frozen regime changed " + name);
    }
  }
  o.require(moved_refine > 0, "frozen regime did not train the refinement");

  TrainConfig tc;
  tc.proposal_loss_weight = 0.0;
  Tape tape;
  Context ctx(tape, m.store, true);
  const Var loss = regime_loss(ctx, m, merge_batch(graphs, {0, 1}), Regime::kE2e, tc);
  tape.backward(loss);
  std::size_t nonzero = 0;
  std::size_t encoder = 0;
  for (const auto & [name, g] : ctx.gradients()) {
    if (name.rfind("enc.", 0) != 0 && name.rfind("map.", 0) != 0 && name.rfind("scene.", 0) != 0) continue;
    ++encoder;
    if (std::any_of(g.data().begin(), g.data().end(), [](double v) { return v != 0.0; })) ++nonzero;
  }
  o.require(nonzero > 0, "no encoder gradient through the refined loss");
  o.detail << base << " base tensors bitwise unchanged, " << moved_refine << " refinement tensors trained; " << nonzero << "/" << encoder
           << " encoder tensors receive gradient from the refined loss alone";
  return o;
}

// --- 9 -------------------------------------------------------------------

Outcome ablation_mechanics()
{
  Outcome o;
  const auto scenes = generate_dataset(8, 6, 1, two_hz());
  const Config base = overfit_config();

  // structure
  std::vector<std::vector<EdgeTable>> dyn;
  for (const auto & removed : standard_removal_sets()) {
    GraphConfig gc;
    gc.removed = removed;
    const auto graphs = graphs_of(scenes, gc);
    for (const auto & g : graphs) {
      for (auto r : removed) o.require(g.edge(r).size() == 0, "removed family " + std::string(to_string(r)) + " present");
      o.require(g.edge(Relation::kStepToTraj).size() == g.steps().size(), "step_to_traj changed");
    }
    ModelConfig mc;
    mc.dim = 16;
    Model m = create_model(mc, graphs.front().future_steps(), 3);
    Tape tape;
    Context ctx(tape, m.store, false);
    ForwardOptions fo;
    fo.record_refinement_edges = true;
    dyn.push_back(run_model(ctx, m, merge_batch(graphs, {0, 1, 2, 3, 4, 5, 6, 7}), fo).refinement_edges);
  }
  for (const auto & d : dyn) {
    o.require(d.size() == dyn.front().size(), "refinement iteration count changed");
    for (std::size_t i = 0; i < d.size(); ++i) {
      o.require(d[i].src == dyn.front()[i].src && d[i].dst == dyn.front()[i].dst, "refinement edges changed");
    }
  }
  bool rejected = false;
  try {
    check_removal_set({Relation::kLaneSucc});
  } catch (const AblationError &) {
    rejected = true;
  }
  o.require(rejected, "lane-lane removal accepted");

  // ordering on the overfit suite
  Config c = base;
  c.train.steps = 300;
  std::vector<RemovalSet> sets{{}};
  for (auto r : removable_relations()) sets.push_back({r});
  const auto rows = ablate(c, scenes, scenes, sets);
  o.detail << std::setprecision(4) << "brier-minFDE(K=6):";
  for (const auto & r : rows) {
    o.detail << " " << removal_label(r.removed) << "=" << r.k6.brier_min_fde;
    if (!r.removed.empty()) {
      o.require(rows.front().k6.brier_min_fde <= r.k6.brier_min_fde, "full graph worse than without " + removal_label(r.removed));
    }
  }
  return o;
}

// --- 10 ------------------------------------------------------------------

std::string slurp(const fs::path & p)
{
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism()
{
  Outcome o;
  const fs::path work = fs::temp_directory_path() / "hgat_acceptance_determinism";
  fs::remove_all(work);
  fs::create_directories(work);
  {
    std::ofstream cfg(work / "run.cfg");
    cfg << "model.dim = 16\ntrain.steps = 20\ntrain.batch_size = 2\ntrain.seed = 5\n";
  }
  const std::string cli = HGAT_CLI;
  const auto sh = [&](const std::string & args) {
    const std::string cmd = cli + " --threads 1 " + args + " > /dev/null 2>> " + (work / "log.txt").string();
    return std::system(cmd.c_str()) == 0;
  };
  for (const char * run : {"a", "b"}) {
    const fs::path dir = work / run;
    o.require(sh("generate --count 4 --agents 4 --seed 12 --rate 2 --out " + (dir / "data").string()), "generate failed");
    o.require(sh("train --data " + (dir / "data").string() + " --config " + (work / "run.cfg").string() + " --regime e2e --out " +
                 (dir / "model.ckpt").string()),
              "train failed");
    o.require(sh("eval --ckpt " + (dir / "model.ckpt").string() + " --data " + (dir / "data").string() + " --k 1,6 --out " +
                 (dir / "metrics.csv").string()),
              "eval failed");
  }
  const std::string ca = slurp(work / "a" / "model.ckpt");
  const std::string ea = slurp(work / "a" / "metrics.csv");
  o.require(!ca.empty() && ca == slurp(work / "b" / "model.ckpt"), "checkpoints differ");
  o.require(!ea.empty() && ea == slurp(work / "b" / "metrics.csv"), "eval CSVs differ");
  o.require(slurp(work / "a" / "model.ckpt.loss.csv") == slurp(work / "b" / "model.ckpt.loss.csv"), "loss logs differ");
  o.detail << "checkpoint (" << ca.size() << " bytes), loss log and eval CSV identical across two runs";
  return o;
}

struct Criterion
{
  int id;
  const char * name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char ** argv)
{
  const std::vector<Criterion> all{
    {1, "gradient suite", gradient_suite},
    {2, "attention properties", attention_properties},
    {3, "graph construction constraints", graph_constraints},
    {4, "metric oracle equivalence", metric_oracle},
    {5, "identity-at-init refinement", identity_at_init},
    {6, "overfit smoke test", overfit_smoke},
    {7, "refinement lane consistency", refinement_consistency},
    {8, "regime contracts", regime_contracts},
    {9, "ablation mechanics", ablation_mechanics},
    {10, "determinism", determinism},
  };
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));
  int failed = 0;
  for (const auto & c : all) {
    if (!wanted.empty() && !wanted.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception & e) {
      out.pass = false;
      out.detail << "exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!out.pass) ++failed;
    std::cout << (out.pass ? "[PASS] " : "[FAIL] ") << c.id << ". " << c.name << " (" << std::fixed << std::setprecision(1) << secs
              << " s): " << std::defaultfloat << out.detail.str() << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
