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
#include "hgat/refinement.hpp"

#include <cmath>

namespace hgat
{

namespace
{

MlpLayout offset_layout(std::size_t dim) { return {dim, {dim, dim, 2}, false, false, Init::kZero}; }

MlpLayout confidence_layout(const RefineLayout & l)
{
  std::vector<std::size_t> widths(l.confidence_layers - 1, l.dim);
  widths.push_back(1);
  return {l.dim, widths};
}

void require(bool ok, const std::string & what)
{
  if (!ok) throw RefinementContractError("refinement input contract: " + what);
}

void check_inputs(const RefinementInputs & in)
{
  const std::size_t lanes = in.lane_features.valid() ? in.lane_features.rows() : 0;
  require(in.lane_features.valid(), "lane nodes need features");
  require(in.lane_coords.size() == lanes, "lane nodes need coordinates (one per feature row)");
  require(in.lane_headings.size() == lanes, "lane nodes need headings (one per feature row)");
  require(in.lane_scene.size() == lanes, "lane nodes need a scene index (one per feature row)");
  require(in.modes > 0 && in.future_steps > 0, "proposals need at least one mode and one future step");
  const std::size_t rows = in.agents.size() * in.modes;
  require(in.coords.valid() && in.coords.rows() == rows && in.coords.cols() == 2 * in.future_steps,
          "step nodes need coordinates [N*K x 2T]");
  require(in.aux.valid() && in.aux.rows() == rows, "step nodes need initial features [N*K x D]");
  require(in.final.valid() && in.final.rows() == in.agents.size(), "trajectory nodes need initial features [N x D]");
  require(in.aux.cols() == in.final.cols() && in.lane_features.cols() == in.final.cols(), "feature widths must agree");
}

std::vector<Vec2> to_points(const Tensor & xy)
{
  std::vector<Vec2> out(xy.rows());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = {xy(i, 0), xy(i, 1)};
  return out;
}

}  // namespace

RefinementInputs refinement_inputs(const HeteroGraph & graph, const EncodedScene & encoded, const Forecast & proposals)
{
  const NodeTable & lanes = graph.lanes();
  RefinementInputs in;
  in.lane_coords = lanes.coords;
  in.lane_headings = lanes.headings;
  in.lane_scene = lanes.scene;
  in.lane_features = encoded.lanes;
  in.agents = graph.agents;
  in.final = encoded.final;
  in.modes = proposals.modes;
  in.future_steps = proposals.future_steps;
  in.coords = proposals.coords;
  in.aux = proposals.aux;
  return in;
}

void add_transformer_conv(ParameterStore & store, const std::string & prefix, std::size_t dim, std::size_t edge_dim, Rng & rng)
{
  add_linear(store, prefix + ".query", dim, dim, rng);
  add_linear(store, prefix + ".key", dim, dim, rng);
  add_linear(store, prefix + ".value", dim, dim, rng);
  if (edge_dim > 0) add_linear(store, prefix + ".edge", edge_dim, dim, rng, Init::kXavier, false);
}

void add_refinement(ParameterStore & store, const RefineLayout & layout, Rng & rng)
{
  const std::size_t d = layout.dim;
  if (layout.heads == 0 || d % layout.heads != 0) throw std::invalid_argument("refinement: heads must divide the feature width");
  add_linear(store, "refine.step_init", d + 3, d, rng);
  add_transformer_conv(store, "refine.lane_to_step", d, 4, rng);
  add_transformer_conv(store, "refine.step_to_traj", d, 0, rng);
  add_transformer_conv(store, "refine.traj_to_step", d, 0, rng);
  add_mlp(store, "refine.offset", offset_layout(d), rng);
  add_transformer_conv(store, "refine.final_step_to_traj", d, 0, rng);
  add_mlp(store, "refine.conf", confidence_layout(layout), rng);
}

RefinementGraph init_refinement_graph(Context & ctx, const RefineLayout & layout, const RefinementInputs & in)
{
  check_inputs(in);
  RefinementGraph g;
  g.agents = in.agents.size();
  g.modes = in.modes;
  g.future_steps = in.future_steps;
  g.lane_coords = in.lane_coords;
  g.lane_scene = in.lane_scene;
  g.lane_directions.reserve(in.lane_headings.size());
  for (double h : in.lane_headings) g.lane_directions.push_back({std::cos(h), std::sin(h)});
  g.lanes = in.lane_features;

  const std::size_t trajs = g.agents * g.modes;
  const std::size_t n = trajs * g.future_steps;
  g.step_coords = reshape(in.coords, n, 2);
  g.step_owner.resize(n);
  g.step_scene.resize(n);
  g.step_heading.resize(n);
  Tensor t_norm = Tensor::matrix(n, 1);
  Index agent_of_traj(trajs);
  const double denom = g.future_steps > 1 ? static_cast<double>(g.future_steps - 1) : 1.0;
  for (std::size_t r = 0; r < trajs; ++r) {
    const std::size_t a = r / g.modes;
    agent_of_traj[r] = static_cast<std::uint32_t>(a);
    for (std::size_t t = 0; t < g.future_steps; ++t) {
      const std::size_t i = r * g.future_steps + t;
      g.step_owner[i] = static_cast<std::uint32_t>(r);
      g.step_scene[i] = in.agents[a].scene;
      g.step_heading[i] = in.agents[a].last_heading;
      t_norm(i, 0) = static_cast<double>(t) / denom;
    }
  }
  const Var init = concat_cols({gather_rows(in.aux, g.step_owner), ctx.constant(std::move(t_norm)), scale(g.step_coords, layout.position_scale)});
  g.steps = relu(apply_linear(ctx, "refine.step_init", init));
  g.trajectories = gather_rows(in.final, agent_of_traj);
  return g;
}

EdgeTable dynamic_edges(
  const std::vector<Vec2> & step_coords, const std::vector<std::uint32_t> & step_scene,
  const std::vector<Vec2> & lane_coords, const std::vector<std::uint32_t> & lane_scene, std::size_t k)
{
  std::vector<std::vector<std::uint32_t>> by_scene;
  for (std::size_t i = 0; i < lane_coords.size(); ++i) {
    if (lane_scene[i] >= by_scene.size()) by_scene.resize(lane_scene[i] + 1);
    by_scene[lane_scene[i]].push_back(static_cast<std::uint32_t>(i));
  }
  EdgeTable e;
  e.relation = Relation::kLaneToStep;
  for (std::size_t s = 0; s < step_coords.size(); ++s) {
    const std::uint32_t scene = step_scene[s];
    if (scene >= by_scene.size() || by_scene[scene].empty()) {
      throw RefinementContractError("refinement needs lane nodes, scene " + std::to_string(scene) + " has none");
    }
    for (auto lane : nearest_within(lane_coords, by_scene[scene], step_coords[s], k, -1.0)) {
      e.src.push_back(lane);
      e.dst.push_back(static_cast<std::uint32_t>(s));
    }
  }
  e.features = Tensor::matrix(e.size(), 4);
  return e;
}

Var dynamic_edge_features(Context & ctx, const RefinementGraph & g, const EdgeTable & edges, double position_scale)
{
  const std::size_t m = edges.size();
  Tensor lane_xy = Tensor::matrix(m, 2);
  Tensor direction = Tensor::matrix(m, 2);
  std::vector<double> c(m);
  std::vector<double> s(m);
  for (std::size_t e = 0; e < m; ++e) {
    const Vec2 p = g.lane_coords[edges.src[e]];
    const double h = g.step_heading[edges.dst[e]];
    // rotate by -heading into the agent frame
    c[e] = std::cos(h);
    s[e] = -std::sin(h);
    lane_xy(e, 0) = p.x;
    lane_xy(e, 1) = p.y;
    const Vec2 d = rotate(g.lane_directions[edges.src[e]], -h);
    direction(e, 0) = d.x;
    direction(e, 1) = d.y;
  }
  const Var disp = sub(ctx.constant(std::move(lane_xy)), gather_rows(g.step_coords, edges.dst));
  return concat_cols({scale(rotate2d(disp, c, s), position_scale), ctx.constant(std::move(direction))});
}

Var transformer_conv(
  Context & ctx, const std::string & prefix, std::size_t heads, const Var & x_dst, const Var & x_src, const Index & src,
  const Index & dst, const Var & edge_features, Var * alpha)
{
  const std::size_t d = x_dst.cols();
  if (heads == 0 || d % heads != 0) throw std::invalid_argument("transformer_conv: heads must divide the feature width");
  if (src.size() != dst.size()) throw DimensionError("transformer_conv: src/dst length mismatch");
  if (src.empty()) return x_dst;
  const std::size_t hd = d / heads;
  const Var q = gather_rows(apply_linear(ctx, prefix + ".query", x_dst), dst);
  Var k = gather_rows(apply_linear(ctx, prefix + ".key", x_src), src);
  Var v = gather_rows(apply_linear(ctx, prefix + ".value", x_src), src);
  if (edge_features.valid()) {
    const Var e = apply_linear(ctx, prefix + ".edge", edge_features);
    k = add(k, e);
    v = add(v, e);
  }
  const Var ones = ctx.constant(Tensor(Shape{heads, hd}, 1.0));
  const Var logits = scale(head_dot(mul(q, k), ones), 1.0 / std::sqrt(static_cast<double>(hd)));
  const Var a = segment_softmax(logits, dst, x_dst.rows());
  if (alpha) *alpha = a;
  return add(x_dst, segment_sum(head_scale(v, a), dst, x_dst.rows()));
}

void refinement_iteration(Context & ctx, const RefineLayout & layout, RefinementGraph & g, EdgeTable * edges)
{
  EdgeTable e = dynamic_edges(to_points(g.step_coords.value()), g.step_scene, g.lane_coords, g.lane_scene, layout.lane_k);
  const Var features = dynamic_edge_features(ctx, g, e, layout.position_scale);
  g.steps = transformer_conv(ctx, "refine.lane_to_step", layout.heads, g.steps, g.lanes, e.src, e.dst, features);
  Index self(g.step_owner.size());
  for (std::size_t i = 0; i < self.size(); ++i) self[i] = static_cast<std::uint32_t>(i);
  g.trajectories = transformer_conv(ctx, "refine.step_to_traj", layout.heads, g.trajectories, g.steps, self, g.step_owner, Var());
  g.steps = transformer_conv(ctx, "refine.traj_to_step", layout.heads, g.steps, g.trajectories, g.step_owner, self, Var());
  g.step_coords = add(g.step_coords, apply_mlp(ctx, "refine.offset", offset_layout(layout.dim), g.steps));
  if (edges) *edges = std::move(e);
}

Forecast refine(Context & ctx, const RefineLayout & layout, const RefinementInputs & in, std::vector<EdgeTable> * edges)
{
  if (layout.iterations == 0) throw std::invalid_argument("refinement needs at least one iteration");
  RefinementGraph g = init_refinement_graph(ctx, layout, in);
  for (std::size_t i = 0; i < layout.iterations; ++i) {
    EdgeTable e;
    refinement_iteration(ctx, layout, g, edges ? &e : nullptr);
    if (edges) edges->push_back(std::move(e));
  }
  Index self(g.step_owner.size());
  for (std::size_t i = 0; i < self.size(); ++i) self[i] = static_cast<std::uint32_t>(i);
  g.trajectories = transformer_conv(ctx, "refine.final_step_to_traj", layout.heads, g.trajectories, g.steps, self, g.step_owner, Var());

  Forecast f;
  f.agents = g.agents;
  f.modes = g.modes;
  f.future_steps = g.future_steps;
  f.coords = reshape(g.step_coords, g.agents * g.modes, 2 * g.future_steps);
  f.aux = g.trajectories;
  f.logits = apply_mlp(ctx, "refine.conf", confidence_layout(layout), g.trajectories);
  Index owner(g.agents * g.modes);
  for (std::size_t r = 0; r < owner.size(); ++r) owner[r] = static_cast<std::uint32_t>(r / g.modes);
  f.confidences = segment_softmax(f.logits, owner, g.agents);
  return f;
}

}  // namespace hgat
