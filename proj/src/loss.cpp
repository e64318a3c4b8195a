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
#include "hgat/loss.hpp"

#include <cmath>
#include <stdexcept>

namespace hgat
{

double LossOptions::weight(TrackCategory c) const
{
  switch (c) {
    case TrackCategory::kFocal:
      return focal;
    case TrackCategory::kScored:
      return scored;
    case TrackCategory::kUnscored:
      return unscored;
    case TrackCategory::kFragment:
      return fragment;
  }
  throw std::invalid_argument("unknown track category");
}

LossOptions LossOptions::from(const TrainConfig & c)
{
  LossOptions o;
  o.focal = c.weight_focal;
  o.scored = c.weight_scored;
  o.unscored = c.weight_unscored;
  o.fragment = c.weight_fragment;
  o.margin = c.margin;
  o.traj_weight = c.traj_weight;
  return o;
}

std::size_t best_mode(const Tensor & coords, std::size_t agent, std::size_t modes, const std::vector<Vec2> & future)
{
  const std::size_t last = future.size() - 1;
  std::size_t best = 0;
  double best_d = 0.0;
  for (std::size_t k = 0; k < modes; ++k) {
    const std::size_t row = agent * modes + k;
    const double dx = coords(row, 2 * last) - future[last].x;
    const double dy = coords(row, 2 * last + 1) - future[last].y;
    const double d = dx * dx + dy * dy;
    if (k == 0 || d < best_d) {
      best = k;
      best_d = d;
    }
  }
  return best;
}

LossBreakdown forecast_loss(const Forecast & f, const std::vector<AgentInfo> & agents, const LossOptions & options)
{
  if (agents.size() != f.agents) throw std::invalid_argument("forecast_loss: agent count mismatch");
  Tape & tape = *f.coords.tape();
  const std::size_t K = f.modes;
  const std::size_t T = f.future_steps;
  const Tensor & coords = f.coords.value();

  LossBreakdown out;
  out.agents.resize(agents.size());
  Index best_rows;
  Index others;
  Index paired;
  std::vector<std::size_t> scored_agents;
  for (std::size_t a = 0; a < agents.size(); ++a) {
    AgentLoss & l = out.agents[a];
    l.weight = options.weight(agents[a].category);
    if (l.weight == 0.0 || agents[a].future.size() != T) {
      l.weight = 0.0;
      continue;
    }
    l.best = best_mode(coords, a, K, agents[a].future);
    scored_agents.push_back(a);
    best_rows.push_back(static_cast<std::uint32_t>(a * K + l.best));
    for (std::size_t k = 0; k < K; ++k) {
      if (k == l.best) continue;
      others.push_back(static_cast<std::uint32_t>(a * K + k));
      paired.push_back(static_cast<std::uint32_t>(a * K + l.best));
    }
  }
  if (scored_agents.empty()) {
    out.traj = tape.constant(Tensor::vector(1));
    out.conf = tape.constant(Tensor::vector(1));
    out.total = tape.constant(Tensor::vector(1));
    return out;
  }

  const std::size_t m = scored_agents.size();
  Tensor truth = Tensor::matrix(m, 2 * T);
  Tensor traj_w = Tensor::matrix(m, 2 * T);
  for (std::size_t i = 0; i < m; ++i) {
    const AgentInfo & a = agents[scored_agents[i]];
    const double w = out.agents[scored_agents[i]].weight / static_cast<double>(2 * T);
    for (std::size_t t = 0; t < T; ++t) {
      truth(i, 2 * t) = a.future[t].x;
      truth(i, 2 * t + 1) = a.future[t].y;
      traj_w(i, 2 * t) = w;
      traj_w(i, 2 * t + 1) = w;
    }
  }
  const Var per_coord = smooth_l1(sub(gather_rows(f.coords, best_rows), tape.constant(std::move(truth))));
  out.traj = sum(mul(per_coord, tape.constant(std::move(traj_w))));
  for (std::size_t i = 0; i < m; ++i) {
    double s = 0.0;
    for (std::size_t c = 0; c < 2 * T; ++c) s += per_coord.value()(i, c);
    out.agents[scored_agents[i]].traj = s / static_cast<double>(2 * T);
  }

  if (others.empty()) {
    out.conf = tape.constant(Tensor(out.traj.value().shape(), 0.0));
  } else {
    Tensor conf_w = Tensor::matrix(others.size(), 1);
    for (std::size_t e = 0; e < others.size(); ++e) {
      conf_w(e, 0) = out.agents[others[e] / K].weight / static_cast<double>(K - 1);
    }
    const Var hinge = relu(add(
      sub(gather_rows(f.logits, others), gather_rows(f.logits, paired)),
      tape.constant(Tensor(Shape{others.size(), 1}, options.margin))));
    out.conf = sum(mul(hinge, tape.constant(std::move(conf_w))));
    for (std::size_t e = 0; e < others.size(); ++e) {
      out.agents[others[e] / K].conf += hinge.value()(e, 0) / static_cast<double>(K - 1);
    }
  }
  out.total = add(out.conf, scale(out.traj, options.traj_weight));
  return out;
}

}  // namespace hgat
