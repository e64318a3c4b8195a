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
#include "hgat/forecaster.hpp"

#include <cmath>
#include <stdexcept>

namespace hgat
{

namespace
{

constexpr std::array<AgentType, kAgentTypeCount> kTypes{
  AgentType::kVehicle, AgentType::kPedestrian, AgentType::kBus, AgentType::kCyclist, AgentType::kMotorcyclist};

std::string head_name(AgentType t, std::size_t k) { return std::string("head.") + to_string(t) + ".mode" + std::to_string(k); }

MlpLayout hidden_layout(const ForecastLayout & l)
{
  return {l.dim, std::vector<std::size_t>(l.head_layers, l.dim), true, true};
}

MlpLayout confidence_layout(const ForecastLayout & l)
{
  std::vector<std::size_t> widths(l.confidence_layers - 1, l.dim);
  widths.push_back(1);
  return {2 * l.dim, widths};
}

/// Gathers, per agent-major row, the row of the output block of its agent's type.
Var select_by_type(
  const std::array<Var, kAgentTypeCount> & per_type, const std::vector<AgentInfo> & agents, std::size_t per_agent)
{
  std::vector<Var> blocks;
  std::array<std::size_t, kAgentTypeCount> offset{};
  std::size_t rows = 0;
  for (std::size_t t = 0; t < kAgentTypeCount; ++t) {
    if (!per_type[t].valid()) continue;
    offset[t] = rows;
    rows += per_type[t].rows();
    blocks.push_back(per_type[t]);
  }
  Index pick;
  pick.reserve(agents.size() * per_agent);
  for (std::size_t a = 0; a < agents.size(); ++a) {
    const std::size_t t = agent_type_slot(agents[a].type);
    for (std::size_t k = 0; k < per_agent; ++k) pick.push_back(static_cast<std::uint32_t>(offset[t] + a * per_agent + k));
  }
  return gather_rows(concat_rows(blocks), pick);
}

std::array<bool, kAgentTypeCount> present_types(const std::vector<AgentInfo> & agents)
{
  std::array<bool, kAgentTypeCount> present{};
  for (const auto & a : agents) present[agent_type_slot(a.type)] = true;
  return present;
}

/// Mode-major blocks [K blocks of N rows] to agent-major rows.
Index mode_major_to_agent_major(std::size_t agents, std::size_t modes)
{
  Index idx;
  idx.reserve(agents * modes);
  for (std::size_t a = 0; a < agents; ++a) {
    for (std::size_t k = 0; k < modes; ++k) idx.push_back(static_cast<std::uint32_t>(k * agents + a));
  }
  return idx;
}

}  // namespace

std::size_t agent_type_slot(AgentType t)
{
  const auto v = static_cast<std::size_t>(t);
  if (v >= kAgentTypeCount) throw std::invalid_argument("unknown agent type " + std::to_string(v));
  return v;
}

Vec2 PredictionSet::point(std::size_t agent, std::size_t mode, std::size_t t) const
{
  const std::size_t row = agent * modes + mode;
  return {coords(row, 2 * t), coords(row, 2 * t + 1)};
}

PredictionSet to_prediction_set(const Forecast & f)
{
  PredictionSet p;
  p.agents = f.agents;
  p.modes = f.modes;
  p.future_steps = f.future_steps;
  p.coords = f.coords.value();
  p.confidences = f.confidences.value();
  return p;
}

void add_forecaster(ParameterStore & store, const ForecastLayout & layout, Rng & rng)
{
  if (layout.modes == 0 || layout.future_steps == 0 || layout.confidence_layers == 0) {
    throw std::invalid_argument("forecaster needs at least one mode, one future step and one confidence layer");
  }
  for (auto t : kTypes) {
    for (std::size_t k = 0; k < layout.modes; ++k) {
      const std::string name = head_name(t, k);
      add_mlp(store, name, hidden_layout(layout), rng);
      add_linear(store, name + ".coords", layout.dim, 2 * layout.future_steps, rng, Init::kZero);
      add_linear(store, name + ".aux", layout.dim, layout.dim, rng);
    }
    add_mlp(store, std::string("conf.") + to_string(t), confidence_layout(layout), rng);
  }
}

Var decode_displacements(Context & ctx, const Var & deltas, const std::vector<AgentInfo> & agents, std::size_t modes)
{
  const std::size_t rows = deltas.rows();
  const std::size_t width = deltas.cols();
  if (rows != agents.size() * modes || width % 2 != 0) {
    throw DimensionError("decode_displacements: expected [" + std::to_string(agents.size() * modes) + " x 2T] deltas");
  }
  const std::size_t steps = width / 2;
  std::vector<double> c;
  std::vector<double> s;
  c.reserve(rows * steps);
  s.reserve(rows * steps);
  Tensor origin = Tensor::matrix(rows, width);
  for (std::size_t a = 0; a < agents.size(); ++a) {
    const double ca = std::cos(agents[a].last_heading);
    const double sa = std::sin(agents[a].last_heading);
    for (std::size_t k = 0; k < modes; ++k) {
      for (std::size_t t = 0; t < steps; ++t) {
        c.push_back(ca);
        s.push_back(sa);
        // +0.0 turns a -0 start into +0 so an untouched trajectory prints without sign noise
        origin(a * modes + k, 2 * t) = agents[a].last_position.x + 0.0;
        origin(a * modes + k, 2 * t + 1) = agents[a].last_position.y + 0.0;
      }
    }
  }
  const Var rotated = reshape(rotate2d(reshape(deltas, rows * steps, 2), c, s), rows, width);
  // running sum over time, per coordinate
  Tensor cumulative = Tensor::matrix(width, width);
  for (std::size_t from = 0; from < steps; ++from) {
    for (std::size_t to = from; to < steps; ++to) {
      cumulative(2 * from, 2 * to) = 1.0;
      cumulative(2 * from + 1, 2 * to + 1) = 1.0;
    }
  }
  return add(matmul(rotated, ctx.constant(std::move(cumulative))), ctx.constant(std::move(origin)));
}

Forecast predict_trajectories(
  Context & ctx, const ForecastLayout & layout, const Var & final, const std::vector<AgentInfo> & agents)
{
  if (final.rows() != agents.size() || final.cols() != layout.dim) {
    throw DimensionError("forecaster: final features must be [" + std::to_string(agents.size()) + " x " + std::to_string(layout.dim) + "]");
  }
  const auto present = present_types(agents);
  const Index reorder = mode_major_to_agent_major(agents.size(), layout.modes);
  std::array<Var, kAgentTypeCount> deltas;
  std::array<Var, kAgentTypeCount> aux;
  for (std::size_t t = 0; t < kAgentTypeCount; ++t) {
    if (!present[t]) continue;
    std::vector<Var> d;
    std::vector<Var> x;
    for (std::size_t k = 0; k < layout.modes; ++k) {
      const std::string name = head_name(kTypes[t], k);
      const Var h = apply_mlp(ctx, name, hidden_layout(layout), final);
      d.push_back(apply_linear(ctx, name + ".coords", h));
      x.push_back(apply_linear(ctx, name + ".aux", h));
    }
    deltas[t] = gather_rows(concat_rows(d), reorder);
    aux[t] = gather_rows(concat_rows(x), reorder);
  }
  Forecast f;
  f.agents = agents.size();
  f.modes = layout.modes;
  f.future_steps = layout.future_steps;
  f.coords = decode_displacements(ctx, select_by_type(deltas, agents, layout.modes), agents, layout.modes);
  f.aux = select_by_type(aux, agents, layout.modes);
  return f;
}

void rate_confidence(
  Context & ctx, const ForecastLayout & layout, const Var & final, const std::vector<AgentInfo> & agents, Forecast & f)
{
  const std::size_t k_modes = layout.modes;
  Index owner;
  owner.reserve(agents.size() * k_modes);
  for (std::size_t a = 0; a < agents.size(); ++a) {
    for (std::size_t k = 0; k < k_modes; ++k) owner.push_back(static_cast<std::uint32_t>(a));
  }
  const Var input = concat_cols({gather_rows(final, owner), f.aux});
  // Each type's head only sees its own agents' mode rows (at least K rows), so batch
  // statistics never mix types.
  std::vector<Var> blocks;
  Index position(agents.size() * k_modes);
  std::uint32_t rows = 0;
  for (std::size_t t = 0; t < kAgentTypeCount; ++t) {
    Index mine;
    for (std::size_t a = 0; a < agents.size(); ++a) {
      if (agent_type_slot(agents[a].type) != t) continue;
      for (std::size_t k = 0; k < k_modes; ++k) {
        mine.push_back(static_cast<std::uint32_t>(a * k_modes + k));
        position[a * k_modes + k] = rows++;
      }
    }
    if (mine.empty()) continue;
    blocks.push_back(apply_mlp(ctx, std::string("conf.") + to_string(kTypes[t]), confidence_layout(layout), gather_rows(input, mine)));
  }
  f.logits = gather_rows(concat_rows(blocks), position);
  f.confidences = segment_softmax(f.logits, owner, agents.size());
}

Forecast forecast(Context & ctx, const ForecastLayout & layout, const Var & final, const std::vector<AgentInfo> & agents)
{
  Forecast f = predict_trajectories(ctx, layout, final, agents);
  rate_confidence(ctx, layout, final, agents, f);
  return f;
}

}  // namespace hgat
