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
#ifndef HGAT__FORECASTER_HPP_
#define HGAT__FORECASTER_HPP_

#include "hgat/graph.hpp"
#include "hgat/nn.hpp"

#include <vector>

namespace hgat
{

struct ForecastLayout
{
  std::size_t dim = 64;
  std::size_t modes = 6;
  std::size_t future_steps = 12;
  /// Hidden linear+BN+ReLU layers before the coordinate and auxiliary outputs.
  std::size_t head_layers = 6;
  std::size_t confidence_layers = 5;
};

/**
 * @brief Multimodal output for a set of agents.
 *
 * Rows are agent-major (row = agent * K + mode). Coordinates are frame-relative
 * [x0 y0 x1 y1 ...] per row.
 */
struct Forecast
{
  std::size_t agents = 0;
  std::size_t modes = 0;
  std::size_t future_steps = 0;
  /// [N*K x 2T]
  Var coords;
  /// [N*K x D]
  Var aux;
  /// [N*K x 1]
  Var logits;
  /// [N*K x 1], softmax of the logits over each agent's modes
  Var confidences;
};

/// Plain-value predictions (no tape) for evaluation and output.
struct PredictionSet
{
  std::size_t agents = 0;
  std::size_t modes = 0;
  std::size_t future_steps = 0;
  Tensor coords;
  Tensor confidences;

  Vec2 point(std::size_t agent, std::size_t mode, std::size_t t) const;
  double confidence(std::size_t agent, std::size_t mode) const { return confidences[agent * modes + mode]; }
};

PredictionSet to_prediction_set(const Forecast & f);

/// Parameters: `head.<type>.mode<k>` (hidden stack), `.coords` (zero-initialized),
/// `.aux`, and `conf.<type>` (confidence MLP on [final | aux]).
void add_forecaster(ParameterStore & store, const ForecastLayout & layout, Rng & rng);

/// Coordinates and auxiliary features. Every agent is routed to the heads of its own
/// type; heads of a type present in the batch run over all agents so batch statistics
/// never come from a single row, and only that type's rows are kept.
Forecast predict_trajectories(
  Context & ctx, const ForecastLayout & layout, const Var & final, const std::vector<AgentInfo> & agents);

/// Fills logits and confidences of `f`.
void rate_confidence(
  Context & ctx, const ForecastLayout & layout, const Var & final, const std::vector<AgentInfo> & agents, Forecast & f);

Forecast forecast(Context & ctx, const ForecastLayout & layout, const Var & final, const std::vector<AgentInfo> & agents);

/// Per-step displacements (local heading frame, agent-major rows [N*K x 2T]) turned into
/// absolute frame-relative points starting from each agent's last position.
Var decode_displacements(Context & ctx, const Var & deltas, const std::vector<AgentInfo> & agents, std::size_t modes);

/// Index of each agent type used for routing; throws std::invalid_argument for values
/// outside the known set.
std::size_t agent_type_slot(AgentType t);

}  // namespace hgat

#endif  // HGAT__FORECASTER_HPP_
